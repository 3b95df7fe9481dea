from django.contrib.admin import AdminSite
from django.contrib.auth import get_user_model
from django.contrib.auth.admin import GroupAdmin, UserAdmin
from django.contrib.auth.models import Group


class RionepsAdminSite(AdminSite):
    site_header = 'RIONEPS Administration'
    site_title = 'RIONEPS Admin'
    index_title = 'Detection runs'


rioneps_admin_site = RionepsAdminSite(name='rioneps_admin')
rioneps_admin_site.register(get_user_model(), UserAdmin)
rioneps_admin_site.register(Group, GroupAdmin)
