from django.contrib import admin

from rioneps.admin import rioneps_admin_site

from .models import DetectionRun


@admin.register(DetectionRun, site=rioneps_admin_site)
class DetectionRunAdmin(admin.ModelAdmin):
    list_display = ('__str__', 'owner', 'channel', 'sample_rate_hz', 'inefficiency_threshold',
                    'flagged_fraction', 'max_im', 'created_at')
    list_filter = ('channel', 'created_at')
    search_fields = ('name', 'owner__username')
    readonly_fields = ('window_size', 'sample_count', 'missing_count', 'window_count', 'flagged_count',
                       'flagged_fraction', 'max_im', 'segments', 'created_at', 'updated_at')
