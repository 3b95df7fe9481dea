from rest_framework import permissions
import logging

logger = logging.getLogger('rioneps')


class IsOwner(permissions.BasePermission):
    """Object-level check: only the user who submitted a run may read or delete it."""
    message = 'Only the owner of a detection run can access it.'

    def has_object_permission(self, request, view, obj):
        owner_id = getattr(obj, 'owner_id', None)
        if owner_id is None:
            logger.warning(f"{obj.__class__.__name__} {obj.pk} has no owner; access denied")
            return False
        return owner_id == request.user.pk
