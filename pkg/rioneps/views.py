from django.db import transaction
from rest_framework import viewsets
from rest_framework.permissions import IsAuthenticated
import logging

from .permissions import IsOwner

logger = logging.getLogger('rioneps')


class OwnedModelViewSet(viewsets.ModelViewSet):
    """
    ModelViewSet for models with an `owner` foreign key.

    Users only see their own objects. New objects are saved with the
    requesting user as owner inside a transaction.
    """
    permission_classes = [IsAuthenticated, IsOwner]

    def get_queryset(self):
        return super().get_queryset().filter(owner=self.request.user)

    @transaction.atomic
    def perform_create(self, serializer):
        instance = serializer.save(owner=self.request.user)
        logger.debug(f"{self.request.user} created {instance.__class__.__name__} {instance.pk}")

    def perform_destroy(self, instance):
        label = f"{instance.__class__.__name__} {instance.pk}"
        with transaction.atomic():
            instance.delete()
        logger.info(f"{self.request.user} deleted {label}")
