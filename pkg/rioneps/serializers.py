from rest_framework import serializers
import logging

logger = logging.getLogger('rioneps')


class LoggedValidationMixin:
    """Logs rejected input at WARNING before the errors reach the caller."""

    def is_valid(self, raise_exception=False):
        valid = super().is_valid(raise_exception=False)
        if not valid:
            logger.warning(f"{self.__class__.__name__} rejected input: {dict(self.errors)}")
            if raise_exception:
                raise serializers.ValidationError(self.errors)
        return valid


class OptionsSerializer(LoggedValidationMixin, serializers.Serializer):
    """
    Validates command-line flags or request options. Nothing is saved;
    validate() leaves the derived library object (DetectorConfig, IngestSpec)
    in validated_data.
    """

    def create(self, validated_data):
        raise NotImplementedError(f"{self.__class__.__name__} does not save anything")

    def update(self, instance, validated_data):
        raise NotImplementedError(f"{self.__class__.__name__} does not save anything")


class RunSerializer(LoggedValidationMixin, serializers.ModelSerializer):
    """ModelSerializer for stored runs; timestamps are always read-only."""
    created_at = serializers.DateTimeField(read_only=True)
    updated_at = serializers.DateTimeField(read_only=True)
