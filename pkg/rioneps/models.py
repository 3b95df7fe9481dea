from django.core.exceptions import ValidationError
from django.db import models
import logging

from detection.traces import DetectorConfig

from .exceptions import ConfigurationError

logger = logging.getLogger('rioneps')


class TimeStampedModel(models.Model):
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        abstract = True


class DetectorSettingsModel(models.Model):
    """
    Abstract base for records that store the detector configuration they were
    produced with.

    `window_size` is the effective WS: the override when one was given,
    otherwise floor(sample_rate_hz / 20). clean() rejects rows where the stored
    values could not have come from a valid DetectorConfig.
    """
    sample_rate_hz = models.FloatField()
    inefficiency_threshold = models.FloatField()
    window_size_override = models.PositiveIntegerField(null=True, blank=True)
    window_size = models.PositiveIntegerField()

    class Meta:
        abstract = True

    @property
    def detector_config(self):
        return DetectorConfig(
            sample_rate_hz=self.sample_rate_hz,
            inefficiency_threshold=self.inefficiency_threshold,
            window_size_override=self.window_size_override,
        )

    def clean(self):
        super().clean()
        try:
            config = self.detector_config
        except ConfigurationError as e:
            logger.warning(f"{self.__class__.__name__} {self.pk or 'new'} has an invalid detector config: {e}")
            raise ValidationError({'sample_rate_hz': str(e)})
        if self.window_size != config.window_size:
            raise ValidationError({
                'window_size': f"Expected {config.window_size} for this sample rate and override, got {self.window_size}."
            })
