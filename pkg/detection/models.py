from django.conf import settings
from django.db import models

from rioneps.models import DetectorSettingsModel, TimeStampedModel

from .traces import Channel


class DetectionRun(TimeStampedModel, DetectorSettingsModel):
    """
    Summary of one batch detection over a submitted trace.

    Samples and the per-sample mask are not stored; the run keeps the config
    echo, the window statistics summary and the flagged segments.
    """
    CHANNEL_CHOICES = [(channel.value, channel.value.title()) for channel in Channel]

    owner = models.ForeignKey(
        settings.AUTH_USER_MODEL,
        on_delete=models.CASCADE,
        related_name='detection_runs'
    )
    name = models.CharField(max_length=200, blank=True)
    channel = models.CharField(max_length=16, choices=CHANNEL_CHOICES, default=Channel.OTHER.value)
    unit_label = models.CharField(max_length=32, blank=True)

    sample_count = models.PositiveIntegerField(default=0)
    missing_count = models.PositiveIntegerField(default=0)
    window_count = models.PositiveIntegerField(default=0)
    flagged_count = models.PositiveIntegerField(default=0)
    flagged_fraction = models.FloatField(default=0.0)
    max_im = models.FloatField(default=0.0)
    segments = models.JSONField(default=list, blank=True)

    class Meta:
        ordering = ['-created_at', '-id']
        indexes = [
            models.Index(fields=['owner', 'channel'], name='detect_run_owner_chan_idx'),
        ]

    def __str__(self):
        label = self.name or f"run {self.pk}"
        return f"{label} ({self.channel}, IT={self.inefficiency_threshold:g}): {self.flagged_count}/{self.sample_count} flagged"

    @property
    def segment_count(self):
        return len(self.segments)
