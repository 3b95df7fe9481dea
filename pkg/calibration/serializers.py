from django.conf import settings
from rest_framework import serializers

from rioneps.exceptions import ConfigurationError
from rioneps.serializers import OptionsSerializer
from rioneps.validators import threshold_grid_validator

from .sweep import parse_thresholds


class SweepOptionsSerializer(OptionsSerializer):
    """calibrate flags: trace/label pairing and the threshold grid."""
    input = serializers.ListField(child=serializers.CharField(), allow_empty=False)
    labels = serializers.ListField(child=serializers.CharField(), allow_empty=False)
    thresholds = serializers.CharField(required=False, validators=[threshold_grid_validator])

    def validate_thresholds(self, value):
        try:
            return parse_thresholds(value)
        except ConfigurationError as e:
            raise serializers.ValidationError(str(e))

    def validate(self, data):
        if len(data['input']) != len(data['labels']):
            raise serializers.ValidationError({
                'labels': f"got {len(data['labels'])} label files for {len(data['input'])} inputs"
            })
        if 'thresholds' not in data:
            data['thresholds'] = parse_thresholds(settings.RIONEPS_DEFAULT_THRESHOLDS)
        return data
