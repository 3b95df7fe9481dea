from django.conf import settings
from rest_framework import serializers
import logging

from rioneps.exceptions import ConfigurationError
from rioneps.serializers import OptionsSerializer, RunSerializer
from rioneps.validators import SampleCountValidator, parse_column_map, parse_number_list
from signal_io.ingest import DEFAULT_MISSING_TOKENS, IngestSpec

from .inefficiency import detect_with_series, summarize
from .models import DetectionRun
from .traces import Channel, DetectorConfig, PositionTrace

logger = logging.getLogger('rioneps')

DEFAULT_COLUMNS = 't=time_s,h=horizontal,v=vertical,p=pupil'
DELIMITER_ALIASES = {'tab': '\t', '\\t': '\t', 'comma': ',', 'semicolon': ';', 'space': ' '}


class DetectionRunSerializer(RunSerializer):
    """
    Creates a run from submitted samples: detection happens on save, only the
    summary is stored. The computed mask stays on the serializer as `mask`.
    """
    samples = serializers.ListField(
        child=serializers.FloatField(allow_null=True),
        write_only=True,
        allow_empty=False,
    )
    inefficiency_threshold = serializers.FloatField(required=False, min_value=0)
    window_size_override = serializers.IntegerField(required=False, allow_null=True, min_value=2)
    segment_count = serializers.IntegerField(read_only=True)

    class Meta:
        model = DetectionRun
        fields = [
            'id', 'name', 'channel', 'unit_label',
            'sample_rate_hz', 'inefficiency_threshold', 'window_size_override', 'window_size',
            'sample_count', 'missing_count', 'window_count', 'flagged_count', 'flagged_fraction',
            'max_im', 'segment_count', 'segments', 'samples', 'created_at', 'updated_at',
        ]
        read_only_fields = [
            'id', 'window_size', 'sample_count', 'missing_count', 'window_count', 'flagged_count',
            'flagged_fraction', 'max_im', 'segments', 'created_at', 'updated_at',
        ]

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.mask = None
        self.fields['samples'].validators.append(SampleCountValidator(settings.RIONEPS_MAX_API_SAMPLES))

    def validate_sample_rate_hz(self, value):
        if not value > 0:
            raise serializers.ValidationError("Sample rate must be positive.")
        return value

    def validate(self, data):
        threshold = data.get('inefficiency_threshold', settings.RIONEPS_DEFAULT_THRESHOLD)
        try:
            data['config'] = DetectorConfig(
                sample_rate_hz=data['sample_rate_hz'],
                inefficiency_threshold=threshold,
                window_size_override=data.get('window_size_override'),
            )
        except ConfigurationError as e:
            raise serializers.ValidationError({'sample_rate_hz': str(e)})

        if len(data['samples']) < data['config'].window_size:
            raise serializers.ValidationError({
                'samples': (
                    f"At least {data['config'].window_size} samples (one window) are needed, "
                    f"got {len(data['samples'])}."
                )
            })
        return data

    def create(self, validated_data):
        samples = validated_data.pop('samples')
        config = validated_data.pop('config')
        trace = PositionTrace(
            samples=samples,
            sample_rate_hz=config.sample_rate_hz,
            channel=Channel(validated_data.get('channel', Channel.OTHER.value)),
            unit_label=validated_data.get('unit_label', ''),
        )
        mask, series = detect_with_series(trace, config)
        summary = summarize(trace, series, mask)
        self.mask = mask

        validated_data.update(
            inefficiency_threshold=config.inefficiency_threshold,
            window_size_override=config.window_size_override,
            window_size=config.window_size,
            sample_count=summary.sample_count,
            missing_count=summary.missing_count,
            window_count=summary.window_count,
            flagged_count=summary.flagged_count,
            flagged_fraction=summary.flagged_fraction,
            max_im=summary.max_im,
            segments=[segment.as_dict() for segment in summary.segments],
        )
        return super().create(validated_data)


class DetectorOptionsSerializer(OptionsSerializer):
    """Detector flags shared by the detect, stream and calibrate commands."""
    sample_rate = serializers.FloatField()
    threshold = serializers.FloatField(required=False, allow_null=True)
    window = serializers.IntegerField(required=False, allow_null=True)

    def validate_sample_rate(self, value):
        if not value > 0:
            raise serializers.ValidationError("--sample-rate must be a positive number of Hz.")
        return value

    def validate_threshold(self, value):
        if value is not None and not value >= 0:
            raise serializers.ValidationError("--threshold must be >= 0.")
        return value

    def validate_window(self, value):
        if value is not None and value < 2:
            raise serializers.ValidationError("--window must be at least 2 samples.")
        return value

    def validate(self, data):
        threshold = data.get('threshold')
        if threshold is None:
            threshold = settings.RIONEPS_DEFAULT_THRESHOLD
        try:
            data['config'] = DetectorConfig(
                sample_rate_hz=data['sample_rate'],
                inefficiency_threshold=threshold,
                window_size_override=data.get('window'),
            )
        except ConfigurationError as e:
            raise serializers.ValidationError({'sample_rate': f"{e} (use --window)"})
        return data


class IngestOptionsSerializer(OptionsSerializer):
    """Trace-file layout flags, turned into an IngestSpec."""
    sample_rate = serializers.FloatField()
    columns = serializers.CharField(required=False, default=DEFAULT_COLUMNS)
    delimiter = serializers.CharField(required=False, default=',', trim_whitespace=False)
    missing_values = serializers.CharField(required=False, allow_blank=True, default='')
    missing_tokens = serializers.CharField(required=False, allow_blank=True, allow_null=True, default=None)
    no_header = serializers.BooleanField(required=False, default=False)
    check_rate = serializers.BooleanField(required=False, default=False)
    time_unit = serializers.FloatField(required=False, default=1.0)
    unit_label = serializers.CharField(required=False, allow_blank=True, default='')

    def validate_columns(self, value):
        return parse_column_map(value)

    def validate_delimiter(self, value):
        value = DELIMITER_ALIASES.get(value, value)
        if len(value) != 1:
            raise serializers.ValidationError("--delimiter must be a single character (or tab/comma/semicolon/space).")
        return value

    def validate_missing_values(self, value):
        return parse_number_list(value)

    def validate_missing_tokens(self, value):
        if value is None:
            return DEFAULT_MISSING_TOKENS
        return tuple(token.strip() for token in value.split(',')) + ('',)

    def validate_time_unit(self, value):
        if not value > 0:
            raise serializers.ValidationError("--time-unit must be positive (seconds per timestamp unit).")
        return value

    def validate(self, data):
        columns = data['columns']
        try:
            data['spec'] = IngestSpec(
                sample_rate_hz=data['sample_rate'],
                horizontal_column=columns.get('h'),
                vertical_column=columns.get('v'),
                time_column=columns.get('t'),
                pupil_column=columns.get('p'),
                delimiter=data['delimiter'],
                has_header=not data['no_header'],
                missing_tokens=data['missing_tokens'],
                missing_values=data['missing_values'],
                check_rate=data['check_rate'],
                rate_tolerance=settings.RIONEPS_RATE_TOLERANCE,
                time_unit_s=data['time_unit'],
                unit_label=data['unit_label'],
                strict_columns='columns' in self.initial_data,
            )
        except ConfigurationError as e:
            raise serializers.ValidationError({'columns': str(e)})
        return data
