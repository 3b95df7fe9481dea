"""
Shared base for the detect, stream, synth and calibrate management commands.

Exit codes: 0 success, 1 usage error (bad or inconsistent flags), 2 data error
(unreadable input, trace too short, label mismatch). Both error kinds leave the
command as CommandError carrying the returncode, so `manage.py` and
`rioneps.cli.run` report them the same way.
"""
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from detection.serializers import DetectorOptionsSerializer, IngestOptionsSerializer

from .exceptions import ConfigurationError, IngestError, TraceInputError, WindowBoundsError

logger = logging.getLogger('rioneps')

USAGE_ERROR = 1
DATA_ERROR = 2


def flag_name(field):
    return '--' + field.replace('_', '-')


def format_validation_errors(errors):
    """Serializer errors as '--flag: message' lines."""
    lines = []
    for field, messages in errors.items():
        if isinstance(messages, dict):
            messages = [f"{key}: {value}" for key, value in messages.items()]
        elif not isinstance(messages, (list, tuple)):
            messages = [messages]
        prefix = '' if field == 'non_field_errors' else f"{flag_name(field)}: "
        lines.extend(f"{prefix}{message}" for message in messages)
    return '\n'.join(lines)


class RionepsCommand(BaseCommand):
    requires_system_checks = []
    # Lets callers (rioneps.cli.run, call_command in tests) hand in a text stream.
    stealth_options = ('stdin',)

    def add_detector_arguments(self, parser, threshold=True):
        parser.add_argument('--sample-rate', type=float, required=True,
                            help='Sampling rate in Hz; WS = floor(SR / 20)')
        if threshold:
            parser.add_argument('--threshold', type=float, default=None,
                                help=f'Inefficiency threshold IT (default {settings.RIONEPS_DEFAULT_THRESHOLD:g})')
        parser.add_argument('--window', type=int, default=None,
                            help='Window size in samples, overriding SR / 20')

    def add_ingest_arguments(self, parser):
        parser.add_argument('--columns', default=None,
                            help='code=column pairs, codes t/h/v/p (default t=time_s,h=horizontal,v=vertical,p=pupil)')
        parser.add_argument('--delimiter', default=None, help='Field separator (",", tab, ";", ...)')
        parser.add_argument('--missing-values', default=None,
                            help='Comma separated numeric sentinels meaning tracking loss, e.g. "0,-1"')
        parser.add_argument('--missing-tokens', default=None,
                            help='Comma separated text tokens meaning tracking loss, e.g. ".,NaN"')
        parser.add_argument('--no-header', action='store_true', help='The file has no header row')
        parser.add_argument('--check-rate', action='store_true',
                            help='Warn when timestamps disagree with --sample-rate')
        parser.add_argument('--time-unit', type=float, default=None,
                            help='Seconds per timestamp unit (0.001 for milliseconds)')
        parser.add_argument('--unit-label', default=None, help='Position unit, e.g. deg or px')

    def validated(self, serializer_class, options, fields):
        """Run a serializer over the given option names; invalid flags exit with code 1."""
        data = {field: options[field] for field in fields if options.get(field) is not None}
        serializer = serializer_class(data=data)
        if not serializer.is_valid():
            raise CommandError(format_validation_errors(serializer.errors), returncode=USAGE_ERROR)
        return serializer.validated_data

    def ingest_spec(self, options):
        fields = ['sample_rate', 'columns', 'delimiter', 'missing_values', 'missing_tokens',
                  'no_header', 'check_rate', 'time_unit', 'unit_label']
        return self.validated(IngestOptionsSerializer, options, fields)['spec']

    def detector_config(self, options):
        return self.validated(DetectorOptionsSerializer, options, ['sample_rate', 'threshold', 'window'])['config']

    @contextmanager
    def reported_errors(self):
        """Translate library errors into CommandError with the matching exit code."""
        try:
            yield
        except ConfigurationError as e:
            logger.warning(f"{self.__class__.__module__}: {e}")
            raise CommandError(str(e), returncode=USAGE_ERROR)
        except (IngestError, TraceInputError, WindowBoundsError) as e:
            logger.error(f"{self.__class__.__module__}: {e}")
            raise CommandError(str(e), returncode=DATA_ERROR)
        except OSError as e:
            logger.error(f"{self.__class__.__module__}: {e}")
            location = f"{e.filename}: " if e.filename else ''
            raise CommandError(f"{location}{e.strerror or e}", returncode=DATA_ERROR)

    def input_stream(self, options):
        return options.get('stdin') or sys.stdin

    def default_output(self, input_path, suffix):
        """<RIONEPS_OUTPUT_DIR>/<input stem><suffix>"""
        return Path(settings.RIONEPS_OUTPUT_DIR) / f"{Path(input_path).stem}{suffix}"
