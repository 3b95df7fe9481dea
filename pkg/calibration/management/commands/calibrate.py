from pathlib import Path

from django.conf import settings

from rioneps.commands import RionepsCommand
from signal_io import load_trace, read_labels, write_sweep

from ...serializers import SweepOptionsSerializer
from ...sweep import sweep, sweep_many


class Command(RionepsCommand):
    help = (
        'Sweep the inefficiency threshold against labelled traces and report precision, '
        'recall and F1 per threshold.'
    )

    def add_arguments(self, parser):
        parser.add_argument('--input', nargs='+', required=True, help='Trace file(s)')
        parser.add_argument('--labels', nargs='+', required=True,
                            help='Label file(s) (index,label), one per --input')
        parser.add_argument('--output', default=None, help='Sweep table (default <first input stem>_sweep.csv)')
        self.add_detector_arguments(parser, threshold=False)
        parser.add_argument('--channel', choices=('h', 'v'), default='h')
        parser.add_argument('--thresholds', default=None,
                            help=f'lo:hi:step or a comma separated list (default {settings.RIONEPS_DEFAULT_THRESHOLDS})')
        self.add_ingest_arguments(parser)

    def handle(self, *args, **options):
        config = self.detector_config(options)
        spec = self.ingest_spec(options)
        sweep_options = self.validated(SweepOptionsSerializer, options, ['input', 'labels', 'thresholds'])
        inputs, label_files = sweep_options['input'], sweep_options['labels']
        thresholds = sweep_options['thresholds']
        output = Path(options['output']) if options['output'] else self.default_output(inputs[0], '_sweep.csv')

        with self.reported_errors():
            pairs = [
                (load_trace(path, spec).channel(options['channel']), read_labels(labels))
                for path, labels in zip(inputs, label_files)
            ]
            if len(pairs) == 1:
                result = sweep(*pairs[0], config, thresholds)
            else:
                result = sweep_many(pairs, thresholds, window_size_override=config.window_size_override)
            write_sweep(result, output)

        best = result.best_row
        self.stdout.write(
            f"best threshold: {best.threshold:g} (tolerant F1 {best.tolerant.f1:.3f}, "
            f"strict F1 {best.strict.f1:.3f}, {best.predicted_positive} samples flagged)"
        )
        self.stdout.write(f"wrote {output}")
