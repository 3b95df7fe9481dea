from pathlib import Path

from rioneps.commands import RionepsCommand
from signal_io import OutputPaths, build_report, load_trace, write_outputs

CHANNEL_CHOICES = ('h', 'v', 'both', 'union')


class Command(RionepsCommand):
    help = 'Batch RIONEPS detection on a delimited trace file; writes mask, segments and stats files.'

    def add_arguments(self, parser):
        parser.add_argument('--input', required=True, help='Trace file')
        parser.add_argument('--output', default=None,
                            help='Mask file; segments/stats/im files are written next to it')
        self.add_detector_arguments(parser)
        parser.add_argument('--channel', choices=CHANNEL_CHOICES, default='both',
                            help='Channel(s) to analyse; union also ORs the channel masks')
        parser.add_argument('--emit-im', action='store_true',
                            help='Also write per-window IM series (stats file and *_im.csv)')
        self.add_ingest_arguments(parser)

    def handle(self, *args, **options):
        config = self.detector_config(options)
        spec = self.ingest_spec(options)
        channel = options['channel']
        output = Path(options['output']) if options['output'] else self.default_output(options['input'], '_mask.csv')
        paths = OutputPaths.from_mask_path(output, with_im=options['emit_im'])

        with self.reported_errors():
            recording = load_trace(options['input'], spec)
            codes = [channel] if channel in ('h', 'v') else [trace.channel.code for trace in recording.traces]
            report = build_report(recording, config, channels=codes, union=channel == 'union')
            write_outputs(report, paths, emit_im=options['emit_im'])

        for code, result in report.channels.items():
            summary = result.summary
            self.stdout.write(
                f"{code}: {summary.flagged_count}/{summary.sample_count} samples flagged "
                f"({len(summary.segments)} segments, max IM {summary.max_im:.3f})"
            )
        if report.union is not None:
            self.stdout.write(f"union: {report.union.flagged_count}/{report.length} samples flagged")
        for warning in report.warnings:
            self.stderr.write(f"warning: {warning}")
        self.stdout.write(f"wrote {', '.join(str(path) for path in paths.written())}")
