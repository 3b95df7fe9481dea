from pathlib import Path

import numpy as np

from detection.traces import Channel
from rioneps.commands import RionepsCommand
from rioneps.exceptions import ConfigurationError
from signal_io import Recording, write_labels, write_trace

from ...generator import Fixation, NoiseInjection, SynthSpec, place_bursts, synthesize


def parse_fixations(text):
    """'0:0.6,5:0.4' -> [Fixation(0.0, 0.6), Fixation(5.0, 0.4)]"""
    fixations = []
    for pair in text.split(','):
        position, dwell = pair.split(':')
        fixations.append(Fixation(float(position), float(dwell)))
    return fixations


def parse_intervals(text):
    """'100:219,800:919' -> [(100, 219), (800, 919)] (inclusive sample indices)"""
    intervals = []
    for pair in text.split(','):
        start, end = pair.split(':')
        intervals.append((int(start), int(end)))
    return intervals


class Command(RionepsCommand):
    help = 'Write a synthetic eye-position trace with labelled telegraph-noise bursts.'

    def add_arguments(self, parser):
        parser.add_argument('--output', required=True, help='Trace file to write')
        parser.add_argument('--labels', default=None, help='Label file (default <output stem>_labels.csv)')
        parser.add_argument('--sample-rate', type=float, default=500.0)
        parser.add_argument('--duration', type=float, default=10.0, help='Seconds')
        parser.add_argument('--fixations', default='0:0.6,5:0.4,-3:0.5',
                            help='position:dwell_s pairs, repeated until the duration is filled')
        parser.add_argument('--saccade-ms', type=float, default=30.0)
        parser.add_argument('--jitter', type=float, default=0.01, help='Gaussian jitter standard deviation')
        parser.add_argument('--channel', choices=('h', 'v'), default='h')

        bursts = parser.add_mutually_exclusive_group()
        bursts.add_argument('--bursts', default=None, help='Explicit start:end sample intervals')
        bursts.add_argument('--burst-count', type=int, default=4, help='Number of randomly placed bursts')
        parser.add_argument('--burst-length', type=int, default=120, help='Samples per random burst')
        parser.add_argument('--offset', type=float, default=2.0, help='False-position offset')
        parser.add_argument('--switch-probability', type=float, default=0.5)
        parser.add_argument('--missing-probability', type=float, default=0.0)
        parser.add_argument('--seed', type=int, default=None, help='Random seed (printed when omitted)')

    def handle(self, *args, **options):
        seed = options['seed']
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % 2 ** 32)

        with self.reported_errors():
            try:
                fixations = parse_fixations(options['fixations'])
                explicit = parse_intervals(options['bursts']) if options['bursts'] else None
            except ValueError as e:
                flag = '--bursts' if options['bursts'] else '--fixations'
                raise ConfigurationError(f"{flag}: {e}")

            channel = Channel.HORIZONTAL if options['channel'] == 'h' else Channel.VERTICAL
            spec = SynthSpec(
                sample_rate_hz=options['sample_rate'],
                duration_s=options['duration'],
                fixations=fixations,
                saccade_duration_s=options['saccade_ms'] / 1000.0,
                jitter_sd=options['jitter'],
                seed=seed,
                channel=channel,
            )
            if explicit is None:
                margin = int(spec.sample_rate_hz // 20)
                explicit = place_bursts(spec.sample_count, options['burst_count'], options['burst_length'],
                                        seed=np.random.SeedSequence(seed).spawn(2)[1], margin=margin)
            injection = NoiseInjection(
                intervals=explicit,
                offset=options['offset'],
                switch_probability=options['switch_probability'],
                missing_probability=options['missing_probability'],
            )
            trace, labels = synthesize(spec, injection)

            recording = Recording(sample_rate_hz=spec.sample_rate_hz)
            setattr(recording, channel.value, trace)
            output = Path(options['output'])
            labels_path = Path(options['labels']) if options['labels'] else output.with_name(
                f"{output.stem}_labels.csv")
            write_trace(recording, output)
            write_labels(labels, labels_path)

        self.stdout.write(f"seed={seed}")
        self.stdout.write(
            f"wrote {len(trace)} samples to {output} and {labels.positive_count} labelled samples "
            f"in {len(labels.intervals())} bursts to {labels_path}"
        )
