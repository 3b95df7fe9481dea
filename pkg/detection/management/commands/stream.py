import math

from rioneps.commands import RionepsCommand
from rioneps.exceptions import IngestError
from signal_io.ingest import DEFAULT_MISSING_TOKENS

from ...streaming import StreamingDetector


def parse_sample(line, line_number):
    """One stdin line -> float sample; empty or NaN-like tokens are missing."""
    token = line.strip()
    if token in DEFAULT_MISSING_TOKENS:
        return math.nan
    try:
        return float(token)
    except ValueError:
        raise IngestError(f"cannot parse {token!r} as a sample", path='<stdin>', line_number=line_number)


class Command(RionepsCommand):
    help = (
        'Streaming RIONEPS detection: reads one sample per line from stdin and writes an '
        '"index,flag" line for every sample as soon as its flag is final.'
    )

    def add_arguments(self, parser):
        self.add_detector_arguments(parser)

    def handle(self, *args, **options):
        config = self.detector_config(options)
        detector = StreamingDetector(config)
        source = self.input_stream(options)

        # Flags written before a bad line stay valid; nothing after it is emitted.
        with self.reported_errors():
            for line_number, line in enumerate(source, start=1):
                self.emit(detector.push(parse_sample(line, line_number)))
        self.emit(detector.flush())

    def emit(self, finalized):
        for index, flag in finalized:
            self.stdout.write(f"{index},{int(flag)}")
        if finalized:
            self.stdout.flush()
