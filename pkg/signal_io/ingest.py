"""
Loading eye-position recordings from delimited text exports.

Vendor exports differ in column names and in how tracking loss is written
(blank fields, `NaN`, `.`, 0, -1, ...). IngestSpec names the columns and the
tokens/sentinels that mean "missing"; every row becomes exactly one sample per
mapped channel, present or missing. The declared sample rate is authoritative;
timestamps are only cross-checked.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from detection.traces import Channel, PositionTrace
from rioneps.exceptions import ConfigurationError, IngestError

logger = logging.getLogger('rioneps')

Column = Union[str, int]

DEFAULT_MISSING_TOKENS = ('', 'NaN', 'nan', 'NAN', 'NA', 'N/A', 'null', 'None')
DEFAULT_RATE_TOLERANCE = 0.01

# Column names used by write_trace; IngestSpec.for_written_trace reads them back.
TIME_COLUMN = 'time_s'
HORIZONTAL_COLUMN = 'horizontal'
VERTICAL_COLUMN = 'vertical'
PUPIL_COLUMN = 'pupil'

_PANDAS_LINE = re.compile(r'line (\d+)')


@dataclass(frozen=True)
class IngestSpec:
    """How to read one delimited trace file."""
    sample_rate_hz: float
    horizontal_column: Optional[Column] = None
    vertical_column: Optional[Column] = None
    time_column: Optional[Column] = None
    pupil_column: Optional[Column] = None
    delimiter: str = ','
    has_header: bool = True
    missing_tokens: Sequence[str] = DEFAULT_MISSING_TOKENS
    missing_values: Sequence[float] = ()
    check_rate: bool = False
    rate_tolerance: float = DEFAULT_RATE_TOLERANCE
    # Seconds per timestamp unit, e.g. 0.001 for millisecond timestamps.
    time_unit_s: float = 1.0
    unit_label: str = ''
    # When False, mapped columns absent from the file are skipped instead of
    # rejected (used for the default column map).
    strict_columns: bool = True

    def __post_init__(self):
        if self.horizontal_column is None and self.vertical_column is None:
            raise ConfigurationError("at least one of the horizontal/vertical columns must be mapped")
        rate = float(self.sample_rate_hz)
        if not math.isfinite(rate) or rate <= 0:
            raise ConfigurationError(f"sample rate must be a positive number, got {self.sample_rate_hz}")
        object.__setattr__(self, 'sample_rate_hz', rate)
        object.__setattr__(self, 'missing_tokens', tuple(token.strip() for token in self.missing_tokens))
        object.__setattr__(self, 'missing_values', tuple(float(value) for value in self.missing_values))

    @classmethod
    def for_written_trace(cls, sample_rate_hz, **overrides):
        """Spec matching the layout write_trace produces."""
        options = dict(
            sample_rate_hz=sample_rate_hz,
            horizontal_column=HORIZONTAL_COLUMN,
            vertical_column=VERTICAL_COLUMN,
            time_column=TIME_COLUMN,
            pupil_column=PUPIL_COLUMN,
        )
        options.update(overrides)
        return cls(**options)


@dataclass(eq=False)
class Recording:
    """Channels read from one file, plus pass-through time and pupil columns."""
    sample_rate_hz: float
    horizontal: Optional[PositionTrace] = None
    vertical: Optional[PositionTrace] = None
    time_s: Optional[np.ndarray] = None
    pupil: Optional[np.ndarray] = None
    path: Optional[Path] = None
    warnings: list = field(default_factory=list)

    @property
    def traces(self):
        return [trace for trace in (self.horizontal, self.vertical) if trace is not None]

    def __len__(self):
        return len(self.traces[0]) if self.traces else 0

    def channel(self, code):
        """Trace for a channel code 'h' or 'v'."""
        trace = {'h': self.horizontal, 'v': self.vertical}.get(code)
        if trace is None:
            raise IngestError(f"channel '{code}' is not present in the recording", path=self.path)
        return trace


def _line_number(row_index, spec):
    # 1-based file line for a 0-based data row
    return row_index + (2 if spec.has_header else 1)


def _resolve_column(frame, column, path):
    if column in frame.columns:
        return column
    text = str(column)
    if text.isdigit():
        position = int(text)
        if position in frame.columns:
            return position
        if position < len(frame.columns):
            return frame.columns[position]
    raise IngestError(f"column {column!r} not found (available: {list(frame.columns)})", path=path)


def _has_column(frame, column):
    if column in frame.columns:
        return True
    text = str(column)
    return text.isdigit() and (int(text) in frame.columns or int(text) < len(frame.columns))


def _parse_column(frame, column, spec, path):
    name = _resolve_column(frame, column, path)
    tokens = frame[name]
    # Fields absent from a short row read as NaN, empty fields as ''.
    # Blank lines read as rows with no fields at all; they are missing samples.
    absent = tokens.isna() & ~frame.isna().all(axis=1)
    if absent.any():
        row = int(np.flatnonzero(absent.to_numpy())[0])
        raise IngestError(f"row has no field for column {name!r}", path=path, line_number=_line_number(row, spec))

    stripped = tokens.fillna('').str.strip()
    missing = stripped.isin(spec.missing_tokens)
    values = pd.to_numeric(stripped.where(~missing), errors='coerce')
    unparseable = values.isna() & ~missing
    if unparseable.any():
        row = int(np.flatnonzero(unparseable.to_numpy())[0])
        raise IngestError(
            f"cannot parse {tokens.iloc[row]!r} in column {name!r} as a number",
            path=path,
            line_number=_line_number(row, spec),
        )

    values = values.to_numpy(dtype=np.float64)
    if spec.missing_values:
        values[np.isin(values, spec.missing_values)] = np.nan
    values[~np.isfinite(values)] = np.nan
    return values


def _read_frame(path, spec):
    try:
        return pd.read_csv(
            path,
            sep=spec.delimiter,
            header=0 if spec.has_header else None,
            dtype=str,
            index_col=False,
            keep_default_na=False,
            skip_blank_lines=False,
        )
    except FileNotFoundError:
        raise IngestError("file not found", path=path)
    except pd.errors.EmptyDataError:
        raise IngestError("file is empty", path=path)
    except pd.errors.ParserError as exc:
        match = _PANDAS_LINE.search(str(exc))
        line = int(match.group(1)) if match else None
        raise IngestError(f"malformed row: {exc}", path=path, line_number=line)
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestError(f"cannot read file: {exc}", path=path)


def cross_check_rate(time_s, sample_rate_hz, tolerance=DEFAULT_RATE_TOLERANCE):
    """
    Compare the median timestamp step against 1 / sample_rate_hz.

    Returns a warning message when they disagree by more than `tolerance`
    (relative), otherwise None.
    """
    steps = np.diff(time_s[np.isfinite(time_s)])
    if steps.size == 0:
        return None
    measured_step = float(np.median(steps))
    if measured_step <= 0:
        return f"timestamps are not increasing (median step {measured_step:g} s)"
    ratio = measured_step * sample_rate_hz
    if abs(ratio - 1.0) > tolerance:
        return (
            f"timestamps imply {1.0 / measured_step:.6g} Hz but the declared sample rate is "
            f"{sample_rate_hz:g} Hz (off by {abs(ratio - 1.0):.2%})"
        )
    return None


def load_trace(path, spec: IngestSpec) -> Recording:
    """Read a delimited file into horizontal and/or vertical PositionTraces."""
    path = Path(path)
    frame = _read_frame(path, spec)

    def wanted(column):
        if column is None:
            return False
        if spec.strict_columns or _has_column(frame, column):
            return True
        logger.info(f"{path}: no column {column!r}, skipping it")
        return False

    recording = Recording(sample_rate_hz=spec.sample_rate_hz, path=path)
    for column, attribute, channel in (
        (spec.horizontal_column, 'horizontal', Channel.HORIZONTAL),
        (spec.vertical_column, 'vertical', Channel.VERTICAL),
    ):
        if not wanted(column):
            continue
        samples = _parse_column(frame, column, spec, path)
        setattr(recording, attribute, PositionTrace(
            samples=samples,
            sample_rate_hz=spec.sample_rate_hz,
            channel=channel,
            unit_label=spec.unit_label,
        ))

    if not recording.traces:
        raise IngestError(
            f"none of the position columns {spec.horizontal_column!r}, {spec.vertical_column!r} found "
            f"(available: {list(frame.columns)})",
            path=path,
        )

    if wanted(spec.pupil_column):
        recording.pupil = _parse_column(frame, spec.pupil_column, spec, path)

    if wanted(spec.time_column):
        recording.time_s = _parse_column(frame, spec.time_column, spec, path) * spec.time_unit_s
        if spec.check_rate:
            warning = cross_check_rate(recording.time_s, spec.sample_rate_hz, spec.rate_tolerance)
            if warning:
                logger.warning(f"{path}: {warning}")
                recording.warnings.append(warning)

    logger.info(
        f"Loaded {len(frame)} samples from {path} "
        f"({', '.join(trace.channel.value for trace in recording.traces)})"
    )
    return recording


def write_trace(recording: Recording, path, delimiter=','):
    """
    Write a recording in the layout IngestSpec.for_written_trace reads.

    Missing samples are written as NaN; floats use the shortest text that
    round-trips a double.
    """
    path = Path(path)
    length = len(recording)
    columns = {
        TIME_COLUMN: recording.time_s if recording.time_s is not None
        else np.arange(length) / recording.sample_rate_hz,
    }
    if recording.horizontal is not None:
        columns[HORIZONTAL_COLUMN] = recording.horizontal.samples
    if recording.vertical is not None:
        columns[VERTICAL_COLUMN] = recording.vertical.samples
    if recording.pupil is not None:
        columns[PUPIL_COLUMN] = recording.pupil

    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(columns).to_csv(path, sep=delimiter, index=False, na_rep='NaN')
    logger.info(f"Wrote {length}-sample trace to {path}")
    return path
