"""
Value types shared by the batch detector, the streaming detector, signal I/O,
synthesis and calibration.

Samples are held as float64 numpy arrays with NaN marking a missing sample.
"""
import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Iterator, Optional

import numpy as np

from rioneps.exceptions import ConfigurationError

# WS = SR / WINDOW_DIVISOR, i.e. a 50 ms window
WINDOW_DIVISOR = 20
MIN_WINDOW_SIZE = 2


class Channel(str, Enum):
    HORIZONTAL = 'horizontal'
    VERTICAL = 'vertical'
    OTHER = 'other'

    @property
    def code(self):
        return {'horizontal': 'h', 'vertical': 'v'}.get(self.value, 'o')


def as_sample_array(samples) -> np.ndarray:
    """
    Convert a sequence of optional reals to a float64 array.

    None and non-finite values (NaN, +/-inf) all become NaN.
    """
    if isinstance(samples, np.ndarray) and samples.dtype.kind in 'iuf':
        values = samples.astype(np.float64, copy=True)
    else:
        values = np.array(
            [np.nan if value is None else value for value in samples],
            dtype=np.float64,
        )
    values = values.reshape(-1)
    values[~np.isfinite(values)] = np.nan
    return values


@dataclass(frozen=True, eq=False)
class PositionTrace:
    """One channel of eye-position samples (degrees, pixels, ...) at a fixed rate."""
    samples: np.ndarray
    sample_rate_hz: float
    channel: Channel = Channel.OTHER
    unit_label: str = ''

    def __post_init__(self):
        rate = float(self.sample_rate_hz)
        if not math.isfinite(rate) or rate <= 0:
            raise ConfigurationError(f"sample rate must be a positive number, got {self.sample_rate_hz}")
        values = as_sample_array(self.samples)
        values.flags.writeable = False
        object.__setattr__(self, 'samples', values)
        object.__setattr__(self, 'sample_rate_hz', rate)
        object.__setattr__(self, 'channel', Channel(self.channel))

    def __len__(self):
        return int(self.samples.shape[0])

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.samples)

    @property
    def missing_count(self) -> int:
        return int(np.count_nonzero(self.missing))

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate_hz

    def with_samples(self, samples) -> 'PositionTrace':
        """Copy of this trace carrying different samples (same rate, channel, unit)."""
        return replace(self, samples=samples)


def window_size(sample_rate_hz: float) -> int:
    """
    Window size in samples for a sample rate: floor(SR / 20).

    Raises ConfigurationError when the result is below 2, since a shorter window
    holds no adjacent-sample difference.
    """
    rate = float(sample_rate_hz)
    if not math.isfinite(rate) or rate <= 0:
        raise ConfigurationError(f"sample rate must be a positive number, got {sample_rate_hz}")
    ws = int(math.floor(rate / WINDOW_DIVISOR))
    if ws < MIN_WINDOW_SIZE:
        raise ConfigurationError(
            f"sample rate too low for SR/{WINDOW_DIVISOR} windowing ({rate:g} Hz gives WS={ws}, "
            f"need WS >= {MIN_WINDOW_SIZE}); supply window_size_override"
        )
    return ws


@dataclass(frozen=True)
class DetectorConfig:
    """Sample rate, inefficiency threshold (IT) and optional window-size override."""
    sample_rate_hz: float
    inefficiency_threshold: float
    window_size_override: Optional[int] = None

    def __post_init__(self):
        rate = float(self.sample_rate_hz)
        if not math.isfinite(rate) or rate <= 0:
            raise ConfigurationError(f"sample rate must be a positive number, got {self.sample_rate_hz}")
        threshold = float(self.inefficiency_threshold)
        if math.isnan(threshold) or threshold < 0:
            raise ConfigurationError(f"inefficiency threshold must be >= 0, got {self.inefficiency_threshold}")
        override = self.window_size_override
        if override is not None:
            if isinstance(override, bool) or int(override) != override:
                raise ConfigurationError(f"window size must be an integer, got {override}")
            override = int(override)
            if override < MIN_WINDOW_SIZE:
                raise ConfigurationError(f"window size must be at least {MIN_WINDOW_SIZE}, got {override}")
        object.__setattr__(self, 'sample_rate_hz', rate)
        object.__setattr__(self, 'inefficiency_threshold', threshold)
        object.__setattr__(self, 'window_size_override', override)
        # Rejects SR/20 < 2 at construction time.
        self.window_size

    @property
    def window_size(self) -> int:
        if self.window_size_override is not None:
            return self.window_size_override
        return window_size(self.sample_rate_hz)

    def with_threshold(self, threshold: float) -> 'DetectorConfig':
        return replace(self, inefficiency_threshold=threshold)

    def as_dict(self):
        return {
            'sample_rate_hz': self.sample_rate_hz,
            'inefficiency_threshold': self.inefficiency_threshold,
            'window_size_override': self.window_size_override,
            'window_size': self.window_size,
        }


@dataclass(frozen=True)
class WindowStats:
    start_index: int
    tdt: float
    datcf: float
    valid_count: int
    im: float


@dataclass(frozen=True, eq=False)
class InefficiencySeries(Sequence):
    """
    Window statistics for every window start 0 .. N - WS, stored column-wise.

    Indexing yields WindowStats; the arrays are exposed for vectorized use
    (they mirror the IM, DATCF and TDT outputs of the reference routine).
    """
    window_size: int
    tdt: np.ndarray
    datcf: np.ndarray
    valid_count: np.ndarray
    im: np.ndarray

    def __len__(self):
        return int(self.im.shape[0])

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(len(self)))]
        count = len(self)
        if index < 0:
            index += count
        if not 0 <= index < count:
            raise IndexError(f"window index {index} out of range for {count} windows")
        return WindowStats(
            start_index=int(index),
            tdt=float(self.tdt[index]),
            datcf=float(self.datcf[index]),
            valid_count=int(self.valid_count[index]),
            im=float(self.im[index]),
        )

    def __iter__(self) -> Iterator[WindowStats]:
        for index in range(len(self)):
            yield self[index]

    @property
    def start_indices(self) -> np.ndarray:
        return np.arange(len(self))

    @property
    def max_im(self) -> float:
        return float(self.im.max()) if len(self) else 0.0


@dataclass(frozen=True, eq=False)
class NoiseMask:
    """Per-sample RIONEPS flags: False = clean, True = RIONEPS."""
    flags: np.ndarray

    def __post_init__(self):
        flags = np.asarray(self.flags, dtype=bool).reshape(-1)
        object.__setattr__(self, 'flags', flags)

    def __len__(self):
        return int(self.flags.shape[0])

    def __eq__(self, other):
        if not isinstance(other, NoiseMask):
            return NotImplemented
        return np.array_equal(self.flags, other.flags)

    @property
    def flagged_count(self) -> int:
        return int(np.count_nonzero(self.flags))

    @property
    def flagged_fraction(self) -> float:
        return self.flagged_count / len(self) if len(self) else 0.0

    def tolist(self):
        return [bool(flag) for flag in self.flags]

    @classmethod
    def clean(cls, length: int) -> 'NoiseMask':
        return cls(np.zeros(length, dtype=bool))


@dataclass(frozen=True)
class NoiseSegment:
    """A maximal run of flagged samples, indices inclusive."""
    start_index: int
    end_index: int
    start_time_s: float
    end_time_s: float
    peak_im: float

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class SeriesSummary:
    sample_count: int
    missing_count: int
    window_count: int
    max_im: float
    flagged_count: int
    flagged_fraction: float
    segments: list = field(default_factory=list)

    def as_dict(self):
        data = asdict(self)
        data['segment_count'] = len(self.segments)
        data['segments'] = [segment.as_dict() for segment in self.segments]
        return data
