"""
Synthetic gaze traces with labelled RIONEPS bursts.

Clean traces are fixations joined by linear saccade ramps plus optional
Gaussian jitter. Noise is injected as two-state telegraph switching between the
true position and true + offset: inside a burst each sample toggles state with
probability p, starting from the false position.

Randomness comes from numpy's default generator (PCG64) seeded explicitly, so a
(spec, seed) pair always reproduces the same trace.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from detection.traces import Channel, PositionTrace
from rioneps.exceptions import ConfigurationError, TraceInputError

logger = logging.getLogger('rioneps')


@dataclass(frozen=True)
class Fixation:
    position: float
    dwell_s: float


def _positive(name, value):
    if not math.isfinite(value) or value <= 0:
        raise ConfigurationError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class SynthSpec:
    """
    Recipe for a clean trace. Fixations repeat cyclically until duration_s is
    filled, each followed by a ramp to the next one.
    """
    sample_rate_hz: float
    duration_s: float
    fixations: Sequence[Fixation] = (Fixation(0.0, 1.0),)
    saccade_duration_s: float = 0.03
    jitter_sd: float = 0.0
    seed: int = 0
    channel: Channel = Channel.HORIZONTAL
    unit_label: str = 'deg'

    def __post_init__(self):
        _positive('sample rate', self.sample_rate_hz)
        _positive('duration', self.duration_s)
        fixations = tuple(
            fixation if isinstance(fixation, Fixation) else Fixation(*fixation)
            for fixation in self.fixations
        )
        if not fixations:
            raise ConfigurationError("at least one fixation is required")
        for fixation in fixations:
            _positive('fixation dwell time', fixation.dwell_s)
            if round(fixation.dwell_s * self.sample_rate_hz) < 1:
                raise ConfigurationError(
                    f"fixation dwell {fixation.dwell_s} s is shorter than one sample at {self.sample_rate_hz} Hz"
                )
        if not math.isfinite(self.saccade_duration_s) or self.saccade_duration_s < 0:
            raise ConfigurationError(f"saccade duration must be >= 0, got {self.saccade_duration_s}")
        if not math.isfinite(self.jitter_sd) or self.jitter_sd < 0:
            raise ConfigurationError(f"jitter standard deviation must be >= 0, got {self.jitter_sd}")
        object.__setattr__(self, 'fixations', fixations)

    @property
    def sample_count(self) -> int:
        return int(round(self.duration_s * self.sample_rate_hz))


@dataclass(frozen=True)
class NoiseInjection:
    """Telegraph-noise bursts over inclusive (start_index, end_index) intervals."""
    intervals: Sequence[Tuple[int, int]]
    offset: float = 2.0
    switch_probability: float = 0.5
    missing_probability: float = 0.0

    def __post_init__(self):
        intervals = tuple(sorted((int(start), int(end)) for start, end in self.intervals))
        for start, end in intervals:
            if start > end:
                raise ConfigurationError(f"interval ({start}, {end}) ends before it starts")
        for (_, previous_end), (start, _) in zip(intervals, intervals[1:]):
            if start <= previous_end:
                raise ConfigurationError(f"intervals overlap at index {start}")
        if not 0 < self.switch_probability <= 1:
            raise ConfigurationError(f"switch probability must be in (0, 1], got {self.switch_probability}")
        if not 0 <= self.missing_probability <= 1:
            raise ConfigurationError(f"missing probability must be in [0, 1], got {self.missing_probability}")
        if not math.isfinite(self.offset):
            raise ConfigurationError(f"offset must be finite, got {self.offset}")
        object.__setattr__(self, 'intervals', intervals)


@dataclass(frozen=True, eq=False)
class LabelSet:
    """Per-sample ground truth: True inside injected bursts."""
    flags: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    def __post_init__(self):
        object.__setattr__(self, 'flags', np.asarray(self.flags, dtype=bool).reshape(-1))

    def __len__(self):
        return int(self.flags.shape[0])

    @property
    def positive_count(self) -> int:
        return int(np.count_nonzero(self.flags))

    def intervals(self):
        """Labelled runs as inclusive (start, end) pairs."""
        edges = np.flatnonzero(np.diff(np.concatenate(([0], self.flags.astype(np.int8), [0]))))
        return [(int(start), int(end) - 1) for start, end in zip(edges[0::2], edges[1::2])]

    def dilated(self, radius: int) -> np.ndarray:
        """Samples within `radius` samples of any labelled sample."""
        length = len(self)
        coverage = np.zeros(length + 1, dtype=np.int64)
        for start, end in self.intervals():
            coverage[max(0, start - radius)] += 1
            coverage[min(length, end + radius + 1)] -= 1
        return np.cumsum(coverage[:length]) > 0


def _clean_positions(spec: SynthSpec) -> np.ndarray:
    rate = spec.sample_rate_hz
    total = spec.sample_count
    first_dwell = int(round(spec.fixations[0].dwell_s * rate))
    if total < first_dwell:
        raise ConfigurationError(
            f"duration {spec.duration_s} s is shorter than the first fixation ({spec.fixations[0].dwell_s} s)"
        )

    ramp_samples = int(round(spec.saccade_duration_s * rate))
    pieces = []
    filled = 0
    index = 0
    while filled < total:
        current = spec.fixations[index % len(spec.fixations)]
        following = spec.fixations[(index + 1) % len(spec.fixations)]
        dwell = np.full(int(round(current.dwell_s * rate)), current.position)
        steps = np.arange(1, ramp_samples + 1) / (ramp_samples + 1)
        ramp = current.position + (following.position - current.position) * steps
        pieces.extend((dwell, ramp))
        filled += dwell.shape[0] + ramp.shape[0]
        index += 1
    return np.concatenate(pieces)[:total]


def generate(spec: SynthSpec) -> PositionTrace:
    """Clean synthetic trace; deterministic given spec.seed."""
    positions = _clean_positions(spec)
    if spec.jitter_sd > 0:
        rng = np.random.default_rng(spec.seed)
        positions = positions + rng.normal(0.0, spec.jitter_sd, positions.shape[0])
    return PositionTrace(
        samples=positions,
        sample_rate_hz=spec.sample_rate_hz,
        channel=spec.channel,
        unit_label=spec.unit_label,
    )


def inject(trace: PositionTrace, injection: NoiseInjection, seed):
    """
    Add telegraph noise inside each interval; returns (noisy trace, LabelSet).

    Samples outside the intervals are left untouched.
    """
    length = len(trace)
    rng = np.random.default_rng(seed)
    samples = np.array(trace.samples, copy=True)
    labels = np.zeros(length, dtype=bool)
    for start, end in injection.intervals:
        if start < 0 or end >= length:
            raise TraceInputError(f"interval ({start}, {end}) outside trace of {length} samples")
        count = end - start + 1
        toggles = rng.random(count) < injection.switch_probability
        toggles[0] = False
        at_false_position = np.cumsum(toggles) % 2 == 0
        burst = samples[start:end + 1] + np.where(at_false_position, injection.offset, 0.0)
        if injection.missing_probability > 0:
            burst[rng.random(count) < injection.missing_probability] = np.nan
        samples[start:end + 1] = burst
        labels[start:end + 1] = True
    return trace.with_samples(samples), LabelSet(labels)


def place_bursts(length: int, count: int, burst_length: int, seed, margin: int = 0):
    """
    `count` non-overlapping bursts of `burst_length` samples, one placed at random
    inside each of `count` equal slices of the trace, at least `margin` samples
    from the slice edges.
    """
    if count < 1 or burst_length < 1:
        raise ConfigurationError("burst count and burst length must be positive")
    slot = length // count
    if slot < burst_length + 2 * margin:
        raise ConfigurationError(
            f"{count} bursts of {burst_length} samples (margin {margin}) do not fit in {length} samples"
        )
    rng = np.random.default_rng(seed)
    intervals = []
    for index in range(count):
        low = index * slot + margin
        high = (index + 1) * slot - margin - burst_length
        start = int(rng.integers(low, high + 1))
        intervals.append((start, start + burst_length - 1))
    return intervals


def synthesize(spec: SynthSpec, injection: Optional[NoiseInjection] = None):
    """
    Generate a trace and inject noise, drawing the injection stream from a child
    of spec.seed so the whole pair is reproducible from one seed.
    """
    trace = generate(spec)
    if injection is None:
        return trace, LabelSet(np.zeros(len(trace), dtype=bool))
    child_seed = np.random.SeedSequence(spec.seed).spawn(1)[0]
    noisy, labels = inject(trace, injection, child_seed)
    logger.info(
        f"Synthesized {len(noisy)} samples at {spec.sample_rate_hz:g} Hz with "
        f"{len(injection.intervals)} bursts ({labels.positive_count} labelled samples, seed={spec.seed})"
    )
    return noisy, labels


def alternation_im(window_size: int, amplitude: float, net: float) -> float:
    """
    IM of a window of strict alternation with step `amplitude`, whose net
    displacement is `net` (0 or amplitude): ((WS - 1) * a - net) * 1000 / WS.
    """
    return ((window_size - 1) * abs(amplitude) - abs(net)) * 1000.0 / window_size
