"""
Threshold calibration against labelled traces.

The IM series is computed once per trace; each threshold only re-runs the
thresholding step. Two sets of counts are kept per threshold:

- strict: plain per-sample confusion counts against the labels
- tolerant: predicted samples within WS - 1 of a labelled sample are not
  counted as false positives (window marking widens every flagged region by
  up to WS - 1 samples on each side); they are reported as `tolerated`

The best threshold maximizes tolerant F1; ties go to the larger threshold.
"""
import logging
import math
from dataclasses import asdict, astuple, dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from detection.inefficiency import inefficiency_series, mask_from_series
from detection.traces import DetectorConfig, PositionTrace
from rioneps.exceptions import ConfigurationError, TraceInputError
from synth.generator import LabelSet

logger = logging.getLogger('rioneps')


@dataclass(frozen=True)
class ConfusionCounts:
    true_positive: int = 0
    false_positive: int = 0
    false_negative: int = 0
    true_negative: int = 0
    tolerated: int = 0

    def __add__(self, other):
        return ConfusionCounts(*(a + b for a, b in zip(astuple(self), astuple(other))))

    @property
    def total(self) -> int:
        return sum(astuple(self))

    @property
    def predicted_positive(self) -> int:
        return self.true_positive + self.false_positive + self.tolerated

    @property
    def precision(self) -> float:
        predicted = self.true_positive + self.false_positive
        # No predictions means nothing was wrongly flagged.
        return self.true_positive / predicted if predicted else 1.0

    @property
    def recall(self) -> float:
        positives = self.true_positive + self.false_negative
        return self.true_positive / positives if positives else 1.0

    @property
    def f1(self) -> float:
        precision, recall = self.precision, self.recall
        if precision + recall == 0:
            return 0.0
        return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    strict: ConfusionCounts
    tolerant: ConfusionCounts

    @property
    def predicted_positive(self) -> int:
        return self.strict.predicted_positive

    def as_record(self):
        record = {'threshold': self.threshold, 'predicted_positive': self.predicted_positive}
        for prefix, counts in (('strict', self.strict), ('tolerant', self.tolerant)):
            for name, value in asdict(counts).items():
                if prefix == 'strict' and name == 'tolerated':
                    continue
                record[f"{prefix}_{name}"] = value
            record[f"{prefix}_precision"] = counts.precision
            record[f"{prefix}_recall"] = counts.recall
            record[f"{prefix}_f1"] = counts.f1
        return record


@dataclass(frozen=True)
class SweepResult:
    rows: List[SweepRow] = field(default_factory=list)
    window_size: int = 0
    sample_count: int = 0

    @property
    def best_row(self) -> SweepRow:
        return max(self.rows, key=lambda row: (row.tolerant.f1, row.threshold))

    @property
    def best_threshold(self) -> float:
        return self.best_row.threshold

    def rows_as_records(self):
        return [row.as_record() for row in self.rows]


def validate_thresholds(thresholds) -> List[float]:
    values = [float(value) for value in thresholds]
    if not values:
        raise ConfigurationError("threshold list is empty")
    for value in values:
        if math.isnan(value) or value <= 0:
            raise ConfigurationError(f"thresholds must be positive, got {value}")
    return values


def parse_threshold_range(text: str) -> List[float]:
    """'lo:hi:step' -> [lo, lo + step, ..., hi] (hi included when on the grid)."""
    try:
        low, high, step = (float(part) for part in text.split(':'))
    except ValueError:
        raise ConfigurationError(f"threshold range must look like lo:hi:step, got {text!r}")
    if not step > 0 or high < low:
        raise ConfigurationError(f"invalid threshold range {text!r}")
    count = int(math.floor((high - low) / step + 1e-9)) + 1
    return validate_thresholds(low + step * np.arange(count))


def parse_thresholds(text: str) -> List[float]:
    """A lo:hi:step range or a comma separated list such as '50,100,inf'."""
    if ':' in text:
        return parse_threshold_range(text)
    try:
        values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ConfigurationError(f"thresholds must be numbers, got {text!r}")
    return validate_thresholds(values)


def _label_flags(labels, length):
    flags = labels.flags if isinstance(labels, LabelSet) else np.asarray(labels, dtype=bool)
    if flags.shape[0] != length:
        raise TraceInputError(f"labels have {flags.shape[0]} samples but the trace has {length}")
    return LabelSet(flags)


def score(predicted: np.ndarray, labels: LabelSet, window_size: int) -> Tuple[ConfusionCounts, ConfusionCounts]:
    """Strict and tolerant confusion counts for one predicted mask."""
    truth = labels.flags
    near_label = labels.dilated(window_size - 1)
    tp = int(np.count_nonzero(predicted & truth))
    fp = int(np.count_nonzero(predicted & ~truth))
    fn = int(np.count_nonzero(~predicted & truth))
    tn = int(np.count_nonzero(~predicted & ~truth))
    tolerated = int(np.count_nonzero(predicted & ~truth & near_label))
    strict = ConfusionCounts(tp, fp, fn, tn)
    tolerant = ConfusionCounts(tp, fp - tolerated, fn, tn, tolerated)
    return strict, tolerant


def _threshold_counts(trace, labels, config, thresholds):
    series = inefficiency_series(trace, config)
    for threshold in thresholds:
        mask = mask_from_series(series, threshold, len(trace))
        yield threshold, score(mask.flags, labels, config.window_size)


def sweep(trace: PositionTrace, labels, config: DetectorConfig, thresholds: Sequence[float]) -> SweepResult:
    """
    Score detection at each threshold against per-sample labels.

    config supplies the sample rate and window size; its own threshold is ignored.
    """
    thresholds = validate_thresholds(thresholds)
    labels = _label_flags(labels, len(trace))
    rows = [
        SweepRow(threshold=threshold, strict=strict, tolerant=tolerant)
        for threshold, (strict, tolerant) in _threshold_counts(trace, labels, config, thresholds)
    ]
    result = SweepResult(rows=rows, window_size=config.window_size, sample_count=len(trace))
    best = result.best_row
    logger.info(
        f"Swept {len(rows)} thresholds over {len(trace)} samples: best IT={best.threshold:g} "
        f"(tolerant F1={best.tolerant.f1:.3f}, strict F1={best.strict.f1:.3f})"
    )
    return result


def sweep_many(pairs: Iterable[Tuple[PositionTrace, object]], thresholds: Sequence[float],
               window_size_override: Optional[int] = None) -> SweepResult:
    """
    Pool counts over several labelled recordings and pick one threshold for all.

    Each trace is windowed at its own sample rate unless window_size_override is given.
    """
    thresholds = list(dict.fromkeys(validate_thresholds(thresholds)))
    pooled = {threshold: (ConfusionCounts(), ConfusionCounts()) for threshold in thresholds}
    sample_count = 0
    window_sizes = set()
    for trace, labels in pairs:
        config = DetectorConfig(trace.sample_rate_hz, 0.0, window_size_override)
        labels = _label_flags(labels, len(trace))
        for threshold, (strict, tolerant) in _threshold_counts(trace, labels, config, thresholds):
            pooled_strict, pooled_tolerant = pooled[threshold]
            pooled[threshold] = (pooled_strict + strict, pooled_tolerant + tolerant)
        sample_count += len(trace)
        window_sizes.add(config.window_size)
    if not sample_count:
        raise TraceInputError("no labelled recordings to calibrate on")

    rows = [SweepRow(threshold, *pooled[threshold]) for threshold in thresholds]
    result = SweepResult(
        rows=rows,
        window_size=window_sizes.pop() if len(window_sizes) == 1 else 0,
        sample_count=sample_count,
    )
    logger.info(f"Pooled sweep over {sample_count} samples: best IT={result.best_threshold:g}")
    return result
