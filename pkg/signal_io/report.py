"""
Per-recording detection results, one entry per analysed channel.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from detection.inefficiency import detect_with_series, summarize, union_masks
from detection.traces import DetectorConfig, InefficiencySeries, NoiseMask, PositionTrace, SeriesSummary

from .ingest import Recording

logger = logging.getLogger('rioneps')

CHANNEL_CODES = ('h', 'v')


@dataclass(eq=False)
class ChannelReport:
    trace: PositionTrace
    mask: NoiseMask
    series: InefficiencySeries
    summary: SeriesSummary

    @property
    def segments(self):
        return self.summary.segments


@dataclass(eq=False)
class DetectionReport:
    config: DetectorConfig
    length: int
    channels: Dict[str, ChannelReport] = field(default_factory=dict)
    union: Optional[NoiseMask] = None
    pupil: Optional[np.ndarray] = None
    time_s: Optional[np.ndarray] = None
    source: Optional[str] = None
    warnings: list = field(default_factory=list)

    def mask(self, code):
        return self.channels[code].mask if code in self.channels else None


def analyse_trace(trace: PositionTrace, config: DetectorConfig, allow_short: bool = False) -> ChannelReport:
    mask, series = detect_with_series(trace, config, allow_short=allow_short)
    return ChannelReport(trace=trace, mask=mask, series=series, summary=summarize(trace, series, mask))


def build_report(recording: Recording, config: DetectorConfig, channels=CHANNEL_CODES,
                 union: bool = False, allow_short: bool = True) -> DetectionReport:
    """
    Detect on each requested channel of a recording independently.

    With union=True the report also carries the OR of the channel masks.
    allow_short defaults to True here: batch reports treat recordings shorter
    than WS as clean, like the streaming detector does.
    """
    report = DetectionReport(
        config=config,
        length=len(recording),
        pupil=recording.pupil,
        time_s=recording.time_s,
        source=str(recording.path) if recording.path else None,
        warnings=list(recording.warnings),
    )
    for code in channels:
        report.channels[code] = analyse_trace(recording.channel(code), config, allow_short=allow_short)
    if union:
        report.union = union_masks(*(channel.mask for channel in report.channels.values()))
    if report.length < config.window_size:
        report.warnings.append(
            f"recording has {report.length} samples, fewer than WS={config.window_size}; all samples reported clean"
        )
    return report
