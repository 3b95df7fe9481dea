"""
Windowed inefficiency metric and batch RIONEPS detection.

For a window of WS samples:
- TDT   = sum of |d| over adjacent pairs whose two samples are both present
- DATCF = |sum of d| over the same pairs
- IM    = max(0, TDT - DATCF) * 1000 / (present samples in the window),
          or 0 when fewer than two samples are present

A window is noisy when IM > IT (strictly); every sample of a noisy window is
flagged. Windows start at 0 .. N - WS so the final sample is covered too.

Pair differences are accumulated offset by offset across all windows at once.
Each window therefore sums its pairs left to right, the same order a plain
per-window loop uses, so batch, streaming and a reference loop agree exactly.
"""
import logging
import math

import numpy as np

from rioneps.exceptions import ConfigurationError, TraceInputError, WindowBoundsError

from .traces import (
    DetectorConfig,
    InefficiencySeries,
    NoiseMask,
    NoiseSegment,
    PositionTrace,
    SeriesSummary,
    WindowStats,
    window_size,
)

logger = logging.getLogger('rioneps')

IM_SCALE = 1000.0
BLOCK_STARTS = 1 << 16

__all__ = [
    'window_size',
    'window_stats',
    'inefficiency_series',
    'series_for_samples',
    'mask_from_series',
    'detect',
    'detect_with_series',
    'mask_to_segments',
    'union_masks',
    'summarize',
]


def _pair_differences(samples):
    """Adjacent differences with pairs touching a missing sample zeroed out."""
    diffs = np.diff(samples)
    valid = ~np.isnan(diffs)
    diffs = np.where(valid, diffs, 0.0)
    return diffs, np.abs(diffs)


def _present_counts(samples, ws, count):
    present = np.concatenate(([0], np.cumsum(~np.isnan(samples), dtype=np.int64)))
    return present[ws:ws + count] - present[:count]


def _accumulate_block(samples, ws, tdt, net, valid_count):
    """Fill the statistics of the windows starting at samples[0 .. len(tdt) - 1]."""
    count = tdt.shape[0]
    diffs, magnitudes = _pair_differences(samples)
    for offset in range(ws - 1):
        np.add(tdt, magnitudes[offset:offset + count], out=tdt)
        np.add(net, diffs[offset:offset + count], out=net)
    valid_count[:] = _present_counts(samples, ws, count)


def series_for_samples(samples, ws: int) -> InefficiencySeries:
    """
    Window statistics for every window of `ws` samples over a raw sample array.

    `samples` must already be normalized (NaN for missing). Returns an empty
    series when fewer than `ws` samples are given.
    """
    samples = np.asarray(samples, dtype=np.float64)
    count = max(samples.shape[0] - ws + 1, 0)
    tdt = np.zeros(count)
    net = np.zeros(count)
    valid_count = np.zeros(count, dtype=np.int64)
    # Within each block of window starts every window still sums its pairs left to right.
    for lo in range(0, count, BLOCK_STARTS):
        hi = min(lo + BLOCK_STARTS, count)
        _accumulate_block(samples[lo:hi + ws - 1], ws, tdt[lo:hi], net[lo:hi], valid_count[lo:hi])

    datcf = np.abs(net)
    degenerate = valid_count < 2
    tdt[degenerate] = 0.0
    datcf[degenerate] = 0.0
    # The clamp only guards against rounding; TDT >= DATCF holds exactly.
    im = np.maximum(tdt - datcf, 0.0) * IM_SCALE / np.maximum(valid_count, 1)
    im[degenerate] = 0.0
    return InefficiencySeries(window_size=ws, tdt=tdt, datcf=datcf, valid_count=valid_count, im=im)


def window_stats(trace: PositionTrace, start_index: int, ws: int) -> WindowStats:
    """Statistics of the single window covering samples start_index .. start_index + ws - 1."""
    if ws < 1:
        raise ConfigurationError(f"window size must be positive, got {ws}")
    if start_index < 0 or start_index + ws > len(trace):
        raise WindowBoundsError(
            f"window [{start_index}, {start_index + ws - 1}] outside trace of {len(trace)} samples"
        )
    stats = series_for_samples(trace.samples[start_index:start_index + ws], ws)[0]
    return WindowStats(
        start_index=start_index,
        tdt=stats.tdt,
        datcf=stats.datcf,
        valid_count=stats.valid_count,
        im=stats.im,
    )


def _check_rate(trace, config):
    if not math.isclose(trace.sample_rate_hz, config.sample_rate_hz, rel_tol=1e-9):
        logger.warning(
            f"Trace sample rate {trace.sample_rate_hz:g} Hz differs from detector config "
            f"{config.sample_rate_hz:g} Hz; using the config (WS={config.window_size})"
        )


def _require_length(trace, ws):
    if len(trace) < ws:
        raise TraceInputError(f"trace has {len(trace)} samples, shorter than the window size WS={ws}")


def inefficiency_series(trace: PositionTrace, config: DetectorConfig) -> InefficiencySeries:
    """IM for every sliding window of the trace, one entry per start index 0 .. N - WS."""
    ws = config.window_size
    _require_length(trace, ws)
    _check_rate(trace, config)
    return series_for_samples(trace.samples, ws)


def mask_from_series(series: InefficiencySeries, threshold: float, length: int) -> NoiseMask:
    """Flag every sample of every window whose IM exceeds the threshold."""
    ws = series.window_size
    noisy_starts = np.flatnonzero(series.im > threshold)
    coverage = np.zeros(length + 1, dtype=np.int64)
    coverage[noisy_starts] += 1
    coverage[noisy_starts + ws] -= 1
    return NoiseMask(np.cumsum(coverage[:length]) > 0)


def detect_with_series(trace: PositionTrace, config: DetectorConfig, allow_short: bool = False):
    """
    Batch detection returning both the mask and the series it was derived from.

    With allow_short a trace shorter than WS gives an all-false mask and an empty
    series instead of raising TraceInputError.
    """
    ws = config.window_size
    if len(trace) < ws and allow_short:
        logger.warning(f"Trace of {len(trace)} samples is shorter than WS={ws}; reporting it clean")
        return NoiseMask.clean(len(trace)), series_for_samples(trace.samples, ws)

    series = inefficiency_series(trace, config)
    mask = mask_from_series(series, config.inefficiency_threshold, len(trace))
    logger.info(
        f"Detected RIONEPS on {trace.channel.value} channel: {mask.flagged_count}/{len(trace)} samples "
        f"flagged (WS={ws}, IT={config.inefficiency_threshold:g}, max IM={series.max_im:.3f})"
    )
    return mask, series


def detect(trace: PositionTrace, config: DetectorConfig, allow_short: bool = False) -> NoiseMask:
    """RIONEPS mask for one channel."""
    mask, _ = detect_with_series(trace, config, allow_short=allow_short)
    return mask


def mask_to_segments(mask: NoiseMask, stats: InefficiencySeries, sample_rate_hz: float):
    """
    Maximal runs of flagged samples, each with the peak IM over the windows that
    overlap the run.
    """
    flags = mask.flags
    if not flags.any():
        return []
    edges = np.flatnonzero(np.diff(np.concatenate(([0], flags.astype(np.int8), [0]))))
    starts, ends = edges[0::2], edges[1::2] - 1

    ws = stats.window_size
    window_count = len(stats)
    segments = []
    for start, end in zip(starts, ends):
        first = max(0, start - ws + 1)
        last = min(end, window_count - 1)
        peak = float(stats.im[first:last + 1].max()) if last >= first else 0.0
        segments.append(NoiseSegment(
            start_index=int(start),
            end_index=int(end),
            start_time_s=int(start) / sample_rate_hz,
            end_time_s=int(end) / sample_rate_hz,
            peak_im=peak,
        ))
    return segments


def union_masks(*masks: NoiseMask) -> NoiseMask:
    """Flag a sample when any channel flags it (an extension; channels are analysed separately)."""
    if not masks:
        raise TraceInputError("union_masks needs at least one mask")
    lengths = {len(mask) for mask in masks}
    if len(lengths) != 1:
        raise TraceInputError(f"cannot combine masks of different lengths {sorted(lengths)}")
    return NoiseMask(np.logical_or.reduce([mask.flags for mask in masks]))


def summarize(trace: PositionTrace, series: InefficiencySeries, mask: NoiseMask) -> SeriesSummary:
    return SeriesSummary(
        sample_count=len(trace),
        missing_count=trace.missing_count,
        window_count=len(series),
        max_im=series.max_im,
        flagged_count=mask.flagged_count,
        flagged_fraction=mask.flagged_fraction,
        segments=mask_to_segments(mask, series, trace.sample_rate_hz),
    )
