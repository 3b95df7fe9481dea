"""
Reference computations and trace builders shared by the detection tests.
"""
import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from detection.traces import PositionTrace


def naive_window(samples, start, ws):
    """Window statistics by a plain loop over pairs, as a person would do it by hand."""
    tdt = 0.0
    net = 0.0
    valid = 0
    for offset in range(ws):
        if not math.isnan(samples[start + offset]):
            valid += 1
    for offset in range(1, ws):
        left, right = samples[start + offset - 1], samples[start + offset]
        if math.isnan(left) or math.isnan(right):
            continue
        tdt += abs(right - left)
        net += right - left
    if valid < 2:
        return 0.0, 0.0, valid, 0.0
    datcf = abs(net)
    return tdt, datcf, valid, max(tdt - datcf, 0.0) * 1000.0 / valid


def naive_series(samples, ws):
    samples = [float(value) for value in samples]
    return [naive_window(samples, start, ws) for start in range(len(samples) - ws + 1)]


def naive_mask(samples, ws, threshold):
    flags = [False] * len(samples)
    for start, (_, _, _, im) in enumerate(naive_series(samples, ws)):
        if im > threshold:
            for index in range(start, start + ws):
                flags[index] = True
    return flags


def matrix_oracle(samples, ws):
    """
    IM, valid counts and TDT for every window from an explicit (windows x WS)
    matrix, O(N * WS) memory and work, independent of the accumulation code.
    """
    windows = sliding_window_view(np.asarray(samples, dtype=np.float64), ws)
    diffs = np.diff(windows, axis=1)
    usable = ~np.isnan(diffs)
    diffs = np.where(usable, diffs, 0.0)
    valid = np.count_nonzero(~np.isnan(windows), axis=1)
    tdt = np.abs(diffs).sum(axis=1)
    datcf = np.abs(diffs.sum(axis=1))
    im = np.where(valid >= 2, np.maximum(tdt - datcf, 0.0) * 1000.0 / np.maximum(valid, 1), 0.0)
    return im, valid, tdt


def random_samples(rng, length, missing_fraction=0.05, scale=1.0):
    """Random walk with occasional alternation bursts and missing samples."""
    samples = np.cumsum(rng.normal(0.0, 0.05 * scale, length))
    if length > 40:
        for _ in range(rng.integers(0, 4)):
            start = int(rng.integers(0, length - 20))
            burst = int(rng.integers(5, min(200, length - start)))
            samples[start:start + burst] += np.where(rng.random(burst) < 0.5, 2.0 * scale, 0.0)
    samples[rng.random(length) < missing_fraction] = np.nan
    return samples


def alternating(length, amplitude=2.0, base=0.0):
    """base, base + amplitude, base, ... starting at base."""
    return base + np.where(np.arange(length) % 2 == 0, 0.0, amplitude)


def trace(samples, sample_rate_hz=500.0, **kwargs):
    return PositionTrace(samples=samples, sample_rate_hz=sample_rate_hz, **kwargs)
