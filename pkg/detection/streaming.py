"""
Incremental RIONEPS detection for sample-by-sample input.

A sample's flag becomes final once no future window can contain it, i.e. WS - 1
samples after it arrives. Feeding a trace through push() and then flush() yields
exactly the flags detect() gives for the whole trace.

A StreamingDetector is owned by one caller at a time; hand it between threads
if needed but never mutate it from two at once.
"""
import logging
import math
from collections import deque
from dataclasses import replace

import numpy as np

from rioneps.exceptions import StreamStateError

from .inefficiency import series_for_samples
from .traces import DetectorConfig

logger = logging.getLogger('rioneps.stream')


def _normalize(sample):
    if sample is None:
        return math.nan
    value = float(sample)
    return value if math.isfinite(value) else math.nan


class StreamingDetector:
    """
    Online detector holding the last WS samples.

    Only the start of the most recent noisy window is needed to decide final
    flags: a finalized sample j is flagged iff that start s satisfies
    s <= j <= s + WS - 1, and s <= j always holds when j is finalized.
    """

    def __init__(self, config: DetectorConfig):
        self.config = config
        self.window_size = config.window_size
        self.reset()

    def reset(self):
        self._buffer = deque(maxlen=self.window_size)
        self._pushed = 0
        self._watermark = -1
        self._last_noisy_start = None
        self._last_stats = None
        self._closed = False

    @property
    def pushed(self) -> int:
        return self._pushed

    @property
    def emitted_watermark(self) -> int:
        """Index of the last sample whose final flag has been emitted (-1 before any)."""
        return self._watermark

    @property
    def last_stats(self):
        """WindowStats of the most recently completed window, or None."""
        return self._last_stats

    def _flag(self, index):
        start = self._last_noisy_start
        return start is not None and index <= start + self.window_size - 1

    def _emit_through(self, last_index):
        emitted = [(index, self._flag(index)) for index in range(self._watermark + 1, last_index + 1)]
        self._watermark = max(self._watermark, last_index)
        return emitted

    def push(self, sample):
        """
        Append one sample (None or non-finite = missing) and return the
        (index, flag) pairs that became final.
        """
        if self._closed:
            raise StreamStateError("detector was flushed; call reset() before pushing again")

        ws = self.window_size
        self._buffer.append(_normalize(sample))
        self._pushed += 1
        if self._pushed < ws:
            return []

        start = self._pushed - ws
        window = np.fromiter(self._buffer, dtype=np.float64, count=ws)
        stats = replace(series_for_samples(window, ws)[0], start_index=start)
        self._last_stats = stats
        if stats.im > self.config.inefficiency_threshold:
            self._last_noisy_start = start
            logger.debug(f"Noisy window at {start}: IM={stats.im:.3f}")
        return self._emit_through(start)

    def flush(self):
        """Emit flags for every sample not yet finalized and close the stream."""
        if self._closed:
            return []
        emitted = self._emit_through(self._pushed - 1)
        self._closed = True
        if self._pushed and self._pushed < self.window_size:
            logger.warning(
                f"Stream ended after {self._pushed} samples, fewer than WS={self.window_size}; reported clean"
            )
        return emitted

    def feed(self, samples):
        """Push every sample of an iterable, then flush; yields finalized (index, flag) pairs."""
        for sample in samples:
            yield from self.push(sample)
        yield from self.flush()
