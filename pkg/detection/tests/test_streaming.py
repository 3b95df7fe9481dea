import numpy as np
from django.test import SimpleTestCase

from detection.inefficiency import detect
from detection.streaming import StreamingDetector
from detection.traces import DetectorConfig, NoiseMask
from rioneps.exceptions import StreamStateError

from .helpers import alternating, random_samples, trace


def stream_mask(samples, config):
    detector = StreamingDetector(config)
    emitted = list(detector.feed(samples))
    indices = [index for index, _ in emitted]
    assert indices == list(range(len(samples))), "each index must be emitted once, in order"
    return [flag for _, flag in emitted]


class BatchEquivalenceTests(SimpleTestCase):

    def test_random_traces(self):
        rng = np.random.default_rng(99)
        for case in range(200):
            rate = (120, 250, 500, 1000)[case % 4]
            threshold = float(rng.choice([20.0, 100.0, 250.0]))
            config = DetectorConfig(rate, threshold)
            samples = random_samples(rng, int(rng.integers(1, 3000)))
            if case % 10 == 0:
                samples[:] = np.nan
            expected = detect(trace(samples, rate), config, allow_short=True).tolist()
            with self.subTest(case=case, rate=rate, threshold=threshold):
                self.assertEqual(stream_mask(samples, config), expected)

    def test_all_missing(self):
        config = DetectorConfig(500, 100)
        self.assertEqual(stream_mask([None] * 300, config), [False] * 300)

    def test_exactly_one_window(self):
        config = DetectorConfig(100, 100)
        samples = [0, 2, 0, 2, 0]
        self.assertEqual(stream_mask(samples, config), detect(trace(samples, 100), config).tolist())
        self.assertEqual(stream_mask(samples, config), [True] * 5)

    def test_burst_edges(self):
        config = DetectorConfig(500, 100)
        samples = np.zeros(400)
        samples[150:230] = alternating(80)
        self.assertEqual(stream_mask(samples, config), detect(trace(samples), config).tolist())


class StreamingBehaviourTests(SimpleTestCase):

    def test_flags_become_final_after_window_fills(self):
        detector = StreamingDetector(DetectorConfig(100, 100))
        for sample in range(4):
            self.assertEqual(detector.push(float(sample)), [])
        self.assertEqual(detector.emitted_watermark, -1)
        self.assertEqual(detector.push(4.0), [(0, False)])
        self.assertEqual(detector.push(5.0), [(1, False)])
        self.assertEqual(detector.emitted_watermark, 1)
        self.assertEqual(detector.pushed, 6)

    def test_last_stats(self):
        detector = StreamingDetector(DetectorConfig(100, 100))
        self.assertIsNone(detector.last_stats)
        for sample in [0, 2, 0, 2, 0, 2]:
            detector.push(sample)
        self.assertEqual(detector.last_stats.start_index, 1)
        self.assertEqual(detector.last_stats.im, 1600.0)

    def test_missing_and_non_finite_pushes(self):
        config = DetectorConfig(100, 100)
        samples = [0, None, float('inf'), 2, float('nan'), 0, 2, 0]
        expected = detect(trace(samples, 100), config).tolist()
        self.assertEqual(stream_mask(samples, config), expected)

    def test_push_after_flush_raises(self):
        detector = StreamingDetector(DetectorConfig(500, 100))
        detector.push(1.0)
        detector.flush()
        with self.assertRaises(StreamStateError):
            detector.push(1.0)
        self.assertEqual(detector.flush(), [])

    def test_reset_starts_over(self):
        detector = StreamingDetector(DetectorConfig(100, 100))
        list(detector.feed([0, 2, 0, 2, 0]))
        detector.reset()
        self.assertEqual(detector.pushed, 0)
        self.assertEqual(detector.emitted_watermark, -1)
        self.assertEqual(list(detector.feed([1, 1, 1, 1, 1])), [(i, False) for i in range(5)])

    def test_flush_without_samples(self):
        detector = StreamingDetector(DetectorConfig(500, 100))
        self.assertEqual(detector.flush(), [])

    def test_fewer_samples_than_window(self):
        detector = StreamingDetector(DetectorConfig(500, 100))
        for sample in alternating(10):
            self.assertEqual(detector.push(sample), [])
        with self.assertLogs('rioneps.stream', level='WARNING'):
            emitted = detector.flush()
        self.assertEqual(emitted, [(i, False) for i in range(10)])
        self.assertEqual(NoiseMask([flag for _, flag in emitted]), NoiseMask.clean(10))

    def test_latency_is_window_minus_one(self):
        config = DetectorConfig(500, 100)
        detector = StreamingDetector(config)
        for index, sample in enumerate(np.zeros(200)):
            detector.push(sample)
            self.assertEqual(detector.emitted_watermark, max(index - (config.window_size - 1), -1))
