import math

import numpy as np
from django.test import SimpleTestCase

from calibration.serializers import SweepOptionsSerializer
from calibration.sweep import (
    ConfusionCounts,
    SweepResult,
    SweepRow,
    parse_thresholds,
    score,
    sweep,
    sweep_many,
    validate_thresholds,
)
from detection.traces import Channel, DetectorConfig, PositionTrace
from rioneps.exceptions import ConfigurationError, TraceInputError
from synth.generator import LabelSet, NoiseInjection, SynthSpec, place_bursts, synthesize

GRID = parse_thresholds('10:500:10')


def labelled_trace(seed, duration=10.0):
    spec = SynthSpec(500, duration, fixations=[(0, 0.6), (5, 0.4), (-3, 0.5)], jitter_sd=0.01, seed=seed)
    intervals = place_bursts(spec.sample_count, 4, 120, seed=seed + 1000, margin=25)
    return synthesize(spec, NoiseInjection(intervals))


def burst_recording(seed):
    """The 10 s, four-burst recordings the detector end-to-end test also uses."""
    spec = SynthSpec(500, 10.0, fixations=[(0, 0.6), (5, 0.4), (-3, 0.5)], jitter_sd=0.01, seed=seed)
    intervals = place_bursts(spec.sample_count, 4, 120, seed=np.random.SeedSequence(seed).spawn(2)[1], margin=25)
    return synthesize(spec, NoiseInjection(intervals, offset=2.0, switch_probability=0.5))


class ConfusionCountsTests(SimpleTestCase):

    def test_metrics(self):
        counts = ConfusionCounts(true_positive=8, false_positive=2, false_negative=8, true_negative=82)
        self.assertEqual(counts.precision, 0.8)
        self.assertEqual(counts.recall, 0.5)
        self.assertAlmostEqual(counts.f1, 2 * 0.8 * 0.5 / 1.3)
        self.assertEqual(counts.total, 100)

    def test_no_predictions_and_no_positives(self):
        counts = ConfusionCounts(true_negative=10)
        self.assertEqual((counts.precision, counts.recall, counts.f1), (1.0, 1.0, 1.0))

    def test_no_predictions_with_positives(self):
        counts = ConfusionCounts(false_negative=5, true_negative=5)
        self.assertEqual((counts.precision, counts.recall, counts.f1), (1.0, 0.0, 0.0))

    def test_all_wrong(self):
        counts = ConfusionCounts(false_positive=3, false_negative=3)
        self.assertEqual(counts.f1, 0.0)

    def test_addition(self):
        total = ConfusionCounts(1, 2, 3, 4, 5) + ConfusionCounts(1, 1, 1, 1, 1)
        self.assertEqual(total, ConfusionCounts(2, 3, 4, 5, 6))


class ThresholdParsingTests(SimpleTestCase):

    def test_range(self):
        self.assertEqual(parse_thresholds('10:50:10'), [10.0, 20.0, 30.0, 40.0, 50.0])
        self.assertEqual(len(GRID), 50)
        self.assertEqual((GRID[0], GRID[-1]), (10.0, 500.0))

    def test_list(self):
        self.assertEqual(parse_thresholds('50, 100,inf'), [50.0, 100.0, math.inf])

    def test_invalid(self):
        for text in ('', 'a,b', '10:5:1', '0:10:5', '1:2', '10:20:0', 'nan', '-5'):
            with self.subTest(text=text), self.assertRaises(ConfigurationError):
                parse_thresholds(text)

    def test_validate(self):
        with self.assertRaises(ConfigurationError):
            validate_thresholds([])
        self.assertEqual(validate_thresholds((1, 2.5)), [1.0, 2.5])


class ScoreTests(SimpleTestCase):

    def test_tolerance_near_labels(self):
        labels = LabelSet([False] * 5 + [True] * 5 + [False] * 10)
        predicted = np.zeros(20, dtype=bool)
        predicted[3:12] = True
        predicted[18] = True
        strict, tolerant = score(predicted, labels, window_size=3)
        self.assertEqual(strict, ConfusionCounts(true_positive=5, false_positive=5, false_negative=0, true_negative=10))
        self.assertEqual(tolerant.tolerated, 4)
        self.assertEqual(tolerant.false_positive, 1)
        self.assertEqual(tolerant.total, 20)


class SweepTests(SimpleTestCase):

    def test_some_threshold_is_perfect_with_tolerance(self):
        trace, labels = labelled_trace(seed=21)
        result = sweep(trace, labels, DetectorConfig(500, 100), GRID)
        self.assertEqual(len(result.rows), 50)
        self.assertEqual(result.window_size, 25)
        self.assertEqual(result.best_row.tolerant.f1, 1.0)
        self.assertEqual(max(row.tolerant.f1 for row in result.rows), 1.0)

    def test_predictions_shrink_as_threshold_grows(self):
        trace, labels = labelled_trace(seed=4)
        result = sweep(trace, labels, DetectorConfig(500, 0), GRID)
        predicted = [row.predicted_positive for row in result.rows]
        self.assertEqual(predicted, sorted(predicted, reverse=True))

    def test_every_burst_recording_calibrates(self):
        for seed in range(50):
            trace, labels = burst_recording(seed)
            result = sweep(trace, labels, DetectorConfig(500, 100), GRID)
            predicted = [row.predicted_positive for row in result.rows]
            with self.subTest(seed=seed):
                self.assertEqual(result.best_row.tolerant.f1, 1.0)
                self.assertEqual(predicted, sorted(predicted, reverse=True))

    def test_strict_counts_cover_every_sample(self):
        trace, labels = labelled_trace(seed=5, duration=4.0)
        result = sweep(trace, labels, DetectorConfig(500, 0), [20, 100, 400])
        for row in result.rows:
            self.assertEqual(row.strict.total, len(trace))
            self.assertEqual(row.tolerant.total, len(trace))
            self.assertEqual(row.strict.tolerated, 0)

    def test_clean_trace_with_no_labels(self):
        trace = PositionTrace(np.zeros(500), 500, Channel.HORIZONTAL)
        result = sweep(trace, np.zeros(500, dtype=bool), DetectorConfig(500, 0), [10, 100])
        self.assertTrue(all(row.tolerant.f1 == 1.0 for row in result.rows))
        self.assertEqual(result.best_threshold, 100.0)

    def test_infinite_threshold_predicts_nothing(self):
        trace, labels = labelled_trace(seed=6, duration=4.0)
        (row,) = sweep(trace, labels, DetectorConfig(500, 0), [math.inf]).rows
        self.assertEqual(row.predicted_positive, 0)
        self.assertEqual(row.strict.recall, 0.0)

    def test_label_length_mismatch(self):
        trace = PositionTrace(np.zeros(100), 500)
        with self.assertRaises(TraceInputError):
            sweep(trace, np.zeros(99, dtype=bool), DetectorConfig(500, 0), [100])

    def test_invalid_thresholds(self):
        trace = PositionTrace(np.zeros(100), 500)
        with self.assertRaises(ConfigurationError):
            sweep(trace, np.zeros(100, dtype=bool), DetectorConfig(500, 0), [])

    def test_records(self):
        trace, labels = labelled_trace(seed=7, duration=4.0)
        record = sweep(trace, labels, DetectorConfig(500, 0), [100]).rows_as_records()[0]
        self.assertEqual(record['threshold'], 100)
        self.assertNotIn('strict_tolerated', record)
        for key in ('predicted_positive', 'strict_f1', 'tolerant_tolerated', 'tolerant_precision', 'tolerant_recall'):
            self.assertIn(key, record)


class SweepManyTests(SimpleTestCase):

    def test_pooled_counts_equal_sum_of_single_sweeps(self):
        pairs = [labelled_trace(seed, duration=4.0) for seed in (1, 2, 3)]
        thresholds = [50, 100, 200]
        pooled = sweep_many(pairs, thresholds)
        singles = [sweep(trace, labels, DetectorConfig(500, 0), thresholds) for trace, labels in pairs]
        for index, row in enumerate(pooled.rows):
            strict = sum((single.rows[index].strict for single in singles), ConfusionCounts())
            tolerant = sum((single.rows[index].tolerant for single in singles), ConfusionCounts())
            self.assertEqual(row.strict, strict)
            self.assertEqual(row.tolerant, tolerant)
        self.assertEqual(pooled.sample_count, 3 * 2000)
        self.assertEqual(pooled.window_size, 25)

    def test_duplicate_thresholds_counted_once(self):
        pairs = [labelled_trace(1, duration=4.0)]
        self.assertEqual(len(sweep_many(pairs, [100, 100, 50]).rows), 2)

    def test_mixed_sample_rates(self):
        fast = (PositionTrace(np.zeros(1000), 1000), np.zeros(1000, dtype=bool))
        slow = (PositionTrace(np.zeros(500), 500), np.zeros(500, dtype=bool))
        self.assertEqual(sweep_many([fast, slow], [100]).window_size, 0)

    def test_no_recordings(self):
        with self.assertRaises(TraceInputError):
            sweep_many([], [100])


class SweepResultTests(SimpleTestCase):

    def test_ties_go_to_the_larger_threshold(self):
        perfect = ConfusionCounts(true_positive=1, true_negative=1)
        result = SweepResult(rows=[SweepRow(50, perfect, perfect), SweepRow(80, perfect, perfect)])
        self.assertEqual(result.best_threshold, 80)


class SweepOptionsTests(SimpleTestCase):

    def options(self, **data):
        serializer = SweepOptionsSerializer(data={'input': ['a.csv'], 'labels': ['a_labels.csv'], **data})
        serializer.is_valid()
        return serializer

    def test_default_grid(self):
        serializer = self.options()
        self.assertEqual(serializer.validated_data['thresholds'], GRID)

    def test_list_with_infinity(self):
        self.assertEqual(self.options(thresholds='50,100,inf').validated_data['thresholds'], [50.0, 100.0, math.inf])

    def test_grid_shape_is_checked_before_parsing(self):
        for text in ('10:500', '10::5', '1:2:3:4'):
            with self.subTest(text=text):
                self.assertIn('lo:hi:step', str(self.options(thresholds=text).errors['thresholds']))

    def test_pairing(self):
        serializer = self.options(input=['a.csv', 'b.csv'])
        self.assertIn('2 inputs', str(serializer.errors['labels']))
