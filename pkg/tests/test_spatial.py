"""Cross-sectional pattern frequencies, baselines, and significance."""

import itertools
from collections import Counter

import numpy as np
import pytest

from ordpat.exceptions import NumericalWarning
from ordpat.spatial import (
    ClassMatrix,
    analyze_spatial,
    baseline_frequencies,
    cramers_v,
    cramers_v_autocorrelation,
    flood_validate,
    pattern_counts,
    pattern_frequencies,
    spatial_encode,
    spatial_significance,
)


def make_matrix(classes, gauges=None):
    classes = np.asarray(classes)
    gauges = gauges or tuple(f"g{i}" for i in range(classes.shape[1]))
    return ClassMatrix(classes=classes, gauges=tuple(gauges))


class TestClassMatrix:
    def test_validation(self):
        with pytest.raises(ValueError, match="two-dimensional"):
            ClassMatrix(classes=np.arange(4), gauges=("a",))
        with pytest.raises(ValueError, match="gauge labels"):
            make_matrix([[0, 1]], gauges=("a",))
        with pytest.raises(ValueError, match="duplicate"):
            make_matrix([[0, 1]], gauges=("a", "a"))

    def test_flood_invariants(self):
        good = make_matrix([[0, 4], [-1, 2]])
        flood_validate(good)
        with pytest.raises(ValueError, match="outside the flood range"):
            flood_validate(make_matrix([[0, 5]]))
        with pytest.raises(ValueError, match="no flood at any gauge"):
            flood_validate(make_matrix([[0, 1], [-1, -1]]))

    def test_column_lookup(self):
        matrix = make_matrix([[0, 1], [2, 3]], gauges=("a", "b"))
        np.testing.assert_array_equal(matrix.column("b"), [1, 3])
        with pytest.raises(KeyError):
            matrix.column("c")


class TestSpatialEncode:
    def test_level_shifted_rows(self):
        rows = [[k, k, k, k] for k in (-1, 0, 2, 4)]
        patterns = spatial_encode(make_matrix(rows), ("g0", "g1", "g2", "g3"))
        assert patterns == [(1, 1, 1, 1)] * 4

    def test_single_raised_gauge(self):
        for k in (-1, 0, 3):
            row = [[k + 1, k, k, k]]
            patterns = spatial_encode(make_matrix(row), ("g0", "g1", "g2", "g3"))
            assert patterns == [(2, 1, 1, 1)]

    def test_absence_participates_as_smallest(self):
        patterns = spatial_encode(make_matrix([[3, -1, 0, 2]]), ("g0", "g1", "g2", "g3"))
        assert patterns == [(4, 1, 2, 3)]

    def test_subset_order_and_errors(self):
        matrix = make_matrix([[1, 2, 3]], gauges=("a", "b", "c"))
        assert spatial_encode(matrix, ("c", "a")) == [(2, 1)]
        with pytest.raises(KeyError):
            spatial_encode(matrix, ("a", "z"))
        with pytest.raises(ValueError, match="non-empty"):
            spatial_encode(matrix, ())
        wide = make_matrix([list(range(9))])
        with pytest.raises(ValueError, match="cap"):
            spatial_encode(wide, tuple(f"g{i}" for i in range(9)))

    def test_monotone_invariance_per_row(self):
        rng = np.random.default_rng(0)
        classes = rng.integers(-1, 5, size=(50, 4))
        matrix = make_matrix(classes)
        shifted = make_matrix(3 * classes + 7)
        gauges = matrix.gauges
        assert spatial_encode(matrix, gauges) == spatial_encode(shifted, gauges)


class TestFrequencies:
    def test_unit_pattern_only(self):
        patterns = [(1, 1, 1)] * 12
        freq = pattern_frequencies(patterns)
        assert freq == {(1, 1, 1): 1.0}

    def test_counts_and_frequencies_sum(self):
        rng = np.random.default_rng(1)
        matrix = make_matrix(rng.integers(0, 3, size=(200, 3)))
        patterns = spatial_encode(matrix, matrix.gauges)
        counts = pattern_counts(patterns)
        freq = pattern_frequencies(patterns)
        assert sum(counts.values()) == 200
        assert sum(freq.values()) == pytest.approx(1.0, abs=1e-12)

    def test_include_zero_lists_whole_space(self):
        freq = pattern_frequencies([(1, 2)] * 4, include_zero=True)
        assert set(freq) == {(1, 1), (1, 2), (2, 1)}
        assert freq[(2, 1)] == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            pattern_frequencies([])


class TestBaseline:
    def test_single_constant_class(self):
        matrix = make_matrix(np.full((40, 3), 2))
        baseline = baseline_frequencies(matrix, matrix.gauges)
        assert baseline == {(1, 1, 1): pytest.approx(1.0)}

    def test_two_uniform_binary_gauges(self):
        # alternating 0/1 columns -> uniform marginals on {0, 1}
        classes = np.array([[0, 0], [0, 1], [1, 0], [1, 1]] * 5)
        baseline = baseline_frequencies(make_matrix(classes), ("g0", "g1"))
        assert baseline[(1, 1)] == pytest.approx(0.5)
        assert baseline[(1, 2)] == pytest.approx(0.25)
        assert baseline[(2, 1)] == pytest.approx(0.25)

    def test_matches_pure_python_product_law(self):
        rng = np.random.default_rng(2)
        matrix = make_matrix(rng.integers(-1, 5, size=(120, 3)))
        baseline = baseline_frequencies(matrix, matrix.gauges)
        # independent oracle: explicit product over the support triples
        cols = [matrix.classes[:, j] for j in range(3)]
        margs = [Counter(c.tolist()) for c in cols]
        ref = Counter()
        for combo in itertools.product(*(sorted(m) for m in margs)):
            weight = 1.0
            for m, v in zip(margs, combo):
                weight *= m[v] / 120
            distinct = sorted(set(combo))
            ref[tuple(distinct.index(v) + 1 for v in combo)] += weight
        assert set(baseline) == set(ref)
        for pattern, prob in ref.items():
            assert baseline[pattern] == pytest.approx(prob, abs=1e-12)

    def test_sums_to_one_and_monte_carlo_close(self):
        rng = np.random.default_rng(3)
        matrix = make_matrix(rng.integers(-1, 5, size=(314, 4)))
        exact = baseline_frequencies(matrix, matrix.gauges)
        assert sum(exact.values()) == pytest.approx(1.0, abs=1e-9)
        sampled = baseline_frequencies(matrix, matrix.gauges, exact_limit=1, draws=200_000)
        assert sum(sampled.values()) == pytest.approx(1.0, abs=1e-3)
        for pattern, prob in exact.items():
            if prob > 0.01:
                assert sampled.get(pattern, 0.0) == pytest.approx(prob, abs=0.01)

    def test_observed_matches_product_law_for_independent_columns(self):
        rng = np.random.default_rng(4)
        matrix = make_matrix(rng.integers(0, 6, size=(10_000, 3)))
        observed = pattern_frequencies(spatial_encode(matrix, matrix.gauges))
        baseline = baseline_frequencies(matrix, matrix.gauges)
        for pattern, prob in baseline.items():
            assert abs(observed.get(pattern, 0.0) - prob) < 0.02


class TestSignificance:
    def test_zero_when_observed_equals_baseline(self):
        freq = {(1, 1): 0.6, (1, 2): 0.4}
        report = spatial_significance(freq, freq, num_events=400)
        assert all(rec.z == 0.0 for rec in report.records)
        assert not any(rec.significant for rec in report.records)

    def test_z_statistic_reference_point(self):
        observed = {(1, 1, 1, 1): 0.583}
        baseline = {(1, 1, 1, 1): 0.482}
        report = spatial_significance(observed, baseline, num_events=314)
        record = report.records[0]
        assert record.z == pytest.approx(3.58, abs=0.01)
        assert record.significant

    def test_never_observed_pattern_not_significant(self):
        observed = {(1, 2, 3, 4): 1.0}
        baseline = {(1, 2, 3, 4): 0.99, (1, 1, 1, 1): 0.01}
        report = spatial_significance(
            observed, baseline, num_events=314, include_zero_observed=True
        )
        by_pattern = {rec.pattern: rec for rec in report.records}
        rec = by_pattern[(1, 1, 1, 1)]
        assert rec.z == pytest.approx(-1.78, abs=0.01)
        assert not rec.significant

    def test_impossible_under_baseline_flag(self):
        observed = {(2, 1): 0.5, (1, 2): 0.5}
        baseline = {(1, 2): 1.0}
        report = spatial_significance(observed, baseline, num_events=100)
        flags = {rec.pattern: rec.impossible_under_baseline for rec in report.records}
        assert flags[(2, 1)] and not flags[(1, 2)]

    def test_small_sample_warns(self):
        freq = {(1, 1): 1.0}
        with pytest.warns(NumericalWarning, match="asymptotic"):
            spatial_significance(freq, freq, num_events=10)

    def test_mismatched_tables_rejected(self):
        with pytest.raises(ValueError, match="different lengths"):
            spatial_significance({(1, 2): 1.0}, {(1, 2, 3): 1.0}, num_events=100)

    def test_gauge_permutation_consistency(self):
        rng = np.random.default_rng(5)
        matrix = make_matrix(rng.integers(-1, 5, size=(200, 4)))
        order_a = ("g0", "g1", "g2", "g3")
        order_b = ("g2", "g0", "g3", "g1")
        move = [order_a.index(g) for g in order_b]
        freq_a = pattern_frequencies(spatial_encode(matrix, order_a))
        freq_b = pattern_frequencies(spatial_encode(matrix, order_b))
        remapped = {tuple(p[i] for i in move): f for p, f in freq_a.items()}
        assert remapped == freq_b

    def test_level_shifted_events_make_unit_pattern_significant(self):
        # every event is a level shift of the constant base vector
        rng = np.random.default_rng(8)
        levels = rng.integers(0, 5, size=200)
        matrix = make_matrix(np.column_stack([levels] * 4))
        report = analyze_spatial(matrix, matrix.gauges)
        assert len(report.records) == 1
        record = report.records[0]
        assert record.pattern == (1, 1, 1, 1)
        assert record.observed == 1.0
        assert record.baseline < 1.0
        assert record.significant

    @pytest.mark.filterwarnings("ignore::ordpat.exceptions.NumericalWarning")
    def test_independent_columns_rarely_significant(self):
        # marginals chosen so every pattern has decent expected count;
        # the z-approximation needs K * baseline well above 1
        hits = 0
        for seed in range(12):
            rng = np.random.default_rng(seed)
            classes = np.column_stack([
                rng.choice([0, 1, 2], p=[0.5, 0.3, 0.2], size=314) for _ in range(3)
            ])
            report = analyze_spatial(make_matrix(classes), ("g0", "g1", "g2"))
            if any(rec.significant for rec in report.records):
                hits += 1
        assert hits <= 1  # >= 90% of seeds show nothing significant


class TestCramersV:
    def test_identical_vectors(self):
        values = np.array([0, 1, 2, 0, 1, 2, 0, 1])
        assert cramers_v(values, values) == pytest.approx(1.0)

    def test_lagged_copy_perfect_association(self):
        series = np.array([0, 1] * 50)
        vs = cramers_v_autocorrelation(series, max_lag=3)
        assert vs[0] == pytest.approx(1.0)

    def test_constant_series_definitionally_one(self):
        vs = cramers_v_autocorrelation(np.full(40, 3), max_lag=2)
        assert np.all(vs == 1.0)

    def test_one_constant_margin_is_zero(self):
        a = np.full(30, 1)
        b = np.arange(30) % 3
        assert cramers_v(a, b) == 0.0

    def test_independent_uniform_classes_small(self):
        rng = np.random.default_rng(6)
        series = rng.integers(0, 5, size=5000)
        vs = cramers_v_autocorrelation(series, max_lag=100)
        assert vs.mean() < 0.05
        assert np.all((vs >= 0.0) & (vs <= 1.0))

    def test_flood_like_series_in_unit_range(self):
        rng = np.random.default_rng(7)
        base = rng.choice([0, 0, 0, 1, 1, 2, 3, 4], size=500)
        vs = cramers_v_autocorrelation(base, max_lag=50)
        assert np.all((vs >= 0.0) & (vs <= 1.0))

    def test_lag_bounds(self):
        with pytest.raises(ValueError):
            cramers_v_autocorrelation(np.arange(10), max_lag=5)
        with pytest.raises(ValueError):
            cramers_v_autocorrelation(np.arange(10), max_lag=0)
