"""Unit tests for angular outlier detection and boosting."""

import numpy as np
import pytest

from qsmote import aol, pipeline
from qsmote.errors import ParameterError


def test_worked_iqr_example():
    values = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 100]
    bounds, low, high = aol.detect_outliers(values, num_bins=2)
    assert bounds.q1 == pytest.approx(2.75)
    assert bounds.q3 == pytest.approx(8.25)
    assert bounds.iqr == pytest.approx(5.5)
    assert bounds.upper_bound == pytest.approx(16.5)
    assert bounds.lower_bound == pytest.approx(2.75 - 1.5 * 5.5)
    assert high.total() == 1
    assert low.total() == 0
    assert len(low) == 0


def test_constant_vector_has_no_outliers():
    bounds, low, high = aol.detect_outliers(np.full(50, 1.3), num_bins=5)
    assert bounds.iqr == 0.0
    assert bounds.lower_bound == pytest.approx(1.3)
    assert bounds.upper_bound == pytest.approx(1.3)
    assert low.total() == 0 and high.total() == 0


def test_planted_extremes_populate_both_tables():
    base = np.linspace(1.0, 2.0, 40)
    bounds, _, _ = aol.detect_outliers(base, num_bins=3)
    planted = np.r_[base, bounds.lower_bound - 0.5, bounds.upper_bound + 0.5]
    _, low, high = aol.detect_outliers(planted, num_bins=3)
    assert low.total() >= 1
    assert high.total() >= 1


def test_detection_matches_brute_force_oracle():
    rng = np.random.default_rng(0)
    for _ in range(200):
        d = rng.normal(size=int(rng.integers(5, 60)))
        bounds, low, high = aol.detect_outliers(d, num_bins=4)
        srt = np.sort(d)
        q1 = np.quantile(srt, 0.25)
        q3 = np.quantile(srt, 0.75)
        iqr = q3 - q1
        expect_low = set(np.round(d[d < q1 - 1.5 * iqr], 12))
        expect_high = set(np.round(d[d > q3 + 1.5 * iqr], 12))
        assert low.total() == len(d[d < bounds.lower_bound])
        assert high.total() == len(d[d > bounds.upper_bound])
        got_low = set(np.round(d[d < bounds.lower_bound], 12))
        got_high = set(np.round(d[d > bounds.upper_bound], 12))
        assert got_low == expect_low
        assert got_high == expect_high


def test_bin_tables_are_contiguous_and_conserve_counts():
    rng = np.random.default_rng(1)
    d = np.r_[rng.normal(size=80), [6.0, 6.5, 7.0, 9.0]]
    _, low, high = aol.detect_outliers(d, num_bins=3)
    for table in (low, high):
        if len(table) == 0:
            continue
        assert np.allclose(table.bin_starts[1:], table.bin_ends[:-1])
        assert (table.bin_ends > table.bin_starts).all()


def test_detect_outliers_rejects_bad_inputs():
    with pytest.raises(ParameterError):
        aol.detect_outliers([], 3)
    with pytest.raises(ParameterError):
        aol.detect_outliers([1.0, 2.0], 0)


def _boost_setup(counts_per_bin, seed=0):
    """Build a 5-bin high-side table with the requested per-bin counts."""
    num_bins = len(counts_per_bin)
    starts = np.arange(num_bins, dtype=float)
    ends = starts + 1.0
    distances = []
    for i, c in enumerate(counts_per_bin):
        distances += list(np.linspace(starts[i] + 0.1, starts[i] + 0.9, c))
    distances = np.array(distances)
    rng = np.random.default_rng(seed)
    features = rng.uniform(1.0, 4.0, size=(len(distances), 3))
    row_ids = np.arange(len(distances))
    table = aol.OutlierBinTable(
        bin_starts=starts,
        bin_ends=ends,
        counts=np.array(counts_per_bin),
        side="high",
        num_bins=num_bins,
    )
    return table, features, distances, row_ids


def test_boost_arithmetic_worked_example():
    # total 20 over 5 bins: threshold 4, half-threshold 2; a bin holding a
    # single record gets floor(4/1) = 4 boosted copies
    table, features, distances, row_ids = _boost_setup([1, 5, 6, 5, 3])
    config = pipeline.SmoteConfig(target_minority_percent=30.0, seed=2)
    boosted = aol.boost_outliers(table, features, distances, row_ids, config)
    assert len(boosted) == 4
    assert all(r.boosted for r in boosted)
    assert {r.source_row_id for r in boosted} == {0}
    # post-boost population of the boosted bin: count * (1 + floor(threshold/count))
    assert 1 + len(boosted) == 1 * (1 + 4 // 1)


def test_boost_skips_bins_at_or_above_half_threshold():
    table, features, distances, row_ids = _boost_setup([3, 5, 6, 3, 3])
    config = pipeline.SmoteConfig(target_minority_percent=30.0, seed=3)
    assert aol.boost_outliers(table, features, distances, row_ids, config) == []


def test_boost_skips_empty_bins():
    table, features, distances, row_ids = _boost_setup([0, 5, 6, 5, 4])
    config = pipeline.SmoteConfig(target_minority_percent=30.0, seed=4)
    boosted = aol.boost_outliers(table, features, distances, row_ids, config)
    assert boosted == []


def test_boost_empty_table_is_empty():
    table = aol.OutlierBinTable(
        bin_starts=np.empty(0), bin_ends=np.empty(0),
        counts=np.empty(0, dtype=int), side="low", num_bins=5,
    )
    config = pipeline.SmoteConfig(target_minority_percent=30.0)
    assert aol.boost_outliers(table, np.empty((0, 2)), np.empty(0), np.empty(0, int), config) == []


def test_boosted_records_are_distinct_from_sources_and_each_other():
    table, features, distances, row_ids = _boost_setup([1, 5, 6, 5, 3], seed=5)
    config = pipeline.SmoteConfig(target_minority_percent=30.0, seed=6)
    boosted = aol.boost_outliers(table, features, distances, row_ids, config)
    vectors = [r.features for r in boosted]
    source = features[0]
    for v in vectors:
        assert not np.array_equal(v, source)
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            assert not np.array_equal(vectors[i], vectors[j])


def test_bin_members_last_bin_is_right_closed():
    table, _, distances, _ = _boost_setup([2, 2, 2, 2, 2])
    d = np.r_[distances, table.bin_ends[-1]]
    mask = aol.bin_members(table, len(table) - 1, d)
    assert mask[-1]
    first = aol.bin_members(table, 0, d)
    assert not first[-1]
