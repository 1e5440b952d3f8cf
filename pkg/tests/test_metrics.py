import math

import numpy as np
import pytest

from mobobench.fingerprints import CountFingerprint, binarized, tanimoto_distance
from mobobench.metrics import (
    DirectionSet,
    cliffs_delta,
    cohens_d,
    generate_directions,
    hvi_curve,
    n_circles,
    r2_indicator,
)
from mobobench.pareto import hypervolume_exact, non_dominated_filter


# ---------------------------------------------------------------- directions


def test_direction_set_validation():
    with pytest.raises(ValueError):
        DirectionSet(np.array([[0.5, 0.6]]), np.ones(2))  # sums to 1.1
    with pytest.raises(ValueError):
        DirectionSet(np.array([[-0.5, 1.5]]), np.ones(2))
    with pytest.raises(ValueError):
        DirectionSet(np.empty((0, 2)), np.ones(2))
    with pytest.raises(ValueError):
        DirectionSet(np.array([[1.0, 0.0]]), np.ones(3))  # utopian mismatch


def test_directions_d2_h2():
    ds = generate_directions(2, 2)
    got = {tuple(row) for row in ds.directions}
    assert got == {(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)}


def test_directions_d3_h1_unit_vectors():
    ds = generate_directions(3, 1)
    got = {tuple(row) for row in ds.directions}
    assert got == {(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)}


def test_directions_d3_h12_count():
    ds = generate_directions(3, 12)
    assert len(ds) == 91
    assert np.array_equal(ds.utopian, np.ones(3))


def test_directions_count_formula_and_determinism():
    for d in (2, 3, 4):
        for h in (1, 3, 7):
            ds = generate_directions(d, h)
            assert len(ds) == math.comb(h + d - 1, d - 1)
            again = generate_directions(d, h)
            assert np.array_equal(ds.directions, again.directions)
            assert np.all(ds.directions >= 0)
            assert np.max(np.abs(ds.directions.sum(axis=1) - 1.0)) <= 1e-12


def test_directions_validation():
    with pytest.raises(ValueError):
        generate_directions(1, 5)
    with pytest.raises(ValueError):
        generate_directions(3, 0)


# ---------------------------------------------------------------- R2


def test_r2_zero_at_utopian():
    ds = generate_directions(3, 4)
    assert r2_indicator(np.ones((1, 3)), ds) == 0.0


def test_r2_hand_value():
    ds = DirectionSet(np.array([[0.5, 0.5]]), np.ones(2))
    assert r2_indicator(np.array([[0.5, 0.8]]), ds) == 0.25


def test_r2_adding_utopian_zeroes_it():
    rng = np.random.default_rng(0)
    ds = generate_directions(3, 6)
    sols = rng.random((8, 3))
    assert r2_indicator(np.vstack([sols, np.ones(3)]), ds) == 0.0


def test_r2_monotone_under_added_solutions():
    rng = np.random.default_rng(1)
    ds = generate_directions(3, 5)
    for _ in range(50):
        sols = rng.random((int(rng.integers(1, 10)), 3))
        extra = rng.random((1, 3))
        assert r2_indicator(np.vstack([sols, extra]), ds) <= r2_indicator(sols, ds) + 1e-15


def test_r2_rejects_empty_and_mismatched():
    ds = generate_directions(2, 3)
    with pytest.raises(ValueError):
        r2_indicator(np.empty((0, 2)), ds)
    with pytest.raises(ValueError):
        r2_indicator(np.ones((2, 3)), ds)


def test_r2_accepts_front_and_vector():
    ds = generate_directions(2, 3)
    front = non_dominated_filter([("a", (0.9, 0.2)), ("b", (0.2, 0.9))])
    assert r2_indicator(front, ds) == r2_indicator(front.values, ds)
    assert r2_indicator(np.array([0.5, 0.5]), ds) == r2_indicator(np.array([[0.5, 0.5]]), ds)


def test_r2_non_negative():
    rng = np.random.default_rng(2)
    ds = generate_directions(3, 4)
    for _ in range(20):
        assert r2_indicator(rng.random((5, 3)), ds) >= 0.0


# ---------------------------------------------------------------- n_circles


def test_circles_identical_fps():
    fp = CountFingerprint({1: 2, 5: 1})
    assert n_circles([fp, fp, fp], 0.5) == 1


def test_circles_disjoint_pair():
    fps = [CountFingerprint({1: 1}), CountFingerprint({2: 1})]
    assert n_circles(fps, 0.75) == 2


def test_circles_greedy_trace():
    # exact pairwise distances: A-B 0.9, A-C 0.5, B-C 0.95
    a = CountFingerprint({1: 10})
    b = CountFingerprint({1: 1})
    c = CountFingerprint({1: 10, 2: 10})
    assert tanimoto_distance(a, b) == 0.9
    assert tanimoto_distance(a, c) == 0.5
    assert tanimoto_distance(b, c) == 0.95
    assert n_circles([a, b, c], 0.6) == 2  # C rejected against A


def test_circles_monotone_in_threshold():
    rng = np.random.default_rng(3)
    fps = []
    for _ in range(25):
        ids = rng.choice(60, size=int(rng.integers(1, 10)), replace=False)
        fps.append(CountFingerprint({int(i): int(c) for i, c in zip(ids, rng.integers(1, 4, len(ids)))}))
    counts = [n_circles(fps, t) for t in (0.3, 0.5, 0.7, 0.9)]
    assert all(x >= y for x, y in zip(counts, counts[1:]))
    assert all(1 <= x <= len(fps) for x in counts)


def test_circles_binary_variant():
    a = CountFingerprint({1: 5, 2: 1})
    b = CountFingerprint({1: 1, 3: 4})
    for t in (0.2, 0.5, 0.8):
        expected = n_circles([binarized(a), binarized(b)], t)
        assert n_circles([a, b], t, variant="binary") == expected


def test_circles_validation():
    fp = CountFingerprint({1: 1})
    with pytest.raises(ValueError):
        n_circles([], 0.5)
    with pytest.raises(ValueError):
        n_circles([fp], 0.0)
    with pytest.raises(ValueError):
        n_circles([fp], 1.1)
    with pytest.raises(ValueError):
        n_circles([fp, fp], 0.5, variant="euclidean")


# ---------------------------------------------------------------- effect sizes


def test_cohens_d_hand_value():
    assert cohens_d([1.0, 2.0, 3.0], [0.0, 1.0, 2.0]) == 1.0


def test_cohens_d_identical_samples_with_spread():
    assert cohens_d([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0


def test_cohens_d_antisymmetric():
    rng = np.random.default_rng(4)
    a, b = rng.random(5), rng.random(7)
    assert cohens_d(a, b) == -cohens_d(b, a)


def test_cohens_d_errors():
    with pytest.raises(ValueError):
        cohens_d([1.0], [2.0, 3.0])  # too few
    with pytest.raises(ValueError):
        cohens_d([2.0, 2.0], [5.0, 5.0])  # zero pooled variance


def test_cliffs_delta_examples():
    assert cliffs_delta([1, 2, 3], [0, 0, 0]) == 1.0
    assert cliffs_delta([1, 2, 3], [2, 2, 2]) == 0.0
    assert cliffs_delta([0, 0, 0], [1, 2, 3]) == -1.0


def test_cliffs_delta_appendix_granularity_values():
    # 3x3 comparisons land on multiples of 1/9; 5/9 and -7/9 reachable
    assert cliffs_delta([1.0, 2.0, 3.0], [0.0, 0.0, 2.5]) == 5.0 / 9.0
    assert cliffs_delta([0.0, 0.0, 2.5], [1.0, 2.0, 3.0]) == -5.0 / 9.0
    assert cliffs_delta([0.0, 1.0, 2.0], [1.5, 2.5, 3.0]) == -7.0 / 9.0


def test_cliffs_delta_granularity_property():
    rng = np.random.default_rng(5)
    for _ in range(100):
        a = rng.integers(0, 4, size=3).astype(float)
        b = rng.integers(0, 4, size=3).astype(float)
        delta = cliffs_delta(a, b)
        assert -1.0 <= delta <= 1.0
        assert abs(delta * 9 - round(delta * 9)) < 1e-12


# ---------------------------------------------------------------- hvi curve


def test_hvi_curve_constant_front():
    front = np.array([[0.5, 0.5]])
    curve = hvi_curve([front, front, front], np.zeros(2))
    assert np.array_equal(curve, np.full(3, 0.25))


def test_hvi_curve_dominated_addition_flat():
    f1 = np.array([[0.5, 0.5]])
    f2 = np.array([[0.5, 0.5], [0.2, 0.2]])
    curve = hvi_curve([f1, f2], np.zeros(2))
    assert curve[0] == curve[1]


def test_hvi_curve_matches_standalone_and_monotone():
    rng = np.random.default_rng(6)
    archive = rng.random((30, 3))
    prefixes = [archive[: k + 1] for k in range(30)]
    curve = hvi_curve(prefixes, np.zeros(3))
    for k, prefix in enumerate(prefixes):
        assert curve[k] == hypervolume_exact(prefix, np.zeros(3))
    assert np.all(np.diff(curve) >= -1e-15)
