import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import ndtr

from mobobench import acquisition as acq_mod
from mobobench.acquisition import (
    AcquisitionConfig,
    PosteriorBelief,
    ehvi_mc,
    ehvi_mc_batch,
    expected_improvement,
    random_score,
    random_scores,
    scalarize_weighted,
    scalarized_ei_score,
    scalarized_ei_scores,
)
from mobobench.pareto import hv_improvement, nondominated_mask

EMPTY2 = np.empty((0, 2))


def random_front(rng, d, max_points=10):
    pts = rng.random((int(rng.integers(0, max_points + 1)), d))
    return pts[nondominated_mask(pts)] if len(pts) else np.empty((0, d))


# ---------------------------------------------------------------- config types


def test_belief_validation():
    b = PosteriorBelief(np.array([0.1, 0.2]), np.array([0.0, 0.3]))
    assert b.dimension == 2
    with pytest.raises(ValueError):
        PosteriorBelief(np.array([0.1]), np.array([0.1, 0.2]))
    with pytest.raises(ValueError):
        PosteriorBelief(np.array([0.1, 0.2]), np.array([0.1, -0.2]))
    with pytest.raises(ValueError):
        PosteriorBelief(np.array([np.inf, 0.2]), np.array([0.1, 0.2]))


def test_acquisition_config_validation():
    cfg = AcquisitionConfig(kind="ehvi", ref=(0.0, 0.0))
    assert cfg.mc_samples == 1000 and cfg.fresh_draws is False
    with pytest.raises(ValueError):
        AcquisitionConfig(kind="ucb")
    with pytest.raises(ValueError):
        AcquisitionConfig(kind="ehvi", weights=(0.5, 0.5))  # weights need scalarized_ei
    with pytest.raises(ValueError):
        AcquisitionConfig(kind="scalarized_ei", weights=(0.5, 0.6))  # sum != 1
    with pytest.raises(ValueError):
        AcquisitionConfig(kind="scalarized_ei", weights=(-0.5, 1.5))
    with pytest.raises(ValueError):
        AcquisitionConfig(kind="ehvi", mc_samples=0)
    ok = AcquisitionConfig(kind="scalarized_ei", weights=(0.3, 0.3, 0.4))
    assert ok.weights == (0.3, 0.3, 0.4)


# ---------------------------------------------------------------- normal cdf


def test_normal_cdf_absolute_error():
    grid = np.linspace(-8.0, 8.0, 2001)
    ours = acq_mod._normal_cdf(grid)
    assert np.max(np.abs(ours - ndtr(grid))) <= 1e-12


# ---------------------------------------------------------------- ehvi_mc


def test_ehvi_zero_variance_equals_improvement_exactly():
    rng = np.random.default_rng(0)
    draws = rng.standard_normal((64, 2))
    for _ in range(100):
        front = random_front(rng, 2)
        mean = rng.random(2)
        belief = PosteriorBelief(mean, np.zeros(2))
        got = ehvi_mc(front, belief, np.zeros(2), draws)
        assert got == hv_improvement(front, mean, np.zeros(2))


def test_ehvi_dominated_mean_tiny_variance_is_zero():
    front = np.array([[0.9, 0.9]])
    belief = PosteriorBelief(np.array([0.1, 0.1]), np.array([1e-12, 1e-12]))
    draws = np.random.default_rng(1).standard_normal((1000, 2))
    score = ehvi_mc(front, belief, np.zeros(2), draws)
    assert score <= 1e-9
    assert score == 0.0  # every draw stays dominated, so exactly zero


def test_ehvi_matches_per_sample_loop():
    # oracle: the definition, one hv_improvement call per draw row
    rng = np.random.default_rng(2)
    for _ in range(40):
        d = int(rng.integers(2, 4))
        front = random_front(rng, d)
        mean = rng.random(d)
        var = rng.random(d) * 0.05 * (rng.random(d) > 0.2)  # some zero components
        belief = PosteriorBelief(mean, var)
        draws = rng.standard_normal((40, d))
        sigma = np.sqrt(var)
        expected = np.mean(
            [hv_improvement(front, mean + sigma * z, np.zeros(d)) for z in draws]
        )
        got = ehvi_mc(front, belief, np.zeros(d), draws)
        assert got == pytest.approx(expected, abs=1e-12)


def test_ehvi_repeat_scoring_bit_identical():
    rng = np.random.default_rng(3)
    front = random_front(rng, 3, max_points=8)
    belief = PosteriorBelief(rng.random(3), rng.random(3) * 0.1)
    draws = rng.standard_normal((256, 3))
    first = ehvi_mc(front, belief, np.zeros(3), draws)
    second = ehvi_mc(front, belief, np.zeros(3), draws)
    assert first == second


def test_ehvi_validates_shapes():
    belief = PosteriorBelief(np.array([0.5, 0.5]), np.array([0.1, 0.1]))
    draws = np.zeros((10, 2))
    with pytest.raises(ValueError):
        ehvi_mc(EMPTY2, belief, np.zeros(3), draws)  # ref dim mismatch
    with pytest.raises(ValueError):
        ehvi_mc(EMPTY2, belief, np.zeros(2), np.zeros((10, 3)))  # draws dim
    with pytest.raises(ValueError):
        ehvi_mc(EMPTY2, belief, np.zeros(2), np.zeros((0, 2)))  # no samples


def test_ehvi_empty_front_against_high_sample_oracle():
    # empty front, ref 0: per-sample improvement is prod_i max(0, y_i)
    rng = np.random.default_rng(4)
    mean = np.array([0.5, 0.5])
    var = np.array([0.04, 0.04])
    sigma = np.sqrt(var)

    z_big = rng.standard_normal((1_000_000, 2))
    vals_big = np.prod(np.clip(mean + sigma * z_big, 0.0, None), axis=1)
    oracle = float(vals_big.mean())
    se_oracle = float(vals_big.std(ddof=1) / np.sqrt(z_big.shape[0]))

    z_small = rng.standard_normal((1000, 2))
    vals_small = np.prod(np.clip(mean + sigma * z_small, 0.0, None), axis=1)
    se_small = float(vals_small.std(ddof=1) / np.sqrt(1000))

    got = ehvi_mc(EMPTY2, PosteriorBelief(mean, var), np.zeros(2), z_small)
    assert got == pytest.approx(float(vals_small.mean()), abs=1e-12)
    assert abs(got - oracle) <= 4.0 * np.hypot(se_small, se_oracle)

    # closed-form cross-check: independence makes it a product of EI terms
    closed = expected_improvement(0.5, 0.04, 0.0) ** 2
    assert abs(oracle - closed) <= 4.0 * se_oracle


# ---------------------------------------------------------------- ehvi batch


def test_batch_matches_single_candidate_scoring():
    rng = np.random.default_rng(5)
    front = random_front(rng, 3, max_points=12)
    n = 50
    means = rng.random((n, 3))
    variances = rng.random((n, 3)) * 0.05
    variances[::7] = 0.0  # frozen rows take the exact path
    draws = rng.standard_normal((128, 3))
    batch = ehvi_mc_batch(front, means, variances, np.zeros(3), draws)
    for i in range(n):
        single = ehvi_mc(front, PosteriorBelief(means[i], variances[i]), np.zeros(3), draws)
        assert batch[i] == single


def test_batch_parallel_equals_sequential():
    rng = np.random.default_rng(6)
    front = random_front(rng, 2, max_points=10)
    means = rng.random((300, 2))
    variances = rng.random((300, 2)) * 0.03
    draws = rng.standard_normal((64, 2))
    seq = ehvi_mc_batch(front, means, variances, np.zeros(2), draws, workers=1)
    par = ehvi_mc_batch(front, means, variances, np.zeros(2), draws, workers=4)
    assert np.array_equal(seq, par)


def test_batch_chunking_does_not_change_scores(monkeypatch):
    rng = np.random.default_rng(7)
    front = random_front(rng, 2, max_points=8)
    means = rng.random((120, 2))
    variances = rng.random((120, 2)) * 0.05
    draws = rng.standard_normal((32, 2))
    whole = ehvi_mc_batch(front, means, variances, np.zeros(2), draws)
    monkeypatch.setattr(acq_mod, "_CHUNK_ELEMS", 512)  # force many tiny chunks
    chunked = ehvi_mc_batch(front, means, variances, np.zeros(2), draws)
    chunked_par = ehvi_mc_batch(front, means, variances, np.zeros(2), draws, workers=3)
    assert np.array_equal(whole, chunked)
    assert np.array_equal(whole, chunked_par)


def test_batch_fresh_draws_per_candidate():
    rng = np.random.default_rng(8)
    front = random_front(rng, 2, max_points=6)
    n = 20
    means = rng.random((n, 2))
    variances = rng.random((n, 2)) * 0.05
    draws = rng.standard_normal((n, 48, 2))
    batch = ehvi_mc_batch(front, means, variances, np.zeros(2), draws)
    for i in range(n):
        single = ehvi_mc(front, PosteriorBelief(means[i], variances[i]), np.zeros(2), draws[i])
        assert batch[i] == single


def test_batch_prunes_dominated_candidates_to_exact_zero():
    front = np.array([[0.9, 0.9]])
    means = np.array([[0.1, 0.1], [0.95, 0.95]])
    variances = np.array([[1e-8, 1e-8], [1e-8, 1e-8]])
    draws = np.random.default_rng(9).standard_normal((500, 2))
    scores = ehvi_mc_batch(front, means, variances, np.zeros(2), draws)
    assert scores[0] == 0.0
    assert scores[1] > 0.0


def test_batch_validates_shapes():
    draws = np.zeros((10, 2))
    with pytest.raises(ValueError):
        ehvi_mc_batch(EMPTY2, np.zeros((3, 2)), np.zeros((2, 2)), np.zeros(2), draws)
    with pytest.raises(ValueError):
        ehvi_mc_batch(EMPTY2, np.zeros((3, 2)), -np.ones((3, 2)), np.zeros(2), draws)
    with pytest.raises(ValueError):
        ehvi_mc_batch(EMPTY2, np.zeros((3, 2)), np.zeros((3, 2)), np.zeros(2), np.zeros((4, 10, 2)))
    assert ehvi_mc_batch(EMPTY2, np.zeros((0, 2)), np.zeros((0, 2)), np.zeros(2), draws).size == 0


# ---------------------------------------------------------------- scalarization


def test_scalarize_weighted_examples():
    assert scalarize_weighted((0.3, 0.6, 0.9), (1 / 3, 1 / 3, 1 / 3)) == pytest.approx(0.6, abs=1e-15)
    assert scalarize_weighted((0.7, 0.1, 0.4), (1.0, 0.0, 0.0)) == 0.7
    assert scalarize_weighted((0.0, 0.0), (0.5, 0.5)) == 0.0
    with pytest.raises(ValueError):
        scalarize_weighted((0.1, 0.2), (1.0,))


# ---------------------------------------------------------------- EI


def test_ei_deterministic_limit():
    assert expected_improvement(0.8, 0.0, 0.5) == 0.8 - 0.5
    assert expected_improvement(0.4, 0.0, 0.5) == 0.0


def test_ei_at_mean_equal_incumbent():
    assert expected_improvement(0.5, 1.0, 0.5) == 1.0 / np.sqrt(2.0 * np.pi)


def test_ei_deep_tail_is_negligible():
    assert expected_improvement(0.0, 0.01, 10.0) < 1e-12


def ei_by_quadrature(mean, var, incumbent):
    sigma = np.sqrt(var)

    def integrand(y):
        return (y - incumbent) * np.exp(-0.5 * ((y - mean) / sigma) ** 2) / (
            sigma * np.sqrt(2.0 * np.pi)
        )

    hi = max(mean, incumbent) + 12.0 * sigma
    value, _ = quad(integrand, incumbent, hi, epsabs=1e-13, epsrel=1e-13, limit=300)
    return value


def test_ei_matches_numerical_integration():
    for mean, var, inc in [(0.6, 0.01, 0.5), (0.2, 0.04, 0.5), (0.5, 0.25, 0.5), (1.0, 0.09, 0.2)]:
        assert expected_improvement(mean, var, inc) == pytest.approx(
            ei_by_quadrature(mean, var, inc), abs=1e-9
        )


def test_ei_monotone_in_mean_and_sigma():
    means = np.linspace(-1.0, 2.0, 61)
    ei = expected_improvement(means, np.full_like(means, 0.04), 0.5)
    assert np.all(np.diff(ei) >= 0)
    # below the incumbent, more uncertainty can only help
    sigmas = np.linspace(0.0, 2.0, 41)
    ei_sigma = expected_improvement(np.full_like(sigmas, 0.3), sigmas**2, 0.5)
    assert np.all(np.diff(ei_sigma) >= -1e-15)


def test_ei_vectorized_matches_scalar():
    rng = np.random.default_rng(10)
    means = rng.random(50)
    variances = rng.random(50) * 0.1
    variances[::5] = 0.0
    vec = expected_improvement(means, variances, 0.4)
    for i in range(50):
        assert vec[i] == expected_improvement(means[i], variances[i], 0.4)
    assert np.all(vec >= 0.0)


# ---------------------------------------------------------------- scalarized EI


def test_scalarized_ei_variance_algebra():
    belief = PosteriorBelief(np.array([0.6, 0.6]), np.array([0.02, 0.02]))
    got = scalarized_ei_score(belief, (0.5, 0.5), 0.5)
    assert got == pytest.approx(expected_improvement(0.6, 0.01, 0.5), rel=1e-12)


def test_scalarized_ei_single_objective_reduction():
    belief = PosteriorBelief(np.array([0.7]), np.array([0.09]))
    assert scalarized_ei_score(belief, (1.0,), 0.4) == expected_improvement(0.7, 0.09, 0.4)


def test_scalarized_ei_zero_variance_below_incumbent():
    belief = PosteriorBelief(np.array([0.2, 0.2]), np.zeros(2))
    assert scalarized_ei_score(belief, (0.5, 0.5), 0.5) == 0.0


def test_scalarized_ei_scores_match_loop():
    rng = np.random.default_rng(11)
    means = rng.random((40, 3))
    variances = rng.random((40, 3)) * 0.05
    w = (0.2, 0.3, 0.5)
    vec = scalarized_ei_scores(means, variances, w, 0.45)
    for i in range(40):
        belief = PosteriorBelief(means[i], variances[i])
        # matrix and scalar dot products accumulate in different orders
        assert vec[i] == pytest.approx(scalarized_ei_score(belief, w, 0.45), rel=1e-12)


# ---------------------------------------------------------------- random


def test_random_score_deterministic_per_seed():
    a = [random_score(np.random.default_rng(1)) for _ in range(3)]
    b = [random_score(np.random.default_rng(1)) for _ in range(3)]
    assert a == b
    seq1 = random_scores(np.random.default_rng(2), 10)
    seq2 = random_scores(np.random.default_rng(3), 10)
    assert not np.array_equal(seq1, seq2)


def test_random_scores_uniform_mean():
    scores = random_scores(np.random.default_rng(4), 10_000)
    assert scores.shape == (10_000,)
    assert np.all((scores >= 0.0) & (scores < 1.0))
    assert 0.49 <= scores.mean() <= 0.51


def test_random_scores_equal_repeated_single_draws():
    vec = random_scores(np.random.default_rng(5), 20)
    rng = np.random.default_rng(5)
    loop = np.array([random_score(rng) for _ in range(20)])
    assert np.array_equal(vec, loop)
