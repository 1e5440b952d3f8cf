import numpy as np
import pytest

from mobobench import gp as gp_mod
from mobobench.fingerprints import CountFingerprint, cross_kernel_matrix, kernel_matrix
from mobobench.gp import GPHyperparams, MultiObjectiveSurrogate, append_observation

NOISE = 1e-4


def distinct_fps(rng, n, max_id=400):
    # each gets a private marker feature so no two inputs collide
    fps = []
    for i in range(n):
        k = int(rng.integers(1, 12))
        ids = rng.choice(max_id, size=k, replace=False)
        counts = rng.integers(1, 5, size=k)
        features = {int(fid): int(c) for fid, c in zip(ids, counts)}
        features[10_000 + i] = 1
        fps.append(CountFingerprint(features))
    return fps


def fit1(fps, targets, **kw):
    return MultiObjectiveSurrogate.fit(fps, np.asarray(targets, dtype=float), **kw)


# ---------------------------------------------------------------- fit basics


def test_hyperparams_validation():
    with pytest.raises(ValueError):
        GPHyperparams(amplitude=0.0)
    with pytest.raises(ValueError):
        GPHyperparams(noise_variance=-1e-4)
    hp = GPHyperparams()
    assert hp.amplitude == 1.0 and hp.noise_variance == 1e-4 and hp.mean == 0.0


def test_fit_single_point_solve_vector():
    s = fit1([CountFingerprint({1: 1})], [0.5])
    assert s.models[0].solve_vector[0] == pytest.approx(0.5 / 1.0001, rel=1e-15)


def test_fit_identical_inputs_zero_targets():
    fp = CountFingerprint({1: 2})
    s = fit1([fp, fp], [0.0, 0.0])
    assert np.array_equal(s.models[0].solve_vector, np.zeros(2))


def test_fit_disjoint_pair_diagonal_solve():
    s = fit1([CountFingerprint({1: 1}), CountFingerprint({2: 1})], [1.0, 0.0])
    vec = s.models[0].solve_vector
    assert vec[0] == pytest.approx(1.0 / 1.0001, rel=1e-15)
    assert vec[1] == 0.0


def test_fit_validation_errors():
    fp = CountFingerprint({1: 1})
    with pytest.raises(ValueError):
        MultiObjectiveSurrogate.fit([], np.empty((0, 1)))
    with pytest.raises(ValueError):
        fit1([fp], [[0.1, 0.2], [0.3, 0.4]])  # 2 rows for 1 input
    with pytest.raises(ValueError):
        fit1([fp], [np.nan])
    with pytest.raises(ValueError):
        fit1([fp], [0.1], kernel="rbf")


def test_fit_promotes_1d_targets():
    s = fit1([CountFingerprint({1: 1})], [0.3])
    assert s.n_objectives == 1


def test_cholesky_reconstructs_gram():
    rng = np.random.default_rng(0)
    fps = distinct_fps(rng, 12)
    s = fit1(fps, rng.random((12, 2)))
    gram = kernel_matrix(fps, "minmax", 1.0) + NOISE * np.eye(12)
    chol = s.models[0].chol
    assert np.allclose(chol @ chol.T, gram, rtol=1e-8, atol=1e-12)


def test_fit_deterministic_bitwise():
    rng = np.random.default_rng(1)
    fps = distinct_fps(rng, 10)
    y = rng.random((10, 3))
    a = fit1(fps, y)
    b = fit1(fps, y)
    for ma, mb in zip(a.models, b.models):
        assert np.array_equal(ma.solve_vector, mb.solve_vector)
        assert np.array_equal(ma.chol, mb.chol)


def test_solve_vector_matches_dense_solve():
    rng = np.random.default_rng(2)
    for n in (1, 5, 25, 50):
        fps = distinct_fps(rng, n)
        y = rng.random(n)
        s = fit1(fps, y)
        dense = np.linalg.solve(kernel_matrix(fps, "minmax", 1.0) + NOISE * np.eye(n), y)
        assert np.allclose(s.models[0].solve_vector, dense, atol=1e-8, rtol=0)


# ---------------------------------------------------------------- predict


def test_prior_recovery_disjoint_query():
    s = fit1([CountFingerprint({1: 1})], [0.7])
    mean, var = s.predict(CountFingerprint({999: 3}))
    assert mean[0] == 0.0
    assert var[0] == 1.0


def test_predict_at_single_training_point():
    s = fit1([CountFingerprint({1: 1})], [1.0])
    mean, var = s.predict(CountFingerprint({1: 1}))
    assert mean[0] == pytest.approx(1.0 / 1.0001, rel=1e-12)
    assert var[0] == pytest.approx(1.0 - 1.0 / 1.0001, rel=1e-9)


def test_zero_targets_predict_zero_mean():
    rng = np.random.default_rng(3)
    fps = distinct_fps(rng, 8)
    s = fit1(fps, np.zeros(8))
    for fp in distinct_fps(rng, 5):
        mean, _ = s.predict(fp)
        assert mean[0] == 0.0


def test_constant_mean_function():
    hp = GPHyperparams(mean=0.5)
    fp = CountFingerprint({1: 1})
    s = fit1([fp], [0.5], hyperparams=hp)
    mean, var = s.predict(CountFingerprint({42: 1}))
    assert mean[0] == 0.5  # prior mean away from data
    assert var[0] == 1.0
    mean_at, _ = s.predict(fp)
    assert mean_at[0] == 0.5  # zero residual everywhere


def test_interpolation_at_training_points():
    rng = np.random.default_rng(4)
    for n in (5, 20, 50):
        fps = distinct_fps(rng, n)
        y = rng.random((n, 2))
        s = fit1(fps, y)
        for i, fp in enumerate(fps):
            mean, var = s.predict(fp)
            for j in range(2):
                assert abs(mean[j] - y[i, j]) <= 1e-2 * (1.0 + abs(y[i, j]))
            assert 0.0 <= var[0] <= 1.0  # shrunk below the prior, never negative


def test_variance_clamped_to_prior():
    rng = np.random.default_rng(5)
    fps = distinct_fps(rng, 30)
    s = fit1(fps, rng.random(30))
    queries = distinct_fps(np.random.default_rng(6), 20, max_id=300)
    _, var = s.predict_batch(queries)
    assert np.all(var >= 0.0)
    assert np.all(var <= 1.0)


def test_amplitude_scales_prior_variance():
    hp = GPHyperparams(amplitude=2.0)
    s = fit1([CountFingerprint({1: 1})], [0.1], hyperparams=hp)
    _, var = s.predict(CountFingerprint({2: 1}))
    assert var[0] == 2.0


# ---------------------------------------------------------------- batch


def test_predict_batch_matches_scalar_predict():
    rng = np.random.default_rng(7)
    fps = distinct_fps(rng, 15)
    s = fit1(fps, rng.random((15, 3)))
    queries = distinct_fps(np.random.default_rng(8), 100, max_id=500)
    means, variances = s.predict_batch(queries)
    assert means.shape == (100, 3) and variances.shape == (100, 3)
    for i, q in enumerate(queries):
        m, v = s.predict(q)
        assert np.allclose(means[i], m, atol=1e-12, rtol=0)
        assert np.allclose(variances[i], v, atol=1e-12, rtol=0)


def test_predict_batch_empty():
    s = fit1([CountFingerprint({1: 1})], [[0.1, 0.2]])
    means, variances = s.predict_batch([])
    assert means.shape == (0, 2) and variances.shape == (0, 2)


def test_predict_batch_variance_shared_across_objectives():
    rng = np.random.default_rng(9)
    fps = distinct_fps(rng, 10)
    s = fit1(fps, rng.random((10, 3)))
    _, variances = s.predict_batch(distinct_fps(np.random.default_rng(10), 7))
    assert np.array_equal(variances[:, 0], variances[:, 1])
    assert np.array_equal(variances[:, 0], variances[:, 2])


def test_predict_batch_cross_path_identical():
    rng = np.random.default_rng(11)
    fps = distinct_fps(rng, 9)
    s = fit1(fps, rng.random((9, 2)))
    queries = distinct_fps(np.random.default_rng(12), 6)
    cross = cross_kernel_matrix(queries, list(s.train_inputs), "minmax", 1.0)
    m1, v1 = s.predict_batch(queries)
    m2, v2 = s.predict_batch(cross=cross)
    assert np.array_equal(m1, m2) and np.array_equal(v1, v2)
    with pytest.raises(ValueError):
        s.predict_batch(queries, cross=cross)
    with pytest.raises(ValueError):
        s.predict_batch()


# ---------------------------------------------------------------- append


def test_append_equals_refit():
    rng = np.random.default_rng(13)
    fps = distinct_fps(rng, 12)
    y = rng.random((12, 2))
    s = fit1(fps[:11], y[:11])
    appended = s.append(fps[11], y[11])
    refit = fit1(fps, y)
    queries = distinct_fps(np.random.default_rng(14), 10)
    ma, va = appended.predict_batch(queries)
    mr, vr = refit.predict_batch(queries)
    assert np.allclose(ma, mr, atol=1e-8, rtol=0)
    assert np.allclose(va, vr, atol=1e-8, rtol=0)
    for m_app, m_ref in zip(appended.models, refit.models):
        assert np.allclose(m_app.solve_vector, m_ref.solve_vector, atol=1e-8, rtol=0)
    assert s.n_train == 11  # original untouched


def test_append_to_single_point_model():
    fps = [CountFingerprint({1: 1}), CountFingerprint({2: 2})]
    y = np.array([[0.3], [0.9]])
    one = fit1(fps[:1], y[:1]).append(fps[1], y[1])
    two = fit1(fps, y)
    assert np.allclose(one.models[0].solve_vector, two.models[0].solve_vector, atol=1e-12)


def test_append_then_predict_interpolates_new_point():
    rng = np.random.default_rng(15)
    fps = distinct_fps(rng, 20)
    y = rng.random((20, 2))
    s = fit1(fps[:19], y[:19])
    s2 = s.append(fps[19], y[19])
    mean, _ = s2.predict(fps[19])
    for j in range(2):
        assert abs(mean[j] - y[19, j]) <= 10 * NOISE * (1.0 + abs(y[19, j]))


def test_append_duplicate_same_target_barely_moves_predictions():
    rng = np.random.default_rng(16)
    fps = distinct_fps(rng, 10)
    y = rng.random(10)
    s = fit1(fps, y)
    dup = s.append(fps[3], [y[3]])
    before, _ = s.predict(fps[3])
    after, _ = dup.predict(fps[3])
    assert abs(after[0] - before[0]) < 1e-3


def test_append_observation_alias():
    s = fit1([CountFingerprint({1: 1})], [[0.2, 0.4]])
    s2 = append_observation(s, CountFingerprint({2: 1}), [0.6, 0.8])
    assert s2.n_train == 2 and s.n_train == 1


def test_append_validates_values():
    s = fit1([CountFingerprint({1: 1})], [[0.2, 0.4]])
    with pytest.raises(ValueError):
        s.append(CountFingerprint({2: 1}), [0.6])  # wrong arity
    with pytest.raises(ValueError):
        s.append(CountFingerprint({2: 1}), [0.6, np.inf])


# ---------------------------------------------------------------- jitter


def test_jitter_rescues_near_singular_gram():
    # three identical molecules with vanishing noise: raw Cholesky cannot
    # succeed, the escalation ladder must
    fp = CountFingerprint({1: 1})
    hp = GPHyperparams(noise_variance=1e-18)
    s = fit1([fp, fp, fp], [0.5, 0.5, 0.5], hyperparams=hp)
    assert s.n_train == 3


def test_factor_failure_names_objective():
    bad = np.array([[-1.0]])
    with pytest.raises(np.linalg.LinAlgError, match="objective 2"):
        gp_mod._factor(bad, 1e-12, objective_index=2)
