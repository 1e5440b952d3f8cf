import dataclasses

import numpy as np
import pytest

from mobobench.acquisition import AcquisitionConfig
from mobobench.data import generate_synthetic
from mobobench.engine import (
    STREAM_EHVI,
    STREAM_INIT,
    STREAM_RANDOM,
    Archive,
    CandidatePool,
    RunConfig,
    derive_streams,
    init_run,
    run,
    run_round,
    run_suite,
)
from mobobench.fingerprints import CountFingerprint
from mobobench.metrics import generate_directions, hvi_curve, r2_indicator
from mobobench.pareto import hypervolume_exact, non_dominated_filter


def synth_pool(seed=21, n=80):
    _, pool = generate_synthetic(seed, n)
    return pool


def ehvi_config(**kw):
    acq = AcquisitionConfig(kind="ehvi", mc_samples=kw.pop("mc_samples", 64))
    return RunConfig(acquisition=acq, **kw)


def strip_wall(records):
    return [dataclasses.replace(r, wall_ms=0.0) for r in records]


# ---------------------------------------------------------------- rng streams


def test_streams_deterministic_and_distinct():
    a = derive_streams(7)
    b = derive_streams(7)
    assert np.array_equal(a.init.random(5), b.init.random(5))
    assert np.array_equal(a.ehvi.random(5), b.ehvi.random(5))
    assert np.array_equal(a.random.random(5), b.random.random(5))
    c = derive_streams(7)
    assert not np.array_equal(c.init.random(5), c.ehvi.random(5))
    assert not np.array_equal(derive_streams(7).init.random(5), derive_streams(8).init.random(5))


def test_streams_match_documented_derivation():
    rngs = derive_streams(13)
    for tag, stream in ((STREAM_INIT, rngs.init), (STREAM_EHVI, rngs.ehvi), (STREAM_RANDOM, rngs.random)):
        manual = np.random.Generator(np.random.PCG64(np.random.SeedSequence(13, spawn_key=(tag,))))
        assert np.array_equal(stream.random(8), manual.random(8))


def test_stream_isolation():
    # exhausting one stream never perturbs another
    a = derive_streams(5)
    a.ehvi.standard_normal(10_000)
    b = derive_streams(5)
    assert np.array_equal(a.random.random(16), b.random.random(16))


# ---------------------------------------------------------------- pool / archive


def test_pool_validation():
    fp = CountFingerprint({1: 1})
    with pytest.raises(ValueError, match="unique"):
        CandidatePool(ids=("a", "a"), fingerprints=(fp, fp), objectives=np.zeros((2, 2)))
    with pytest.raises(ValueError, match="empty"):
        CandidatePool(ids=(), fingerprints=(), objectives=np.zeros((0, 2)))
    with pytest.raises(ValueError, match="align"):
        CandidatePool(ids=("a",), fingerprints=(fp, fp), objectives=np.zeros((2, 2)))
    with pytest.raises(ValueError, match=r"\(n, d\)"):
        CandidatePool(ids=("a",), fingerprints=(fp,), objectives=np.zeros(2))
    with pytest.raises(ValueError, match="non-finite"):
        CandidatePool(ids=("a",), fingerprints=(fp,), objectives=np.array([[np.nan, 0.0]]))


def test_pool_lookup_and_immutability():
    pool = synth_pool(n=10)
    assert pool.index_of(pool.ids[3]) == 3
    with pytest.raises(KeyError, match="not in the pool"):
        pool.index_of("nope")
    with pytest.raises(ValueError):
        pool.objectives[0, 0] = 0.5
    assert pool.dimension == 3 and len(pool) == 10


def test_archive_append_and_guards():
    pool = synth_pool(n=10)
    archive = Archive(pool)
    row = archive.append(pool.ids[4])
    assert np.array_equal(row, pool.objectives[4])
    assert pool.ids[4] in archive and len(archive) == 1
    with pytest.raises(ValueError, match="already evaluated"):
        archive.append(pool.ids[4])
    with pytest.raises(KeyError):
        archive.append("ghost")
    archive.append(pool.ids[1])
    assert archive.ids == [pool.ids[4], pool.ids[1]]
    assert archive.values.shape == (2, 3)
    front = archive.front()
    expected = non_dominated_filter(
        [(pool.ids[4], pool.objectives[4]), (pool.ids[1], pool.objectives[1])]
    )
    assert front.ids == expected.ids


# ---------------------------------------------------------------- config


def test_run_config_validation():
    acq = AcquisitionConfig(kind="ehvi")
    RunConfig(acquisition=acq, rounds=0)  # zero rounds is a legal edge
    with pytest.raises(ValueError, match="rounds"):
        RunConfig(acquisition=acq, rounds=-1)
    with pytest.raises(ValueError, match="init_size"):
        RunConfig(acquisition=acq, init_size=0)
    with pytest.raises(ValueError, match="workers"):
        RunConfig(acquisition=acq, workers=0)
    with pytest.raises(ValueError, match="kernel"):
        RunConfig(acquisition=acq, kernel="rbf")
    with pytest.raises(ValueError, match="threshold"):
        RunConfig(acquisition=acq, circles_thresholds=(0.5, 0.0))
    with pytest.raises(ValueError, match="ref"):
        RunConfig(acquisition=acq, ref=(0.0, np.inf))


def test_run_config_ref_consistency():
    acq = AcquisitionConfig(kind="ehvi", ref=(0.0, 0.0))
    RunConfig(acquisition=acq, ref=(0.0, 0.0))  # agreement is fine
    with pytest.raises(ValueError, match="disagree"):
        RunConfig(acquisition=acq, ref=(0.1, 0.0))


# ---------------------------------------------------------------- init


def test_init_run_deterministic_per_seed():
    pool = synth_pool()
    cfg = ehvi_config(rounds=0, init_size=10, master_seed=3)
    a1, _ = init_run(pool, cfg)
    a2, _ = init_run(pool, cfg)
    assert a1.ids == a2.ids and len(a1) == 10
    assert len(set(a1.ids)) == 10
    b, _ = init_run(pool, dataclasses.replace(cfg, master_seed=4))
    assert b.ids != a1.ids


def test_init_run_budget_checks():
    pool = synth_pool(n=20)
    with pytest.raises(ValueError, match="exceeds pool size"):
        init_run(pool, ehvi_config(rounds=0, init_size=21))
    with pytest.raises(ValueError, match="init_size \\+ rounds"):
        init_run(pool, ehvi_config(rounds=11, init_size=10))
    archive, _ = init_run(pool, ehvi_config(rounds=0, init_size=20))
    assert sorted(archive.ids) == sorted(pool.ids)


def test_init_shared_across_methods():
    pool = synth_pool()
    seed = 9
    ids = {}
    for kind in ("ehvi", "scalarized_ei", "random"):
        cfg = RunConfig(
            acquisition=AcquisitionConfig(kind=kind, mc_samples=16),
            rounds=2, init_size=8, master_seed=seed,
        )
        ids[kind] = run(pool, cfg).archive.ids[:8]
    assert ids["ehvi"] == ids["scalarized_ei"] == ids["random"]


# ---------------------------------------------------------------- run


def test_run_zero_rounds():
    pool = synth_pool()
    result = run(pool, ehvi_config(rounds=0, init_size=7, master_seed=1))
    assert result.records == []
    assert len(result.archive) == 7
    expected = non_dominated_filter(zip(result.archive.ids, result.archive.values))
    assert result.front.ids == expected.ids


def test_run_deterministic_replay():
    pool = synth_pool()
    cfg = ehvi_config(rounds=6, init_size=8, master_seed=2)
    r1, r2 = run(pool, cfg), run(pool, cfg)
    assert strip_wall(r1.records) == strip_wall(r2.records)
    assert r1.archive.ids == r2.archive.ids


def test_run_round_indices_and_archive_growth():
    pool = synth_pool()
    result = run(pool, ehvi_config(rounds=5, init_size=8, master_seed=0))
    assert [r.round_index for r in result.records] == [1, 2, 3, 4, 5]
    assert len(result.archive) == 13
    assert result.archive.ids[8:] == [r.selected_id for r in result.records]
    for rec in result.records:
        assert rec.objectives == tuple(pool.objectives[pool.index_of(rec.selected_id)])


def test_run_hv_non_decreasing_and_matches_curve():
    pool = synth_pool()
    cfg = ehvi_config(rounds=8, init_size=8, master_seed=5)
    result = run(pool, cfg)
    hvs = [r.hypervolume for r in result.records]
    # exact HV of a grown archive is re-accumulated from scratch, so allow
    # one-ulp dips below the previous value
    assert all(b >= a - 1e-12 * max(abs(a), 1.0) for a, b in zip(hvs, hvs[1:]))
    values = result.archive.values
    fronts = [values[: 8 + k + 1] for k in range(8)]
    curve = hvi_curve(fronts, np.zeros(3))
    assert np.array_equal(np.asarray(hvs), curve)


def test_run_r2_matches_recomputation():
    pool = synth_pool()
    cfg = RunConfig(
        acquisition=AcquisitionConfig(kind="random"),
        rounds=6, init_size=8, master_seed=11, directions_granularity=6,
    )
    result = run(pool, cfg)
    directions = generate_directions(3, 6)
    values = result.archive.values
    for k, rec in enumerate(result.records):
        assert rec.r2 == r2_indicator(values[: 8 + k + 1], directions)
        assert rec.hypervolume == hypervolume_exact(values[: 8 + k + 1], np.zeros(3))


def test_random_selection_replay_oracle():
    # the random policy must be exactly uniform argmax over iid draws on
    # the shrinking unevaluated list, in ascending pool-index order
    pool = synth_pool(n=40)
    cfg = RunConfig(acquisition=AcquisitionConfig(kind="random"), rounds=10, init_size=5, master_seed=17)
    result = run(pool, cfg)

    rngs = derive_streams(17)
    chosen = {int(i) for i in rngs.init.choice(len(pool), size=5, replace=False)}
    assert [pool.ids[i] for i in sorted(chosen)] == sorted(result.archive.ids[:5], key=pool.index_of)
    for rec in result.records:
        unevaluated = [i for i in range(len(pool)) if i not in chosen]
        draws = rngs.random.random(len(unevaluated))
        pick = unevaluated[int(np.argmax(draws))]
        assert rec.selected_id == pool.ids[pick]
        assert rec.acq_score == draws[int(np.argmax(draws))]
        chosen.add(pick)


@pytest.mark.parametrize("kind", ["ehvi", "scalarized_ei", "random"])
def test_single_unevaluated_candidate_is_selected(kind):
    pool = synth_pool(n=9)
    cfg = RunConfig(
        acquisition=AcquisitionConfig(kind=kind, mc_samples=16),
        rounds=1, init_size=8, master_seed=3,
    )
    result = run(pool, cfg)
    leftover = set(pool.ids) - set(result.archive.ids[:8])
    assert result.records[0].selected_id == leftover.pop()


@pytest.mark.parametrize("kind", ["ehvi", "scalarized_ei"])
def test_duplicate_fingerprints_tie_break_to_lower_index(kind):
    # identical fingerprints produce identical beliefs, and shared draws make
    # the scores bitwise equal, so argmax must keep the lower pool index
    base = synth_pool(n=12)
    fp = CountFingerprint({9000: 2, 9001: 1})
    ids = base.ids[:10] + ("twin_a", "twin_b")
    fps = base.fingerprints[:10] + (fp, fp)
    objectives = np.vstack([base.objectives[:10], [[0.5, 0.5, 0.5]], [[0.5, 0.5, 0.5]]])
    pool = CandidatePool(ids=ids, fingerprints=fps, objectives=objectives, task="t")

    archive = Archive(pool)
    for mol_id in base.ids[:10]:
        archive.append(mol_id)
    cfg = RunConfig(
        acquisition=AcquisitionConfig(kind=kind, mc_samples=32),
        rounds=1, init_size=10, master_seed=0,
    )
    from mobobench.engine import _fit_surrogate

    surrogate = _fit_surrogate(archive, cfg)
    selected, _, record, _ = run_round(pool, archive, surrogate, cfg, derive_streams(0))
    assert selected == "twin_a"


def test_pool_exhausted_error():
    pool = synth_pool(n=6)
    archive = Archive(pool)
    for mol_id in pool.ids:
        archive.append(mol_id)
    cfg = RunConfig(acquisition=AcquisitionConfig(kind="random"), rounds=0, init_size=6)
    with pytest.raises(ValueError, match="pool exhausted"):
        run_round(pool, archive, None, cfg, derive_streams(0))


def test_run_round_requires_surrogate_and_archive():
    pool = synth_pool(n=10)
    cfg = ehvi_config(rounds=1, init_size=3)
    archive, rngs = init_run(pool, cfg)
    with pytest.raises(ValueError, match="needs a fitted surrogate"):
        run_round(pool, archive, None, cfg, rngs)
    empty = Archive(pool)
    with pytest.raises(ValueError, match="archive is empty"):
        run_round(pool, empty, None, dataclasses.replace(cfg, acquisition=AcquisitionConfig(kind="random")), rngs)


def test_ehvi_workers_equivalence():
    pool = synth_pool(n=50)
    base = ehvi_config(rounds=4, init_size=8, master_seed=6, mc_samples=128)
    seq = run(pool, base)
    par = run(pool, dataclasses.replace(base, workers=4))
    assert strip_wall(seq.records) == strip_wall(par.records)


def test_ehvi_fresh_draws_mode_runs_and_is_deterministic():
    pool = synth_pool(n=40)
    cfg = RunConfig(
        acquisition=AcquisitionConfig(kind="ehvi", mc_samples=32, fresh_draws=True),
        rounds=3, init_size=6, master_seed=4,
    )
    r1, r2 = run(pool, cfg), run(pool, cfg)
    assert strip_wall(r1.records) == strip_wall(r2.records)
    crn = run(pool, dataclasses.replace(cfg, acquisition=AcquisitionConfig(kind="ehvi", mc_samples=32)))
    assert crn.archive.ids[:6] == r1.archive.ids[:6]


def test_scalarized_ei_weights_resolution():
    pool = synth_pool(n=30)
    default = RunConfig(
        acquisition=AcquisitionConfig(kind="scalarized_ei"),
        rounds=3, init_size=6, master_seed=8,
    )
    explicit = RunConfig(
        acquisition=AcquisitionConfig(kind="scalarized_ei", weights=(1 / 3, 1 / 3, 1 / 3)),
        rounds=3, init_size=6, master_seed=8,
    )
    r1, r2 = run(pool, default), run(pool, explicit)
    assert [r.selected_id for r in r1.records] == [r.selected_id for r in r2.records]


# ---------------------------------------------------------------- suite


def test_run_suite_aggregation():
    pool = synth_pool(n=60)
    cfg = ehvi_config(rounds=2, init_size=6, mc_samples=32)
    suite = run_suite(pool, cfg, seeds=(1, 2, 3), acquisitions=("ehvi", "random"))
    assert suite.seeds == (1, 2, 3)
    assert suite.acquisitions == ("ehvi", "random")
    assert len(suite.trials) == 6
    m = suite.methods["random"]
    assert m.seeds == (1, 2, 3)
    assert m.hv_mean == pytest.approx(np.mean(m.final_hypervolume))
    assert m.hv_std == pytest.approx(np.std(m.final_hypervolume, ddof=1))
    assert not m.degenerate
    assert len(suite.effect_sizes) == 1
    pair = suite.effect_sizes[0]
    assert (pair.first, pair.second) == ("ehvi", "random")
    # 3x3 seed comparison: Cliff's delta lives on a 1/9 grid
    assert abs(pair.hypervolume.cliffs_delta * 9 - round(pair.hypervolume.cliffs_delta * 9)) < 1e-12
    for trial in suite.trials:
        assert set(trial.circles) == set(cfg.circles_thresholds)


def test_run_suite_trial_workers_equivalence():
    pool = synth_pool(n=60)
    cfg = ehvi_config(rounds=2, init_size=6, mc_samples=32)
    seq = run_suite(pool, cfg, seeds=(1, 2), acquisitions=("ehvi", "random"))
    par = run_suite(pool, cfg, seeds=(1, 2), acquisitions=("ehvi", "random"), trial_workers=4)
    for a, b in zip(seq.trials, par.trials):
        assert (a.acquisition, a.seed) == (b.acquisition, b.seed)
        assert strip_wall(a.records) == strip_wall(b.records)
        assert a.final_hypervolume == b.final_hypervolume
        assert a.circles == b.circles
    assert seq.methods["ehvi"].hv_mean == par.methods["ehvi"].hv_mean


def test_run_suite_validation():
    pool = synth_pool(n=30)
    cfg = ehvi_config(rounds=1, init_size=4, mc_samples=16)
    with pytest.raises(ValueError, match="unknown acquisition"):
        run_suite(pool, cfg, seeds=(1,), acquisitions=("thompson",))
    with pytest.raises(ValueError, match="unique"):
        run_suite(pool, cfg, seeds=(1, 1), acquisitions=("random",))
    with pytest.raises(ValueError, match="unique"):
        run_suite(pool, cfg, seeds=(1,), acquisitions=("random", "random"))
    with pytest.raises(ValueError, match="at least one"):
        run_suite(pool, cfg, seeds=(), acquisitions=("random",))


def test_run_suite_single_seed_degenerate():
    pool = synth_pool(n=30)
    cfg = ehvi_config(rounds=1, init_size=4, mc_samples=16)
    suite = run_suite(pool, cfg, seeds=(5,), acquisitions=("random",))
    m = suite.methods["random"]
    assert m.degenerate and m.hv_std == 0.0 and m.r2_std == 0.0
    assert suite.effect_sizes == []


def test_suite_trials_match_standalone_runs():
    pool = synth_pool(n=50)
    cfg = ehvi_config(rounds=2, init_size=5, mc_samples=32)
    suite = run_suite(pool, cfg, seeds=(2,), acquisitions=("ehvi",))
    solo = run(pool, dataclasses.replace(cfg, master_seed=2))
    trial = suite.trials[0]
    assert strip_wall(trial.records) == strip_wall(solo.records)
    assert trial.final_hypervolume == hypervolume_exact(solo.archive.values, np.zeros(3))
