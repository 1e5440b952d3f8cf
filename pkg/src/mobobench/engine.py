"""Pool-based multi-objective Bayesian optimization loop and benchmark suite.

One run: draw a seeded initial archive from the candidate pool, fit one GP
per objective, then for each round score every unevaluated candidate with the
configured acquisition, select the argmax (ties break to the lowest pool
index), reveal that candidate's objectives, refit, and log cumulative-archive
metrics. Everything downstream of (pool, config) is deterministic: the
initialization, the EHVI draw matrices, and the random-acquisition scores
come from independent sub-streams of the master seed, so enabling or
disabling one consumer never perturbs the others.

A suite runs the cross product of acquisition kinds and seeds, shares each
seed's initial archive across kinds (the init stream does not depend on the
acquisition), and aggregates final hypervolume / R2 with effect sizes
between kinds plus #Circles diversity counts.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .acquisition import (
    ACQUISITION_KINDS,
    AcquisitionConfig,
    ehvi_mc_batch,
    random_scores,
    scalarized_ei_scores,
)
from .fingerprints import KERNELS, CountFingerprint, cross_kernel_matrix
from .gp import GPHyperparams, MultiObjectiveSurrogate
from .metrics import (
    DirectionSet,
    EffectSizeReport,
    cliffs_delta,
    cohens_d,
    generate_directions,
    n_circles,
    r2_indicator,
)
from .pareto import ParetoFront, hypervolume_exact, non_dominated_filter

__all__ = [
    "STREAM_INIT",
    "STREAM_EHVI",
    "STREAM_RANDOM",
    "RNG_ALGORITHM",
    "RngBundle",
    "derive_streams",
    "CandidatePool",
    "Archive",
    "RunConfig",
    "RunRecord",
    "RunResult",
    "init_run",
    "run_round",
    "run",
    "TrialResult",
    "MethodSummary",
    "EffectSizePair",
    "SuiteResult",
    "summarize_trials",
    "run_suite",
    "DEFAULT_CIRCLES_THRESHOLDS",
]

# fixed stream tags; each consumer owns one child of the master seed
STREAM_INIT = 0
STREAM_EHVI = 1
STREAM_RANDOM = 2

RNG_ALGORITHM = "pcg64/seedsequence(master_seed, spawn_key=(tag,)); tags: init=0, ehvi=1, random=2"

DEFAULT_CIRCLES_THRESHOLDS = (0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90)


@dataclass(frozen=True)
class RngBundle:
    """Independent generators for the three stochastic consumers of a run."""

    init: np.random.Generator
    ehvi: np.random.Generator
    random: np.random.Generator


def _stream(master_seed: int, tag: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=(tag,))))


def derive_streams(master_seed: int) -> RngBundle:
    return RngBundle(
        init=_stream(master_seed, STREAM_INIT),
        ehvi=_stream(master_seed, STREAM_EHVI),
        random=_stream(master_seed, STREAM_RANDOM),
    )


@dataclass(frozen=True, eq=False)
class CandidatePool:
    """Fixed finite candidate set: ids, fingerprints, and a hidden objective table."""

    ids: tuple[str, ...]
    fingerprints: tuple[CountFingerprint, ...]
    objectives: np.ndarray
    task: str = ""

    def __post_init__(self) -> None:
        obj = np.array(self.objectives, dtype=np.float64)
        if obj.ndim != 2:
            raise ValueError(f"objectives must be (n, d), got shape {obj.shape}")
        n = obj.shape[0]
        if len(self.ids) != n or len(self.fingerprints) != n:
            raise ValueError("ids, fingerprints, and objective rows must align")
        if n == 0:
            raise ValueError("candidate pool must not be empty")
        if len(set(self.ids)) != n:
            raise ValueError("pool ids must be unique")
        if not np.all(np.isfinite(obj)):
            raise ValueError("objectives contain non-finite values")
        obj.setflags(write=False)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "fingerprints", tuple(self.fingerprints))
        object.__setattr__(self, "objectives", obj)
        object.__setattr__(self, "_index", {mol_id: i for i, mol_id in enumerate(self.ids)})

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dimension(self) -> int:
        return self.objectives.shape[1]

    def index_of(self, mol_id: str) -> int:
        try:
            return self._index[mol_id]
        except KeyError:
            raise KeyError(f"id {mol_id!r} is not in the pool") from None


class Archive:
    """Evaluated molecules in evaluation order; grows one append at a time."""

    def __init__(self, pool: CandidatePool):
        self.pool = pool
        self.ids: list[str] = []
        self.fingerprints: list[CountFingerprint] = []
        self._rows: list[np.ndarray] = []
        self._seen: set[str] = set()

    def append(self, mol_id: str) -> np.ndarray:
        """Evaluate one pool member by lookup; re-selection is an error."""
        if mol_id in self._seen:
            raise ValueError(f"id {mol_id!r} was already evaluated")
        idx = self.pool.index_of(mol_id)
        self.ids.append(mol_id)
        self.fingerprints.append(self.pool.fingerprints[idx])
        row = self.pool.objectives[idx]
        self._rows.append(row)
        self._seen.add(mol_id)
        return row

    def __contains__(self, mol_id: str) -> bool:
        return mol_id in self._seen

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def values(self) -> np.ndarray:
        return np.array(self._rows, dtype=np.float64)

    def front(self) -> ParetoFront:
        return non_dominated_filter(zip(self.ids, self._rows))


@dataclass(frozen=True)
class RunConfig:
    """Everything one run depends on besides the pool itself."""

    acquisition: AcquisitionConfig
    rounds: int = 200
    init_size: int = 10
    master_seed: int = 0
    ref: tuple[float, ...] | None = None
    directions_granularity: int = 12
    circles_thresholds: tuple[float, ...] = DEFAULT_CIRCLES_THRESHOLDS
    kernel: str = "minmax"
    hyperparams: GPHyperparams = GPHyperparams()
    workers: int = 1

    def __post_init__(self) -> None:
        if self.rounds < 0:
            raise ValueError(f"rounds must be >= 0, got {self.rounds}")
        if self.init_size < 1:
            raise ValueError(f"init_size must be >= 1, got {self.init_size}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.kernel not in KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}; expected one of {KERNELS}")
        for t in self.circles_thresholds:
            if not 0.0 < t <= 1.0:
                raise ValueError(f"circles threshold {t} outside (0, 1]")
        if self.ref is not None:
            r = np.asarray(self.ref, dtype=np.float64)
            if r.ndim != 1 or not np.all(np.isfinite(r)):
                raise ValueError("ref must be a finite vector")
            object.__setattr__(self, "ref", tuple(float(x) for x in r))
        if (
            self.ref is not None
            and self.acquisition.ref is not None
            and tuple(self.acquisition.ref) != tuple(self.ref)
        ):
            raise ValueError("run-level ref and acquisition-level ref disagree")


@dataclass(frozen=True)
class RunRecord:
    """Audit row for one round; wall_ms is informational and excluded from
    the determinism guarantees that cover every other field."""

    round_index: int
    selected_id: str
    acq_score: float
    objectives: tuple[float, ...]
    hypervolume: float
    r2: float
    wall_ms: float


@dataclass(frozen=True)
class RunResult:
    records: list[RunRecord]
    archive: Archive
    front: ParetoFront


def _resolve_ref(config: RunConfig, d: int) -> np.ndarray:
    ref = config.ref if config.ref is not None else config.acquisition.ref
    if ref is None:
        return np.zeros(d)
    refv = np.asarray(ref, dtype=np.float64)
    if refv.shape[0] != d:
        raise ValueError(f"ref has dimension {refv.shape[0]}, objectives have {d}")
    return refv


def _resolve_weights(config: RunConfig, d: int) -> np.ndarray:
    if config.acquisition.weights is None:
        return np.full(d, 1.0 / d)
    w = np.asarray(config.acquisition.weights, dtype=np.float64)
    if w.shape[0] != d:
        raise ValueError(f"{w.shape[0]} weights for {d} objectives")
    return w


def init_run(pool: CandidatePool, config: RunConfig) -> tuple[Archive, RngBundle]:
    """Seeded uniform initial archive (without replacement) plus the run's RNG streams."""
    if config.init_size > len(pool):
        raise ValueError(f"init_size {config.init_size} exceeds pool size {len(pool)}")
    if config.init_size + config.rounds > len(pool):
        raise ValueError(
            f"init_size + rounds = {config.init_size + config.rounds} exceeds pool size {len(pool)}"
        )
    rngs = derive_streams(config.master_seed)
    archive = Archive(pool)
    for idx in rngs.init.choice(len(pool), size=config.init_size, replace=False):
        archive.append(pool.ids[int(idx)])
    return archive, rngs


def _fit_surrogate(archive: Archive, config: RunConfig) -> MultiObjectiveSurrogate:
    return MultiObjectiveSurrogate.fit(
        archive.fingerprints, archive.values, config.hyperparams, config.kernel
    )


def _pool_cross(pool: CandidatePool, archive: Archive, config: RunConfig) -> np.ndarray:
    return cross_kernel_matrix(
        pool.fingerprints, archive.fingerprints, config.kernel, config.hyperparams.amplitude
    )


def run_round(
    pool: CandidatePool,
    archive: Archive,
    surrogate: MultiObjectiveSurrogate | None,
    config: RunConfig,
    rngs: RngBundle,
    *,
    cross: np.ndarray | None = None,
    directions: DirectionSet | None = None,
) -> tuple[str, MultiObjectiveSurrogate | None, RunRecord, np.ndarray | None]:
    """Score unevaluated candidates, select the argmax, evaluate, refit, log.

    cross optionally carries the cached (pool x archive) kernel matrix; the
    returned matrix has the new observation's column appended so callers can
    thread it through a loop instead of recomputing (the run() loop does).
    Ties in the scores break to the lowest pool index because candidates are
    scored in ascending index order and argmax keeps the first maximum.
    """
    t0 = time.perf_counter()
    kind = config.acquisition.kind
    d = pool.dimension
    ref = _resolve_ref(config, d)
    if directions is None:
        directions = generate_directions(d, config.directions_granularity)

    unevaluated = np.array([i for i in range(len(pool)) if pool.ids[i] not in archive], dtype=np.int64)
    if unevaluated.size == 0:
        raise ValueError("pool exhausted: every candidate is already evaluated")
    if len(archive) == 0:
        raise ValueError("archive is empty; run init_run first")

    if kind == "random":
        scores = random_scores(rngs.random, unevaluated.size)
    else:
        if surrogate is None:
            raise ValueError(f"acquisition {kind!r} needs a fitted surrogate")
        if cross is None:
            cross = _pool_cross(pool, archive, config)
        means, variances = surrogate.predict_batch(cross=cross[unevaluated])
        if kind == "ehvi":
            mc = config.acquisition.mc_samples
            if config.acquisition.fresh_draws:
                draws = rngs.ehvi.standard_normal((unevaluated.size, mc, d))
            else:
                draws = rngs.ehvi.standard_normal((mc, d))
            front = archive.front()
            scores = ehvi_mc_batch(
                front.values, means, variances, ref, draws, workers=config.workers
            )
        else:  # scalarized_ei
            w = _resolve_weights(config, d)
            incumbent = float(np.max(archive.values @ w))
            scores = scalarized_ei_scores(means, variances, w, incumbent)

    pos = int(np.argmax(scores))
    selected_idx = int(unevaluated[pos])
    selected_id = pool.ids[selected_idx]
    selected_score = float(scores[pos])

    row = archive.append(selected_id)
    if kind != "random":
        surrogate = surrogate.append(pool.fingerprints[selected_idx], row)
        if cross is not None:
            col = cross_kernel_matrix(
                pool.fingerprints,
                [pool.fingerprints[selected_idx]],
                config.kernel,
                config.hyperparams.amplitude,
            )
            cross = np.hstack([cross, col])

    archive_values = archive.values
    record = RunRecord(
        round_index=len(archive) - config.init_size,
        selected_id=selected_id,
        acq_score=selected_score,
        objectives=tuple(float(x) for x in row),
        hypervolume=hypervolume_exact(archive_values, ref),
        r2=r2_indicator(archive_values, directions),
        wall_ms=(time.perf_counter() - t0) * 1000.0,
    )
    return selected_id, surrogate, record, cross


def run(pool: CandidatePool, config: RunConfig) -> RunResult:
    """Full deterministic run: init, `rounds` selection rounds, final front."""
    d = pool.dimension
    archive, rngs = init_run(pool, config)
    directions = generate_directions(d, config.directions_granularity)
    if config.acquisition.kind == "random":
        surrogate, cross = None, None
    else:
        surrogate = _fit_surrogate(archive, config)
        cross = _pool_cross(pool, archive, config)
    records: list[RunRecord] = []
    for _ in range(config.rounds):
        _, surrogate, record, cross = run_round(
            pool, archive, surrogate, config, rngs, cross=cross, directions=directions
        )
        records.append(record)
    return RunResult(records, archive, archive.front())


@dataclass(frozen=True)
class TrialResult:
    acquisition: str
    seed: int
    records: list[RunRecord]
    final_hypervolume: float
    final_r2: float
    circles: dict[float, int]


@dataclass(frozen=True)
class MethodSummary:
    acquisition: str
    seeds: tuple[int, ...]
    final_hypervolume: tuple[float, ...]
    final_r2: tuple[float, ...]
    hv_mean: float
    hv_std: float
    r2_mean: float
    r2_std: float
    circles_mean: dict[float, float]
    circles_std: dict[float, float]
    degenerate: bool


@dataclass(frozen=True)
class EffectSizePair:
    first: str
    second: str
    hypervolume: EffectSizeReport
    r2: EffectSizeReport


@dataclass(frozen=True)
class SuiteResult:
    task: str
    seeds: tuple[int, ...]
    acquisitions: tuple[str, ...]
    trials: list[TrialResult]
    methods: dict[str, MethodSummary]
    effect_sizes: list[EffectSizePair]


def _std(values: np.ndarray) -> float:
    # sample std across seeds; a single seed has no spread to estimate
    return float(values.std(ddof=1)) if values.size >= 2 else 0.0


def _effect_report(first: np.ndarray, second: np.ndarray) -> EffectSizeReport:
    try:
        d_val: float | None = cohens_d(first, second)
    except ValueError:
        d_val = None  # zero pooled variance: undefined, reported as such
    return EffectSizeReport(d_val, cliffs_delta(first, second))


def summarize_trials(
    trials: Sequence[TrialResult],
    acquisitions: Sequence[str],
    seeds: Sequence[int],
) -> tuple[dict[str, MethodSummary], list[EffectSizePair]]:
    """Aggregate per-method statistics and pairwise effect sizes from trials."""
    by_kind: dict[str, list[TrialResult]] = {kind: [] for kind in acquisitions}
    for tr in trials:
        by_kind[tr.acquisition].append(tr)
    methods: dict[str, MethodSummary] = {}
    for kind in acquisitions:
        rows = sorted(by_kind[kind], key=lambda tr: list(seeds).index(tr.seed))
        hv = np.array([tr.final_hypervolume for tr in rows])
        r2 = np.array([tr.final_r2 for tr in rows])
        thresholds = rows[0].circles.keys() if rows else ()
        circ = {t: np.array([tr.circles[t] for tr in rows], dtype=np.float64) for t in thresholds}
        methods[kind] = MethodSummary(
            acquisition=kind,
            seeds=tuple(tr.seed for tr in rows),
            final_hypervolume=tuple(float(x) for x in hv),
            final_r2=tuple(float(x) for x in r2),
            hv_mean=float(hv.mean()),
            hv_std=_std(hv),
            r2_mean=float(r2.mean()),
            r2_std=_std(r2),
            circles_mean={t: float(v.mean()) for t, v in circ.items()},
            circles_std={t: _std(v) for t, v in circ.items()},
            degenerate=len(rows) < 2,
        )
    pairs: list[EffectSizePair] = []
    kinds = list(acquisitions)
    for i in range(len(kinds)):
        for j in range(i + 1, len(kinds)):
            a, b = methods[kinds[i]], methods[kinds[j]]
            pairs.append(
                EffectSizePair(
                    first=kinds[i],
                    second=kinds[j],
                    hypervolume=_effect_report(
                        np.array(a.final_hypervolume), np.array(b.final_hypervolume)
                    ),
                    r2=_effect_report(np.array(a.final_r2), np.array(b.final_r2)),
                )
            )
    return methods, pairs


def run_suite(
    pool: CandidatePool,
    config: RunConfig,
    seeds: Sequence[int],
    acquisitions: Sequence[str],
    trial_workers: int = 1,
) -> SuiteResult:
    """Cross product of acquisition kinds and seeds with shared per-seed inits.

    Trials are independent, so with trial_workers > 1 they run on a thread
    pool; results are keyed by (kind, seed) and aggregation order is fixed,
    so parallelism never changes the output.
    """
    kinds = list(acquisitions)
    seed_list = [int(s) for s in seeds]
    if not kinds or not seed_list:
        raise ValueError("run_suite needs at least one acquisition kind and one seed")
    if len(set(kinds)) != len(kinds):
        raise ValueError("acquisition kinds must be unique")
    if len(set(seed_list)) != len(seed_list):
        raise ValueError("seeds must be unique")
    for kind in kinds:
        if kind not in ACQUISITION_KINDS:
            raise ValueError(f"unknown acquisition kind {kind!r}; expected one of {ACQUISITION_KINDS}")

    d = pool.dimension
    base_acq = config.acquisition

    def trial_config(kind: str, seed: int) -> RunConfig:
        acq = AcquisitionConfig(
            kind=kind,
            ref=base_acq.ref,
            weights=base_acq.weights if kind == "scalarized_ei" else None,
            mc_samples=base_acq.mc_samples,
            fresh_draws=base_acq.fresh_draws,
        )
        return replace(config, acquisition=acq, master_seed=seed)

    def one_trial(kind: str, seed: int) -> TrialResult:
        cfg = trial_config(kind, seed)
        result = run(pool, cfg)
        ref = _resolve_ref(cfg, d)
        directions = generate_directions(d, cfg.directions_granularity)
        values = result.archive.values
        front_ids = set(result.front.ids)
        front_fps = [
            fp for mol_id, fp in zip(result.archive.ids, result.archive.fingerprints)
            if mol_id in front_ids
        ]
        circles = {t: n_circles(front_fps, t) for t in cfg.circles_thresholds}
        return TrialResult(
            acquisition=kind,
            seed=seed,
            records=result.records,
            final_hypervolume=hypervolume_exact(values, ref),
            final_r2=r2_indicator(values, directions),
            circles=circles,
        )

    tasks = [(kind, seed) for kind in kinds for seed in seed_list]
    if trial_workers <= 1 or len(tasks) == 1:
        trials = [one_trial(kind, seed) for kind, seed in tasks]
    else:
        with ThreadPoolExecutor(max_workers=trial_workers) as pool_ex:
            trials = list(pool_ex.map(lambda ks: one_trial(*ks), tasks))
    methods, pairs = summarize_trials(trials, kinds, seed_list)
    return SuiteResult(
        task=pool.task,
        seeds=tuple(seed_list),
        acquisitions=tuple(kinds),
        trials=trials,
        methods=methods,
        effect_sizes=pairs,
    )
