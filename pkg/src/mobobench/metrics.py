"""Benchmark quality, diversity, and effect-size metrics.

The R2 indicator scores a solution set against a utopian point over a fixed
set of weight directions: for each direction v it takes the best (smallest)
weighted Chebyshev deviation max_i v_i * |u_i - s_i| over solutions s, then
averages over directions. Lower is better; a solution sitting exactly on the
utopian point drives it to zero. Directions come from the Das-Dennis simplex
lattice {(k_1/H, ..., k_d/H) : sum k_i = H}, which has C(H + d - 1, d - 1)
members; the default granularity H = 12 gives 91 directions at d = 3.

#Circles counts mutually dissimilar representatives greedily: walk the
candidates in input order and accept one when its distance to every already
accepted representative exceeds the threshold t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fingerprints import CountFingerprint, binarized, minmax_kernel
from .pareto import ParetoFront, hypervolume_exact

__all__ = [
    "DirectionSet",
    "generate_directions",
    "r2_indicator",
    "n_circles",
    "cohens_d",
    "cliffs_delta",
    "EffectSizeReport",
    "hvi_curve",
]


@dataclass(frozen=True)
class DirectionSet:
    """Weight directions on the simplex plus the utopian point they aim at."""

    directions: np.ndarray
    utopian: np.ndarray

    def __post_init__(self) -> None:
        dirs = np.array(self.directions, dtype=np.float64)
        uto = np.array(self.utopian, dtype=np.float64)
        if dirs.ndim != 2 or dirs.shape[0] == 0:
            raise ValueError(f"directions must be a non-empty (m, d) matrix, got shape {dirs.shape}")
        if uto.ndim != 1 or uto.shape[0] != dirs.shape[1]:
            raise ValueError("utopian point dimension must match the directions")
        if not np.all(np.isfinite(dirs)) or not np.all(np.isfinite(uto)):
            raise ValueError("directions and utopian point must be finite")
        if np.any(dirs < 0):
            raise ValueError("directions must be non-negative")
        if np.any(np.abs(dirs.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("every direction must sum to 1 within 1e-12")
        dirs.setflags(write=False)
        uto.setflags(write=False)
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "utopian", uto)

    def __len__(self) -> int:
        return self.directions.shape[0]

    @property
    def dimension(self) -> int:
        return self.directions.shape[1]


def _compositions(total: int, parts: int):
    # lexicographically descending in the first coordinate, deterministic
    if parts == 1:
        yield (total,)
        return
    for k in range(total, -1, -1):
        for rest in _compositions(total - k, parts - 1):
            yield (k, *rest)


def generate_directions(n_objectives: int, granularity: int = 12, utopian=None) -> DirectionSet:
    """Das-Dennis simplex-lattice directions; utopian defaults to the ones vector."""
    if n_objectives < 2:
        raise ValueError(f"n_objectives must be >= 2, got {n_objectives}")
    if granularity < 1:
        raise ValueError(f"granularity must be >= 1, got {granularity}")
    ks = np.array(list(_compositions(granularity, n_objectives)), dtype=np.float64)
    if utopian is None:
        utopian = np.ones(n_objectives)
    return DirectionSet(ks / granularity, utopian)


def r2_indicator(solutions, directions: DirectionSet) -> float:
    """Mean over directions of the best weighted Chebyshev deviation from utopian.

    solutions: (n, d) array-like or a ParetoFront. Lower is better; must be
    non-empty because an empty set has no best deviation.
    """
    if isinstance(solutions, ParetoFront):
        sols = solutions.values
    else:
        sols = np.asarray(solutions, dtype=np.float64)
        if sols.ndim == 1:
            sols = sols[None, :]
    if sols.shape[0] == 0:
        raise ValueError("r2_indicator needs at least one solution")
    if sols.ndim != 2 or sols.shape[1] != directions.dimension:
        raise ValueError(f"solutions must be (n, {directions.dimension}), got shape {sols.shape}")
    if not np.all(np.isfinite(sols)):
        raise ValueError("solutions contain non-finite values")
    dev = np.abs(directions.utopian[None, :] - sols)  # (n, d)
    scaled = directions.directions[:, None, :] * dev[None, :, :]  # (m, n, d)
    return float(scaled.max(axis=2).min(axis=1).mean())


def n_circles(
    fingerprints: Sequence[CountFingerprint],
    threshold: float,
    variant: str = "count",
) -> int:
    """Greedy count of mutually dissimilar representatives.

    Walks fingerprints in input order; accepts one when its Tanimoto distance
    to every accepted representative exceeds threshold. variant="count" uses
    1 - MinMax on the raw counts; variant="binary" collapses counts to 0/1
    first (on binary data MinMax and Tanimoto coincide exactly).
    """
    if len(fingerprints) == 0:
        raise ValueError("n_circles needs at least one fingerprint")
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    if variant == "count":
        pool = list(fingerprints)
    elif variant == "binary":
        pool = [binarized(fp) for fp in fingerprints]
    else:
        raise ValueError(f"unknown variant {variant!r}; expected 'count' or 'binary'")
    accepted: list[CountFingerprint] = []
    for fp in pool:
        if all(1.0 - minmax_kernel(fp, rep) > threshold for rep in accepted):
            accepted.append(fp)
    return len(accepted)


def cohens_d(a, b) -> float:
    """Standardized mean difference with the pooled Bessel-corrected SD.

    Raises on zero pooled variance (both samples constant), where the
    statistic is undefined.
    """
    av = np.asarray(a, dtype=np.float64).reshape(-1)
    bv = np.asarray(b, dtype=np.float64).reshape(-1)
    if av.size < 2 or bv.size < 2:
        raise ValueError("cohens_d needs at least two observations per sample")
    va = av.var(ddof=1)
    vb = bv.var(ddof=1)
    pooled = ((av.size - 1) * va + (bv.size - 1) * vb) / (av.size + bv.size - 2)
    if pooled <= 0.0:
        raise ValueError("zero pooled variance: Cohen's d is undefined for constant samples")
    return float((av.mean() - bv.mean()) / np.sqrt(pooled))


def cliffs_delta(a, b) -> float:
    """Ordinal effect size (#{x > y} - #{x < y}) / (n * m), in [-1, 1].

    Values land on a grid with spacing 1 / (n * m); with 3 vs 3 samples the
    possible magnitudes are multiples of 1/9.
    """
    av = np.asarray(a, dtype=np.float64).reshape(-1)
    bv = np.asarray(b, dtype=np.float64).reshape(-1)
    if av.size == 0 or bv.size == 0:
        raise ValueError("cliffs_delta needs non-empty samples")
    gt = int((av[:, None] > bv[None, :]).sum())
    lt = int((av[:, None] < bv[None, :]).sum())
    return (gt - lt) / (av.size * bv.size)


@dataclass(frozen=True)
class EffectSizeReport:
    """Cohen's d (None when undefined) and Cliff's delta for one comparison."""

    cohens_d: float | None
    cliffs_delta: float


def hvi_curve(round_fronts: Sequence, ref) -> np.ndarray:
    """Hypervolume of each front in a per-round sequence.

    Non-decreasing whenever the fronts come from a growing archive.
    """
    return np.array([hypervolume_exact(front, ref) for front in round_fronts], dtype=np.float64)
