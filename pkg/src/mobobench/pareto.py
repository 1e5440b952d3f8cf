"""Pareto dominance, non-dominated filtering, and hypervolume computation.

Maximization convention throughout: vector a dominates b when a >= b in every
objective and a > b in at least one. Hypervolume is the Lebesgue measure of
the union of boxes [ref, p] over front points p, i.e. the region dominated by
the front and bounded below by the reference point.

Exact hypervolume is implemented for d in {1, 2, 3}: a sort-and-sweep for
d = 2 and, for d = 3, a sweep over slabs of the third coordinate (descending)
accumulating 2-d sweep areas. Higher dimensions raise and point the caller at
the Monte Carlo estimator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

__all__ = [
    "UnsupportedDimensionError",
    "ParetoFront",
    "HypervolumeEstimate",
    "dominates",
    "nondominated_mask",
    "non_dominated_filter",
    "hypervolume_exact",
    "hypervolume_mc",
    "hv_improvement",
    "nondominated_box_decomposition",
    "box_improvement",
]


class UnsupportedDimensionError(ValueError):
    """Raised when an exact routine is asked for a dimension it does not support."""


def _as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def _as_values(front) -> np.ndarray:
    """Accept a ParetoFront or an (n, d) array-like of objective vectors."""
    if isinstance(front, ParetoFront):
        return front.values
    arr = np.asarray(front, dtype=np.float64)
    if arr.ndim == 1 and arr.size == 0:
        return arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"front must be an (n, d) array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("front contains non-finite values")
    return arr


def dominates(a, b) -> bool:
    """True when a is no worse than b everywhere and strictly better somewhere."""
    av = _as_vector(a, "a")
    bv = _as_vector(b, "b")
    if av.shape != bv.shape:
        raise ValueError(f"dimension mismatch: {av.shape[0]} vs {bv.shape[0]}")
    return bool(np.all(av >= bv) and np.any(av > bv))


def nondominated_mask(values: np.ndarray) -> np.ndarray:
    """Boolean mask of rows not dominated by any other row.

    Duplicate rows never dominate each other, so all copies survive.
    """
    vals = np.asarray(values, dtype=np.float64)
    n = vals.shape[0]
    if n == 0:
        return np.zeros(0, dtype=bool)
    a = vals[:, None, :]
    b = vals[None, :, :]
    # ge[j, i]: row j >= row i everywhere; gt[j, i]: strictly better somewhere
    ge = (a >= b).all(axis=-1)
    gt = (a > b).any(axis=-1)
    dominated = np.logical_and(ge, gt).any(axis=0)
    return ~dominated


@dataclass(frozen=True)
class ParetoFront:
    """Mutually non-dominated objective vectors with their solution ids.

    Order follows construction order (non_dominated_filter keeps input
    order), ids are unique, and the value matrix is locked read-only.
    """

    ids: tuple[Hashable, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim != 2:
            raise ValueError(f"front values must be (n, d), got shape {vals.shape}")
        if len(self.ids) != vals.shape[0]:
            raise ValueError(f"{len(self.ids)} ids for {vals.shape[0]} value rows")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("front ids must be unique")
        if not np.all(np.isfinite(vals)):
            raise ValueError("front values contain non-finite entries")
        if not nondominated_mask(vals).all():
            raise ValueError("front values are not mutually non-dominated")
        vals.setflags(write=False)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def dimension(self) -> int:
        return self.values.shape[1]

    @classmethod
    def empty(cls, d: int = 0) -> "ParetoFront":
        return cls((), np.empty((0, d), dtype=np.float64))


def non_dominated_filter(points: Iterable[tuple[Hashable, Sequence[float]]]) -> ParetoFront:
    """Reduce (id, objective-vector) pairs to their Pareto front.

    Keeps input order, retains objective-space duplicates (neither dominates
    the other), and requires unique ids.
    """
    pts = list(points)
    if not pts:
        return ParetoFront.empty()
    ids = [p[0] for p in pts]
    vals = np.array([np.asarray(p[1], dtype=np.float64) for p in pts])
    if vals.ndim != 2:
        raise ValueError("objective vectors must share one dimension")
    mask = nondominated_mask(vals)
    kept = [i for i in range(len(pts)) if mask[i]]
    return ParetoFront(tuple(ids[i] for i in kept), vals[mask])


def _hv2(points: np.ndarray, ref: np.ndarray) -> float:
    """2-d sweep: points already clipped to ref."""
    if points.shape[0] == 0:
        return 0.0
    order = np.argsort(-points[:, 0], kind="stable")
    hv = 0.0
    cur_y = ref[1]
    for i in order:
        x, y = points[i]
        if y > cur_y:
            hv += (x - ref[0]) * (y - cur_y)
            cur_y = y
    return hv


def _hv3(points: np.ndarray, ref: np.ndarray) -> float:
    """3-d slab sweep: slice along the third coordinate descending, each slab
    contributes (2-d area of the projections seen so far) x (slab height)."""
    if points.shape[0] == 0:
        return 0.0
    levels = np.unique(points[:, 2])[::-1]
    hv = 0.0
    seen: list[np.ndarray] = []
    for k, z in enumerate(levels):
        seen.append(points[points[:, 2] == z, :2])
        lower = levels[k + 1] if k + 1 < len(levels) else ref[2]
        height = z - lower
        if height > 0.0:
            hv += _hv2(np.concatenate(seen, axis=0), ref[:2]) * height
    return hv


def hypervolume_exact(front, ref) -> float:
    """Exact hypervolume of a front above ref, for d in {1, 2, 3}.

    Points below the reference point in some coordinate are clipped to it
    (contributing only their part above ref), never rejected.
    """
    vals = _as_values(front)
    if vals.shape[0] == 0:
        return 0.0
    refv = _as_vector(ref, "ref")
    if refv.shape[0] != vals.shape[1]:
        raise ValueError(f"reference point has dimension {refv.shape[0]}, front has {vals.shape[1]}")
    d = vals.shape[1]
    clipped = np.maximum(vals, refv)
    if d == 1:
        return float(np.max(clipped[:, 0]) - refv[0])
    if d == 2:
        return float(_hv2(clipped, refv))
    if d == 3:
        return float(_hv3(clipped, refv))
    raise UnsupportedDimensionError(
        f"exact hypervolume supports d <= 3, got d = {d}; use hypervolume_mc for higher dimensions"
    )


@dataclass(frozen=True)
class HypervolumeEstimate:
    value: float
    stderr: float
    samples: int


def hypervolume_mc(front, ref, bound, samples: int, rng: np.random.Generator) -> HypervolumeEstimate:
    """Monte Carlo hypervolume: uniform samples in [ref, bound], returns the
    dominated fraction scaled by the box volume plus a binomial standard error.

    Works in any dimension; used to validate the exact routines and to cover
    d > 3.
    """
    vals = _as_values(front)
    refv = _as_vector(ref, "ref")
    boundv = _as_vector(bound, "bound")
    if refv.shape != boundv.shape:
        raise ValueError("ref and bound must share a dimension")
    if not np.all(boundv >= refv):
        raise ValueError("bound must be componentwise >= ref")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if vals.shape[0] > 0:
        if vals.shape[1] != refv.shape[0]:
            raise ValueError("front dimension does not match ref")
        if not np.all(boundv >= vals.max(axis=0)):
            raise ValueError("bound must be componentwise >= every front point")
    volume = float(np.prod(boundv - refv))
    if vals.shape[0] == 0 or volume == 0.0:
        return HypervolumeEstimate(0.0, 0.0, samples)
    hits = 0
    chunk = max(1, min(samples, int(2e7 // max(1, vals.shape[0]))))
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        u = refv + (boundv - refv) * rng.random((m, refv.shape[0]))
        dominated = (u[:, None, :] <= vals[None, :, :]).all(axis=-1).any(axis=-1)
        hits += int(dominated.sum())
        done += m
    frac = hits / samples
    stderr = volume * float(np.sqrt(frac * (1.0 - frac) / samples))
    return HypervolumeEstimate(volume * frac, stderr, samples)


def _boxes2(points: np.ndarray, ref: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Disjoint boxes covering the 2-d region above ref NOT dominated by points.

    points: clipped to ref. Returns (lower (k, 2), upper (k, 2)); uppers may
    be +inf. For an n-point front this is the n+1 staircase-complement boxes.
    """
    if points.shape[0] == 0:
        return ref[None, :].copy(), np.full((1, 2), np.inf)
    keep = nondominated_mask(points)
    pts = np.unique(points[keep], axis=0)[::-1]  # x strictly descending, y strictly ascending
    xs = pts[:, 0]
    ys = pts[:, 1]
    n = pts.shape[0]
    lower = np.empty((n + 1, 2))
    upper = np.empty((n + 1, 2))
    lower[0] = (xs[0], ref[1])
    upper[0] = (np.inf, np.inf)
    for i in range(1, n):
        lower[i] = (xs[i], ys[i - 1])
        upper[i] = (xs[i - 1], np.inf)
    lower[n] = (ref[0], ys[n - 1])
    upper[n] = (xs[n - 1], np.inf)
    return lower, upper


def nondominated_box_decomposition(front, ref) -> tuple[np.ndarray, np.ndarray]:
    """Partition the region above ref not dominated by the front into disjoint
    axis-aligned boxes (lower (k, d), upper (k, d); uppers may be +inf).

    The measure of [ref, y] intersected with this region is exactly the
    hypervolume improvement of adding y to the front; see hv_improvement.
    d = 3 extrudes the 2-d staircase complement over slabs of the third
    coordinate, so the box count is O(n^2) in the front size.
    """
    vals = _as_values(front)
    refv = _as_vector(ref, "ref")
    d = refv.shape[0]
    if vals.shape[0] == 0:
        return refv[None, :].copy(), np.full((1, d), np.inf)
    if vals.shape[1] != d:
        raise ValueError(f"front dimension {vals.shape[1]} does not match ref dimension {d}")
    clipped = np.maximum(vals, refv)
    if d == 1:
        return np.array([[clipped[:, 0].max()]]), np.array([[np.inf]])
    if d == 2:
        return _boxes2(clipped, refv)
    if d == 3:
        levels = np.unique(clipped[:, 2])[::-1]
        lowers = [np.array([[refv[0], refv[1], levels[0]]])]
        uppers = [np.array([[np.inf, np.inf, np.inf]])]
        seen: list[np.ndarray] = []
        for k, z in enumerate(levels):
            seen.append(clipped[clipped[:, 2] == z, :2])
            z_lower = levels[k + 1] if k + 1 < len(levels) else refv[2]
            if z_lower >= z:
                continue  # zero-height slab contributes nothing
            b2l, b2u = _boxes2(np.concatenate(seen, axis=0), refv[:2])
            m = b2l.shape[0]
            lo = np.empty((m, 3))
            hi = np.empty((m, 3))
            lo[:, :2] = b2l
            lo[:, 2] = z_lower
            hi[:, :2] = b2u
            hi[:, 2] = z
            lowers.append(lo)
            uppers.append(hi)
        return np.concatenate(lowers, axis=0), np.concatenate(uppers, axis=0)
    raise UnsupportedDimensionError(
        f"box decomposition supports d <= 3, got d = {d}; use hypervolume_mc for higher dimensions"
    )


def box_improvement(lower: np.ndarray, upper: np.ndarray, point: np.ndarray) -> float:
    """Measure of [ref, point] within the decomposed non-dominated region.

    Sum over boxes of prod_i clip(min(upper_i, point_i) - lower_i, 0, .).
    Exactly 0 whenever the point is dominated: every box then has a
    non-positive side, and the clipped product is a true zero.
    """
    sides = np.clip(np.minimum(upper, point) - lower, 0.0, None)
    return float(np.prod(sides, axis=1).sum())


def hv_improvement(front, candidate, ref) -> float:
    """Hypervolume gained by adding candidate to the front, relative to ref.

    Equal to hypervolume_exact(front + candidate) - hypervolume_exact(front),
    computed directly as the measure of the candidate's box intersected with
    the non-dominated region so that dominated candidates score exactly 0.
    """
    cand = _as_vector(candidate, "candidate")
    refv = _as_vector(ref, "ref")
    if cand.shape != refv.shape:
        raise ValueError("candidate and ref must share a dimension")
    lower, upper = nondominated_box_decomposition(front, refv)
    return box_improvement(lower, upper, cand)
