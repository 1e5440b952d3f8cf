"""Sparse count fingerprints and the similarity kernels built on them.

A fingerprint is a sparse map from opaque feature ids (unsigned 64-bit
integers, produced by whatever hashing scheme generated them) to positive
occurrence counts. Absent features count as zero.

The MinMax kernel

    k(a, b) = sum_i min(a_i, b_i) / sum_i max(a_i, b_i)

generalizes the Tanimoto coefficient to count vectors and is the similarity
source for both the GP surrogate and the diversity metrics. Because counts
are integers, the min/max sums are exact, so kernel values are independent of
feature iteration order and symmetric to the last bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

__all__ = [
    "CountFingerprint",
    "KERNELS",
    "minmax_kernel",
    "tanimoto_kernel",
    "tanimoto_distance",
    "binarized",
    "get_kernel",
    "kernel_matrix",
    "cross_kernel_matrix",
]

_UINT64_LIMIT = 2**64


@dataclass(frozen=True, eq=True)
class CountFingerprint:
    """Sparse feature-id -> count map for one molecule.

    Counts must be strictly positive; a feature that would have count zero is
    simply absent. An empty map is allowed (it arises in synthetic edge
    cases) and is handled by an explicit kernel policy: two empty
    fingerprints have similarity 1.0, an empty against a non-empty has 0.0.
    """

    features: dict[int, int]
    total: int = field(init=False, compare=False)
    sq_norm: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        feats = dict(self.features)
        total = 0
        sq = 0
        for fid, count in feats.items():
            if isinstance(fid, bool) or not isinstance(fid, (int, np.integer)):
                raise ValueError(f"feature id {fid!r} is not an integer")
            if not 0 <= fid < _UINT64_LIMIT:
                raise ValueError(f"feature id {fid} outside unsigned 64-bit range")
            if isinstance(count, bool) or not isinstance(count, (int, np.integer)):
                raise ValueError(f"count {count!r} for feature {fid} is not an integer")
            if count <= 0:
                raise ValueError(f"count {count} for feature {fid} must be positive")
            total += int(count)
            sq += int(count) * int(count)
        object.__setattr__(self, "features", {int(f): int(c) for f, c in feats.items()})
        object.__setattr__(self, "total", total)
        object.__setattr__(self, "sq_norm", sq)

    def __len__(self) -> int:
        return len(self.features)


def _shared_min(a: CountFingerprint, b: CountFingerprint) -> int:
    # iterate the smaller map, probe the larger
    if len(a.features) > len(b.features):
        a, b = b, a
    big = b.features
    s = 0
    for fid, count in a.features.items():
        other = big.get(fid, 0)
        if other:
            s += count if count < other else other
    return s


def _shared_dot(a: CountFingerprint, b: CountFingerprint) -> int:
    if len(a.features) > len(b.features):
        a, b = b, a
    big = b.features
    s = 0
    for fid, count in a.features.items():
        other = big.get(fid, 0)
        if other:
            s += count * other
    return s


def minmax_kernel(a: CountFingerprint, b: CountFingerprint) -> float:
    """MinMax similarity sum(min) / sum(max), in [0, 1].

    Uses sum(max) = total(a) + total(b) - sum(min), which holds because
    min(x, y) + max(x, y) = x + y for every feature in the union.
    """
    if a.total == 0 and b.total == 0:
        return 1.0
    shared = _shared_min(a, b)
    return shared / (a.total + b.total - shared)


def tanimoto_kernel(a: CountFingerprint, b: CountFingerprint) -> float:
    """Tanimoto similarity <a,b> / (|a|^2 + |b|^2 - <a,b>), in [0, 1].

    Coincides exactly with minmax_kernel when all counts are 0/1.
    """
    if a.total == 0 and b.total == 0:
        return 1.0
    dot = _shared_dot(a, b)
    return dot / (a.sq_norm + b.sq_norm - dot)


def binarized(fp: CountFingerprint) -> CountFingerprint:
    """Copy of fp with every count collapsed to 1."""
    return CountFingerprint({fid: 1 for fid in fp.features})


def tanimoto_distance(a: CountFingerprint, b: CountFingerprint, variant: str = "count") -> float:
    """Distance used by the diversity metrics.

    variant="count" (default): 1 - minmax_kernel(a, b).
    variant="binary": 1 - tanimoto_kernel on the binarized fingerprints.
    """
    if variant == "count":
        return 1.0 - minmax_kernel(a, b)
    if variant == "binary":
        return 1.0 - tanimoto_kernel(binarized(a), binarized(b))
    raise ValueError(f"unknown distance variant {variant!r}; expected 'count' or 'binary'")


KERNELS = ("minmax", "tanimoto")

_KERNEL_FUNCS: dict[str, Callable[[CountFingerprint, CountFingerprint], float]] = {
    "minmax": minmax_kernel,
    "tanimoto": tanimoto_kernel,
}


def get_kernel(name: str) -> Callable[[CountFingerprint, CountFingerprint], float]:
    try:
        return _KERNEL_FUNCS[name]
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}; expected one of {KERNELS}") from None


def kernel_matrix(
    points: Sequence[CountFingerprint],
    kernel: str = "minmax",
    amplitude: float = 1.0,
) -> np.ndarray:
    """Dense amplitude-scaled kernel matrix over one set of fingerprints.

    Exactly symmetric (each off-diagonal value is computed once and
    mirrored) with amplitude on the diagonal, since self-similarity is 1
    under both kernels and under the empty-empty policy.
    """
    if len(points) == 0:
        raise ValueError("kernel_matrix needs at least one fingerprint")
    if not amplitude > 0:
        raise ValueError(f"amplitude must be positive, got {amplitude}")
    fn = get_kernel(kernel)
    n = len(points)
    out = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        out[i, i] = amplitude
        for j in range(i + 1, n):
            v = amplitude * fn(points[i], points[j])
            out[i, j] = v
            out[j, i] = v
    return out


def cross_kernel_matrix(
    queries: Sequence[CountFingerprint],
    points: Sequence[CountFingerprint],
    kernel: str = "minmax",
    amplitude: float = 1.0,
) -> np.ndarray:
    """Amplitude-scaled kernel values between two fingerprint sets, shape (len(queries), len(points))."""
    if not amplitude > 0:
        raise ValueError(f"amplitude must be positive, got {amplitude}")
    fn = get_kernel(kernel)
    out = np.empty((len(queries), len(points)), dtype=np.float64)
    for i, q in enumerate(queries):
        row = out[i]
        for j, p in enumerate(points):
            row[j] = amplitude * fn(q, p)
    return out
