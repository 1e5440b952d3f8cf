# Pareto dominance, non-dominated filtering, and the hypervolume indicator.
# All objectives are maximized; the reference point bounds the dominated
# region from below.

import numpy as np

from mobobench.pareto import (
    dominates,
    hv_improvement,
    hypervolume_exact,
    hypervolume_mc,
    non_dominated_filter,
    nondominated_mask,
)

print("dominates((0.8, 0.5), (0.3, 0.5)):", dominates((0.8, 0.5), (0.3, 0.5)))
print("dominates((0.8, 0.2), (0.3, 0.5)):", dominates((0.8, 0.2), (0.3, 0.5)))

# filter a labeled point set; order of survivors is input order
points = [
    ("mol_a", (0.9, 0.1)),
    ("mol_b", (0.4, 0.4)),   # incomparable with both neighbours
    ("mol_c", (0.3, 0.3)),   # dominated by mol_b
    ("mol_d", (0.1, 0.9)),
]
front = non_dominated_filter(points)
print("front ids:", front.ids)

# exact hypervolume: d=2 is a staircase sweep
print("HV  2-d:", hypervolume_exact(front.values, ref=(0.0, 0.0)))

# d=3 slices along the last axis
cube = np.array([[0.5, 0.5, 0.5]])
print("HV  3-d:", hypervolume_exact(cube, ref=(0.0, 0.0, 0.0)))  # 0.125

# Monte Carlo estimator for sanity checks and d > 3
rng = np.random.default_rng(0)
est = hypervolume_mc(front.values, ref=(0.0, 0.0), bound=(1.0, 1.0), samples=200_000, rng=rng)
exact = hypervolume_exact(front.values, (0.0, 0.0))
print(f"MC {est.value:.5f} ± {est.stderr:.5f} vs exact {exact:.5f}")

# how much volume would a new point add? zero iff it is dominated
print("improvement of (0.6, 0.6):", hv_improvement(front.values, (0.6, 0.6), (0.0, 0.0)))
print("improvement of (0.2, 0.2):", hv_improvement(front.values, (0.2, 0.2), (0.0, 0.0)))

# mask form for plain arrays
pts = rng.random((8, 3))
print("non-dominated rows:", np.flatnonzero(nondominated_mask(pts)))
