# The two model-based acquisition functions, side by side.
#
# EHVI scores a candidate by the expected growth of the dominated region;
# we estimate it by Monte Carlo with common random numbers (one z-draw
# matrix shared by every candidate, so comparisons are low-variance).
# Scalarized EI collapses the posterior to one Gaussian via fixed weights
# and applies the classic closed form.

import numpy as np

from mobobench.acquisition import (
    PosteriorBelief,
    ehvi_mc,
    ehvi_mc_batch,
    expected_improvement,
    scalarized_ei_scores,
)
from mobobench.pareto import hv_improvement

front = np.array([[0.8, 0.2], [0.5, 0.5], [0.2, 0.8]])
ref = np.zeros(2)
rng = np.random.default_rng(1)
draws = rng.standard_normal((2000, 2))  # CRN: same rows reused for everyone

candidates = {
    "promising": PosteriorBelief(mean=[0.7, 0.7], variance=[0.01, 0.01]),
    "uncertain": PosteriorBelief(mean=[0.4, 0.4], variance=[0.09, 0.09]),
    "dominated": PosteriorBelief(mean=[0.3, 0.3], variance=[0.0, 0.0]),
}
for name, belief in candidates.items():
    score = ehvi_mc(front, belief, ref, draws)
    print(f"EHVI {name:>10}: {score:.5f}")

# zero variance collapses to the deterministic improvement, exactly
frozen = candidates["dominated"]
assert ehvi_mc(front, frozen, ref, draws) == hv_improvement(front, frozen.mean, ref)
print("frozen belief == hv_improvement: True")

# the batch path scores a whole pool at once (identical numbers, chunked
# and optionally threaded under the hood)
means = np.array([[0.7, 0.7], [0.4, 0.4], [0.3, 0.3]])
variances = np.array([[0.01, 0.01], [0.09, 0.09], [0.0, 0.0]])
batch = ehvi_mc_batch(front, means, variances, ref, draws)
print("batch scores:", np.round(batch, 5))

# scalarized EI: weighted-sum belief, best scalarized observation as incumbent
weights = np.array([0.5, 0.5])
incumbent = float(np.max(front @ weights))
scores = scalarized_ei_scores(means, variances, weights, incumbent)
print("\nscalarized EI scores:", np.round(scores, 5))

# which reduces to the textbook one-dimensional expected improvement
print("EI(mean=0.8, var=0.09, inc=0.5) =", expected_improvement(0.8, 0.09, 0.5))
print("EI at zero variance, below inc  =", expected_improvement(0.4, 0.0, 0.5))
