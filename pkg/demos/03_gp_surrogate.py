"""
Exact GP regression on fingerprints
===================================

One independent GP per objective, sharing a single kernel factorization.
The prior mean is constant, the kernel is MinMax scaled by an amplitude,
and observations carry a small fixed noise. Everything is solved exactly
through a Cholesky factor, so predictions are deterministic.
"""

import numpy as np

from mobobench.data import generate_synthetic
from mobobench.gp import GPHyperparams, MultiObjectiveSurrogate

_, pool = generate_synthetic(seed=3, n=40)
train_fps = list(pool.fingerprints[:25])
train_y = pool.objectives[:25]

hp = GPHyperparams(amplitude=1.0, noise_variance=1e-4, mean=0.0)
surrogate = MultiObjectiveSurrogate.fit(train_fps, train_y, hp, kernel="minmax")

# at noise 1e-4 the posterior mean almost interpolates the targets
means, variances = surrogate.predict_batch(queries=train_fps)
worst = np.max(np.abs(means - train_y) / (1.0 + np.abs(train_y)))
print(f"worst relative training error: {worst:.2e}")
print(f"training variances in [{variances.min():.2e}, {variances.max():.2e}]")

# held-out candidates get honest uncertainty, clamped to [0, amplitude]
test_fps = list(pool.fingerprints[25:])
means, variances = surrogate.predict_batch(queries=test_fps)
print("\nheld-out predictions (objective 1):")
for fp_id, m, v in zip(pool.ids[25:30], means[:5, 0], variances[:5, 0]):
    print(f"  {fp_id}: mean {m:.4f}, var {v:.4f}")

# appending one observation equals refitting from scratch
new_fp, new_y = pool.fingerprints[25], pool.objectives[25]
grown = surrogate.append(new_fp, new_y)
refit = MultiObjectiveSurrogate.fit(train_fps + [new_fp], np.vstack([train_y, new_y]), hp, "minmax")
m1, v1 = grown.predict_batch(queries=test_fps)
m2, v2 = refit.predict_batch(queries=test_fps)
print(f"\nappend-vs-refit max |mean diff|: {np.max(np.abs(m1 - m2)):.2e}")
print(f"append-vs-refit max |var diff|:  {np.max(np.abs(v1 - v2)):.2e}")
