"""
Count fingerprints and similarity kernels
=========================================

Molecules enter the library as sparse feature-count maps. Two kernels
compare them: MinMax (sum of per-feature minima over maxima, the count
generalization of Jaccard) and Tanimoto on the dot-product form.
"""

import numpy as np

from mobobench.fingerprints import (
    CountFingerprint,
    binarized,
    cross_kernel_matrix,
    kernel_matrix,
    minmax_kernel,
    tanimoto_distance,
    tanimoto_kernel,
)

# a fingerprint is just feature id -> positive count
a = CountFingerprint({1: 2, 2: 1})
b = CountFingerprint({1: 1, 3: 3})
print("a:", dict(a.features))
print("b:", dict(b.features))

# MinMax: shared feature 1 contributes min(2,1)=1; the union weighs 2+1+3=6
print("minmax(a, b) =", minmax_kernel(a, b))          # 1/6
print("minmax(a, a) =", minmax_kernel(a, a))          # identity -> 1.0
print("distance(a, b) =", tanimoto_distance(a, b))    # 1 - 1/6

# Tanimoto on binarized fingerprints agrees with MinMax only for 0/1 counts
print("tanimoto(bin a, bin b) =", tanimoto_kernel(binarized(a), binarized(b)))

# the whole pool at once: a PSD Gram matrix, exactly symmetric because the
# count arithmetic is integer ratios
pool = [a, b, CountFingerprint({2: 4, 5: 1}), CountFingerprint({7: 2})]
gram = kernel_matrix(pool, "minmax", amplitude=1.0)
print("\nGram matrix:\n", gram)
print("symmetric:", bool(np.array_equal(gram, gram.T)))
eigvals = np.linalg.eigvalsh(gram)
print("eigenvalues all >= -1e-12:", bool(eigvals.min() >= -1e-12))

# rectangular blocks for pool-vs-archive scoring
cross = cross_kernel_matrix(pool, pool[:2], "minmax", amplitude=1.0)
print("\ncross block shape:", cross.shape)
print(cross)
