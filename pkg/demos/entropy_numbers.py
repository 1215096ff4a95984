"""
Packings and coverings of a finite point set
============================================

Exact inner entropy numbers, their greedy lower bounds, and the covering
radius that sits between phi_k and 2 phi_k.
"""
import numpy as np

from qentropy.entropy import covering_upper, inner_entropy_exact, inner_entropy_greedy, maximal_packing
from qentropy.lpspace import INF, LpSpace, PointSet, all_bit_vectors

# three points on a line, sup norm
interval = PointSet(LpSpace(1, INF), [[0], [0.5], [1]])
phi, packing = inner_entropy_exact(interval, 2)
print("interval, k=2: phi =", phi, "witness", packing.indices)

# a random cloud in the normalized L_2^3 norm
rng = np.random.default_rng(0)
W = PointSet(LpSpace(3, 2), rng.normal(size=(14, 3)))
print("\n k   greedy    exact     cover")
for k in range(1, 6):
    exact, _ = inner_entropy_exact(W, k)
    greedy = inner_entropy_greedy(W, k, seed=0).half_separation
    radius = covering_upper(W, k).radius
    print(f"{k:2d}  {greedy:.5f}  {exact:.5f}  {radius:.5f}")

# a maximal packing is also a covering at the same scale
cube = PointSet(LpSpace(8, 1), all_bit_vectors(8))
mp = maximal_packing(cube, 0.25)
print("\nmaximal 1/4-packing of the 8-cube in L_1:", len(mp), "points")
print(mp.to_json()[:80], "...")
