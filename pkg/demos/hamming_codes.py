"""
Greedy codes at a quarter of the length
=======================================

Lexicographic greedy codes at distance ceil(N/4), compared with the
volume lower bound 2^(c1 N).
"""
import math

from qentropy.codes import C1, binomial_sum, binomial_sum_bound_log2, greedy_hamming_packing, quarter_distance

print("c1 =", C1)
print("\n  N   d   size   2^(c1 N)")
for N in range(4, 21, 2):
    d = quarter_distance(N)
    code = greedy_hamming_packing(N, d)
    print(f"{N:3d} {d:3d} {len(code):6d}   {2 ** (C1 * N):8.2f}")

# the binomial tail against its entropy bound
N, m = 1000, 8
exact = binomial_sum(N, m)
print(f"\nlog2 sum_(i<={m}) C({N},i) = {math.log2(exact):.3f}  bound {binomial_sum_bound_log2(N, m):.3f}")
