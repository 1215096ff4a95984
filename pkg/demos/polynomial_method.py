"""
Outcome probabilities of query algorithms are low-degree polynomials
=====================================================================

Simulate random algorithms with n queries on L input bits and look at the
multilinear expansion of each outcome probability.
"""
from qentropy.codes import binomial_sum
from qentropy.polymethod import build_table, check_degree, deutsch_algorithm, interpolate_multilinear, random_algorithm, span_dimension

# one query decides u1 xor u2 with certainty
table = build_table(deutsch_algorithm())
print("Deutsch, P(outcome 1):", table.probs[:, 1].round(12))
poly = interpolate_multilinear(table.probs[:, 1])
print("expansion:", {tuple(sorted(S)): round(a, 12) for S, a in poly.coeffs.items() if abs(a) > 1e-12})

print("\n L  n  max degree  span dim  bound")
for L, n in [(4, 0), (4, 1), (5, 1), (6, 1), (6, 2)]:
    A = random_algorithm(L, n, seed=L * 10 + n)
    table = build_table(A)
    rep = check_degree(table, n, 1e-8)
    print(f"{L:2d} {n:2d}  {max(rep.degrees):10d}  {span_dimension(table):8d}  {binomial_sum(L, min(2 * n, L)):5d}")
