"""
Certified lower bounds for the cube embedding
=============================================

Volume-mode certificates over a range of N, a witness-mode certificate
backed by an explicit code, and one that is refused.
"""
import json
import math

from qentropy.certify import constants_prop2, prop2_certify

k = constants_prop2()
c1, c2, c = k.floats()
print(f"c1 = {c1:.6f}  c2 = {c2:.6e}  c = {c:.6e}")

for N in (10**3, 10**4, 10**5, 10**6):
    n = max(1, math.floor(c * N))
    cert = prop2_certify(N, n, constants=k)
    print(f"N={N:>8}  n={n:>5}  bound {cert.bound_exact}")

cert = prop2_certify(20, 1, mode="witness")
print("\nwitness N=20, n=1:", cert.bound_exact, "from", cert.params["k"] + 1, "codewords")

cert = prop2_certify(1000, 200)
print("N=1000, n=200 refused, failing checks:", cert.failed())
print(json.dumps(json.loads(cert.to_json())["inequalities"][0], indent=2))
