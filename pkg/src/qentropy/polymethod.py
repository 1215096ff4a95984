"""Statevector simulation of small quantum query algorithms and multilinear interpolation.

Register layout, most significant first: index (m qubits), answer (1 qubit),
work (w qubits). A query maps |i>|b>|w> to |i>|b XOR u_{i+1}>|w> for
i < L and acts as the identity for larger i. An n-query algorithm is

    U_n Q U_{n-1} Q ... Q U_0 |0>

followed by a computational-basis measurement, whose result is relabelled
through ``outcome_map``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .codes import binomial_sum
from .lpspace import int_to_bits

MAX_L = 10
MAX_QUBITS = 14
UNITARITY_TOL = 1e-10


def index_qubits(L: int) -> int:
    return math.ceil(math.log2(max(L, 2)))


@dataclass(frozen=True, eq=False)
class QueryAlgorithm:
    L: int
    n_queries: int
    unitaries: tuple[np.ndarray, ...] = field(repr=False)
    outcome_map: np.ndarray = field(repr=False)
    work_qubits: int = 0

    def __post_init__(self):
        if not 1 <= self.L <= MAX_L:
            raise ValueError(f"L must be in 1..{MAX_L}, got {self.L}")
        if self.n_queries < 0:
            raise ValueError("n_queries must be >= 0")
        if self.n_qubits > MAX_QUBITS:
            raise ValueError(f"{self.n_qubits} qubits exceed the cap of {MAX_QUBITS}")
        us = tuple(np.asarray(u, dtype=complex) for u in self.unitaries)
        if len(us) != self.n_queries + 1:
            raise ValueError(f"need {self.n_queries + 1} unitaries, got {len(us)}")
        eye = np.eye(self.dim)
        for t, u in enumerate(us):
            if u.shape != (self.dim, self.dim):
                raise ValueError(f"unitary {t} has shape {u.shape}, expected {(self.dim,) * 2}")
            if np.abs(u.conj().T @ u - eye).max() > UNITARITY_TOL:
                raise ValueError(f"matrix {t} is not unitary")
        object.__setattr__(self, "unitaries", us)
        om = np.asarray(self.outcome_map, dtype=np.int64)
        if om.shape != (self.dim,) or om.min() < 0:
            raise ValueError("outcome_map must assign a label >= 0 to every basis state")
        object.__setattr__(self, "outcome_map", om)

    @property
    def index_qubits(self) -> int:
        return index_qubits(self.L)

    @property
    def n_qubits(self) -> int:
        return self.index_qubits + 1 + self.work_qubits

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def n_outcomes(self) -> int:
        return int(self.outcome_map.max()) + 1


def _check_bits(u, L: int) -> np.ndarray:
    if isinstance(u, (int, np.integer)):
        if not 0 <= u < 2**L:
            raise ValueError(f"input {u} out of range for L={L}")
        return np.array(int_to_bits(int(u), L), dtype=np.int8)
    bits = np.asarray(u, dtype=np.int8)
    if bits.shape != (L,) or np.any((bits != 0) & (bits != 1)):
        raise ValueError(f"input must be a bit vector of length {L}")
    return bits


def apply_query(state: np.ndarray, bits: np.ndarray, work_qubits: int) -> np.ndarray:
    """The bit oracle |i>|b>|w> -> |i>|b XOR u_i>|w>."""
    n_index = state.size // (2 << work_qubits)
    s = state.reshape(n_index, 2, 2**work_qubits)
    flip = np.zeros(n_index, dtype=bool)
    flip[: bits.size] = bits.astype(bool)
    out = s.copy()
    out[flip] = s[flip][:, ::-1, :]
    return out.reshape(-1)


def simulate(A: QueryAlgorithm, u) -> np.ndarray:
    """Outcome distribution of A on input u (bit vector or integer index)."""
    bits = _check_bits(u, A.L)
    state = np.zeros(A.dim, dtype=complex)
    state[0] = 1.0
    state = A.unitaries[0] @ state
    for U in A.unitaries[1:]:
        state = U @ apply_query(state, bits, A.work_qubits)
    probs = np.abs(state) ** 2
    return np.bincount(A.outcome_map, weights=probs, minlength=A.n_outcomes)


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    """Rows are inputs u (integer order, u_1 most significant), columns are outcomes."""

    L: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 2 or p.shape[0] != 2**self.L:
            raise ValueError(f"table needs 2^L = {2**self.L} rows, got shape {p.shape}")
        if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
            raise ValueError("probabilities out of [0, 1]")
        if np.abs(p.sum(axis=1) - 1).max() > 1e-10:
            raise ValueError("rows of a probability table must sum to 1")
        p = np.clip(p, 0.0, 1.0)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def n_outcomes(self) -> int:
        return self.probs.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, ProbabilityTable)
            and self.L == other.L
            and np.array_equal(self.probs, other.probs)
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u"] + [f"o{j}" for j in range(self.n_outcomes)])
        for ui, row in enumerate(self.probs):
            bits = "".join(str(b) for b in int_to_bits(ui, self.L))
            w.writerow([bits] + [repr(float(x)) for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ProbabilityTable":
        rows = list(csv.reader(io.StringIO(text)))
        body = [r for r in rows[1:] if r]
        L = len(body[0][0])
        probs = np.zeros((2**L, len(rows[0]) - 1))
        seen = set()
        for r in body:
            ui = int(r[0], 2)
            seen.add(ui)
            probs[ui] = [float(x) for x in r[1:]]
        if len(seen) != 2**L:
            raise ValueError("table CSV does not cover every input")
        return cls(L, probs)


def build_table(A: QueryAlgorithm) -> ProbabilityTable:
    return ProbabilityTable(A.L, np.stack([simulate(A, u) for u in range(2**A.L)]))


# ---------------------------------------------------------------- multilinear polynomials


@dataclass(frozen=True, eq=False)
class MultilinearPoly:
    """sum_S a_S prod_{j in S} u_j, stored as an array indexed by the subset mask.

    Mask bit (L - j) stands for variable u_j, matching the integer encoding of inputs.
    """

    L: int
    coeff_array: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeff_array, dtype=float)
        if c.shape != (2**self.L,):
            raise ValueError(f"need 2^L = {2**self.L} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeff_array", c)

    @property
    def coeffs(self) -> dict[frozenset[int], float]:
        """Nonzero coefficients keyed by 1-based variable subsets."""
        out = {}
        for mask in np.flatnonzero(self.coeff_array):
            S = frozenset(j for j in range(1, self.L + 1) if mask >> (self.L - j) & 1)
            out[S] = float(self.coeff_array[mask])
        return out

    def coefficient(self, S) -> float:
        mask = 0
        for j in S:
            mask |= 1 << (self.L - j)
        return float(self.coeff_array[mask])

    def degree(self, tol: float = 0.0) -> int:
        """max |S| over |a_S| > tol; 0 for the zero polynomial."""
        sizes = np.bitwise_count(np.arange(2**self.L, dtype=np.uint64))
        big = np.abs(self.coeff_array) > tol
        return int(sizes[big].max()) if big.any() else 0

    def evaluate(self, u) -> float:
        bits = _check_bits(u, self.L)
        ui = 0
        for b in bits:
            ui = (ui << 1) | int(b)
        # monomial S is 1 at u exactly when S is a subset of u's support
        masks = np.arange(2**self.L)
        return float(self.coeff_array[(masks & ui) == masks].sum())

    def evaluate_all(self) -> np.ndarray:
        """Values at every u in integer order (zeta transform)."""
        v = self.coeff_array.copy()
        for b in range(self.L):
            step = 1 << b
            v = v.reshape(-1, 2, step)
            v[:, 1, :] += v[:, 0, :]
            v = v.reshape(-1)
        return v


def interpolate_multilinear(values, L: int | None = None) -> MultilinearPoly:
    """The unique multilinear polynomial taking ``values`` on {0,1}^L.

    ``values`` is either an array of length 2^L in integer order or a dict
    from bit tuples (or integers) to reals. Coefficients come from the
    Mobius transform a_S = sum_{T subset S} (-1)^{|S - T|} v(1_T).
    """
    if isinstance(values, dict):
        if L is None:
            key = next(iter(values))
            L = len(key) if isinstance(key, tuple) else None
        if L is None:
            raise ValueError("L is required for integer-keyed values")
        v = np.full(2**L, np.nan)
        for key, val in values.items():
            ui = key if isinstance(key, (int, np.integer)) else int("".join(map(str, key)) or "0", 2)
            v[ui] = val
    else:
        v = np.array(values, dtype=float)
        L_arr = int(round(math.log2(v.size))) if v.size else -1
        if v.ndim != 1 or 2**L_arr != v.size:
            raise ValueError("values must have length 2^L")
        if L is not None and L != L_arr:
            raise ValueError(f"got {v.size} values for L={L}")
        L = L_arr
    if np.isnan(v).any():
        raise ValueError(f"values missing for {int(np.isnan(v).sum())} grid points")
    for b in range(L):
        step = 1 << b
        v = v.reshape(-1, 2, step)
        v[:, 1, :] -= v[:, 0, :]
        v = v.reshape(-1)
    return MultilinearPoly(L, v)


@dataclass(frozen=True)
class DegreeReport:
    passed: bool
    bound: int
    degrees: tuple[int, ...]
    max_violation: float

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "bound": self.bound,
            "degrees": list(self.degrees),
            "max_violation": self.max_violation,
        }


def check_degree(table: ProbabilityTable, n_queries: int, tol: float = 1e-8) -> DegreeReport:
    """Test that every outcome column is a multilinear polynomial of degree <= 2 n_queries."""
    bound = 2 * n_queries
    sizes = np.bitwise_count(np.arange(2**table.L, dtype=np.uint64))
    degrees, worst = [], 0.0
    for col in table.probs.T:
        poly = interpolate_multilinear(col)
        high = np.abs(poly.coeff_array[sizes > bound])
        worst = max(worst, float(high.max()) if high.size else 0.0)
        degrees.append(poly.degree(tol))
    return DegreeReport(worst <= tol, bound, tuple(degrees), worst)


def verify_degree_bound(A: QueryAlgorithm, tol: float = 1e-8) -> DegreeReport:
    return check_degree(build_table(A), A.n_queries, tol)


def span_dimension(table: ProbabilityTable, tol: float = 1e-7) -> int:
    """Numerical rank of the probability table.

    Every p_C is a sum of single-outcome columns, so this is the dimension of
    their linear span. Rank is read off a column-pivoted QR: diagonal entries
    of R above tol times the largest one.
    """
    P = table.probs
    if not P.size:
        return 0
    R = scipy.linalg.qr(P, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0:
        return 0
    return int((diag > tol * diag[0]).sum())


def span_bound(L: int, n_queries: int) -> int:
    """Dimension of multilinear polynomials of degree <= 2n in L variables."""
    return binomial_sum(L, min(2 * n_queries, L))


# ---------------------------------------------------------------- constructors


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary: QR of a complex Gaussian matrix with the phases of R's diagonal removed."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_algorithm(
    L: int,
    n_queries: int,
    seed: int,
    work_qubits: int = 0,
    outcome_coarsening: int | None = None,
) -> QueryAlgorithm:
    """Random n-query algorithm; outcomes are basis states, or basis index mod ``outcome_coarsening``."""
    n_qubits = index_qubits(L) + 1 + work_qubits
    if n_qubits > MAX_QUBITS:
        raise ValueError(f"{n_qubits} qubits exceed the cap of {MAX_QUBITS}")
    rng = np.random.default_rng(seed)
    dim = 2**n_qubits
    us = tuple(random_unitary(dim, rng) for _ in range(n_queries + 1))
    labels = np.arange(dim)
    if outcome_coarsening is not None:
        if outcome_coarsening < 1:
            raise ValueError("outcome_coarsening must be >= 1")
        labels = labels % outcome_coarsening
    return QueryAlgorithm(L, n_queries, us, labels, work_qubits)


def deutsch_algorithm() -> QueryAlgorithm:
    """One query on L = 2; outcome 1 exactly when u_1 != u_2."""
    H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    X = np.array([[0, 1], [1, 0]])
    I = np.eye(2)
    # index to |+>, answer to |->
    U0 = np.kron(H, H @ X)
    U1 = np.kron(H, I)
    # outcome = value of the index qubit
    labels = np.array([0, 0, 1, 1])
    return QueryAlgorithm(2, 1, (U0, U1), labels)


def identity_algorithm(L: int = 1, n_queries: int = 0) -> QueryAlgorithm:
    dim = 2 ** (index_qubits(L) + 1)
    return QueryAlgorithm(L, n_queries, tuple(np.eye(dim) for _ in range(n_queries + 1)), np.arange(dim))
