"""Finite-dimensional normalized L_p^N spaces, point sets and bit-indexed function systems.

Points are real vectors of length N. The norm is the *normalized* one,

    ||f|| = (1/N * sum_i |f(i)|^p)^(1/p)        (p < inf)
    ||f|| = max_i |f(i)|                        (p = inf)

so that the all-ones vector has norm 1 for every p.

Binary inputs u in {0,1}^L are indexed by integers with u_1 as the most
significant bit, which makes integer order equal to lexicographic order.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

INF = math.inf


class DimensionError(ValueError):
    pass


def parse_exponent(p) -> float:
    """Accept 1, 2.5, 'inf', 'infinity', math.inf; return a float with inf kept exact."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infinity", "oo", "∞"):
            return INF
        p = float(s)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    return p


def format_exponent(p: float) -> str:
    if p == INF:
        return "inf"
    return repr(int(p)) if float(p).is_integer() else repr(p)


@dataclass(frozen=True)
class LpSpace:
    dim: int
    exponent: float = 1.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "exponent", parse_exponent(self.exponent))

    @property
    def is_max_norm(self) -> bool:
        return self.exponent == INF

    def norm(self, v) -> float:
        return lp_norm(v, self)

    def __str__(self):
        return f"L_{format_exponent(self.exponent)}^{self.dim}"


def _check_len(v: np.ndarray, space: LpSpace) -> None:
    if v.shape[-1] != space.dim:
        raise DimensionError(f"vector of length {v.shape[-1]} in {space} (N={space.dim})")


def lp_norm(v, space: LpSpace) -> float:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-d vector, got shape {v.shape}")
    _check_len(v, space)
    return float(_norms(v[None, :], space.exponent)[0])


def _norms(rows: np.ndarray, p: float) -> np.ndarray:
    """Row-wise normalized p-norms of a 2-d array."""
    a = np.abs(rows)
    n = rows.shape[-1]
    if p == INF:
        return a.max(axis=-1)
    if p == 1:
        return a.sum(axis=-1) / n
    if p == 2:
        return np.sqrt((a * a).sum(axis=-1) / n)
    # rescale by the max entry so large p cannot overflow
    m = a.max(axis=-1)
    safe = np.where(m > 0, m, 1.0)
    s = ((a / safe[..., None]) ** p).sum(axis=-1) / n
    return np.where(m > 0, safe * s ** (1.0 / p), 0.0)


def distance(a, b, space: LpSpace) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return lp_norm(a - b, space)


@dataclass(frozen=True, eq=False)
class PointSet:
    """An ordered finite list of points of an L_p^N space (duplicates allowed)."""

    space: LpSpace
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1 and pts.size == 0:
            pts = pts.reshape(0, self.space.dim)
        if pts.ndim != 2:
            raise DimensionError(f"points must form a 2-d array, got shape {pts.shape}")
        _check_len(pts, self.space)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    def __getitem__(self, i):
        return self.points[i]

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and self.space == other.space
            and np.array_equal(self.points, other.points)
        )

    def distances_from(self, x) -> np.ndarray:
        """Distances from x to every point of the set."""
        x = np.asarray(x, dtype=float)
        _check_len(x, self.space)
        return _norms(self.points - x, self.space.exponent)

    def distance_matrix(self, chunk: int = 256) -> np.ndarray:
        n = len(self)
        out = np.empty((n, n))
        for s in range(0, n, chunk):
            block = self.points[s : s + chunk, None, :] - self.points[None, :, :]
            out[s : s + chunk] = _norms(block, self.space.exponent)
        return out

    def subset(self, indices) -> "PointSet":
        return PointSet(self.space, self.points[list(indices)])

    # -- CSV: header line "p,N", a line with their values, then one point per row
    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "N"])
        w.writerow([format_exponent(self.space.exponent), self.space.dim])
        for row in self.points:
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PointSet":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if len(rows) < 2 or [c.strip() for c in rows[0]] != ["p", "N"]:
            raise ValueError("row 1: expected header 'p,N'")
        try:
            p, n = rows[1]
            space = LpSpace(int(n), parse_exponent(p))
        except ValueError as exc:
            raise ValueError(f"row 2: bad space parameters {rows[1]!r} ({exc})") from None
        pts = []
        for lineno, r in enumerate(rows[2:], start=3):
            if len(r) != space.dim:
                raise ValueError(f"row {lineno}: expected {space.dim} values, got {len(r)}")
            try:
                pts.append([float(c) for c in r])
            except ValueError:
                raise ValueError(f"row {lineno}: non-numeric entry in {r!r}") from None
        return cls(space, np.array(pts, dtype=float).reshape(len(pts), space.dim))

    @classmethod
    def read(cls, path) -> "PointSet":
        return cls.from_csv(Path(path).read_text())


def diameter(W: PointSet) -> float:
    if len(W) == 0:
        raise ValueError("diameter of an empty set")
    return float(W.distance_matrix().max())


def radius_bounds(W: PointSet) -> tuple[float, float]:
    """Interval [diam/2, best in-set center radius] containing the Chebyshev radius of W in L_p^N."""
    if len(W) == 0:
        raise ValueError("radius of an empty set")
    D = W.distance_matrix()
    return float(D.max()) / 2, float(D.max(axis=1).min())


def hamming(u, v) -> int:
    return int(np.count_nonzero(np.asarray(u) != np.asarray(v)))


def int_to_bits(u: int, L: int) -> tuple[int, ...]:
    return tuple((u >> (L - 1 - j)) & 1 for j in range(L))


def bits_to_int(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def all_bit_vectors(L: int) -> np.ndarray:
    """The 2^L x L array of {0,1}^L in lexicographic order (u_1 first)."""
    idx = np.arange(2**L, dtype=np.int64)
    shifts = np.arange(L - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.int8)


@dataclass(frozen=True, eq=False)
class FunctionSystem:
    """A family (f_u), u in {0,1}^L, of functions on D = {1..domain_size}.

    ``ell[t]`` (1-based) names the bit that f_u(t) is supposed to depend on.
    Without an explicit ``table`` the system is f_u(t) = u_{ell(t)}.
    ``table`` has shape (2^L, domain_size), row u indexed as an integer.
    """

    L: int
    domain_size: int
    ell: tuple[int, ...]
    table: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.L < 1 or self.domain_size < 1:
            raise ValueError("L and domain_size must be positive")
        ell = tuple(int(x) for x in self.ell)
        if len(ell) != self.domain_size:
            raise ValueError(f"ell has {len(ell)} entries, domain has {self.domain_size}")
        if any(not 1 <= x <= self.L for x in ell):
            raise ValueError(f"ell entries must lie in 1..{self.L}")
        object.__setattr__(self, "ell", ell)
        if self.table is not None:
            t = np.array(self.table)
            if t.shape != (2**self.L, self.domain_size):
                raise DimensionError(
                    f"table shape {t.shape}, expected {(2**self.L, self.domain_size)}"
                )
            t.setflags(write=False)
            object.__setattr__(self, "table", t)

    def column(self, t: int) -> np.ndarray:
        """Values f_u(t) for all u (t is 0-based)."""
        if self.table is not None:
            return self.table[:, t]
        shift = self.L - self.ell[t]
        return ((np.arange(2**self.L, dtype=np.int64) >> shift) & 1).astype(np.int8)

    def function(self, u) -> np.ndarray:
        ui = u if isinstance(u, (int, np.integer)) else bits_to_int(u)
        if self.table is not None:
            return np.array(self.table[ui])
        bits = int_to_bits(int(ui), self.L)
        return np.array([bits[l - 1] for l in self.ell], dtype=np.int8)

    def values(self) -> np.ndarray:
        if self.table is not None:
            return np.array(self.table)
        return np.stack([self.column(t) for t in range(self.domain_size)], axis=1)

    def image(self, space: LpSpace | None = None) -> PointSet:
        """The functions f_u as points of L_p^{|D|} (default L_1), ordered by u."""
        space = space or LpSpace(self.domain_size, 1)
        return PointSet(space, self.values().astype(float))

    def to_json(self) -> str:
        d = {"L": self.L, "domain_size": self.domain_size, "ell": list(self.ell)}
        if self.table is not None:
            d["table"] = self.table.tolist()
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "FunctionSystem":
        d = json.loads(text)
        return cls(d["L"], d["domain_size"], tuple(d["ell"]), d.get("table"))


def hypercube_system(N: int) -> FunctionSystem:
    """L = N, f_u = u, each coordinate depending on its own bit."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return FunctionSystem(N, N, tuple(range(1, N + 1)))


def condition_i_check(system: FunctionSystem) -> bool:
    """True iff every f_u(t) depends only on the bit u_{ell(t)}."""
    L = system.L
    u = np.arange(2**L, dtype=np.int64)
    for t in range(system.domain_size):
        col = system.column(t)
        bit = ((u >> (L - system.ell[t])) & 1).astype(bool)
        for cls_vals in (col[bit], col[~bit]):
            if cls_vals.size and np.any(cls_vals != cls_vals[0]):
                return False
    return True
