"""Inner entropy numbers (max-min packings) and entropy numbers (coverings) of finite point sets.

For a finite W in a normed space,

    phi_k(W) = 1/2 * max over (k+1)-subsets of the min pairwise distance
    eps_k(W) = min over k centers of the covering radius

``inner_entropy_exact`` solves the first problem exactly by searching for a
(k+1)-clique in threshold graphs; everything else is a greedy bound.
Covering centers are restricted to W, which can only enlarge the radius, so
the reported radius is a valid upper bound on eps_k.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import serial
from .lpspace import PointSet

DEFAULT_NODE_BUDGET = 10**7


class ExactSearchInfeasible(RuntimeError):
    """The exact clique search ran out of its node budget."""


@dataclass(frozen=True, eq=False)
class Packing:
    indices: tuple[int, ...]
    half_separation: float
    pointset: PointSet | None = field(default=None, repr=False)
    delta: float | None = None  # set for maximal packings

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))

    @property
    def k(self) -> int:
        return len(self.indices) - 1

    def __len__(self):
        return len(self.indices)

    def __eq__(self, other):
        return (
            isinstance(other, Packing)
            and self.indices == other.indices
            and _same_float(self.half_separation, other.half_separation)
            and _same_float(self.delta, other.delta)
        )

    def min_separation(self) -> float:
        """Recompute the min pairwise distance of the selected points."""
        if self.pointset is None:
            raise ValueError("packing carries no point set to verify against")
        if len(self.indices) < 2:
            return math.inf
        sub = self.pointset.subset(self.indices)
        D = sub.distance_matrix()
        np.fill_diagonal(D, np.inf)
        return float(D.min())

    def is_valid(self, rtol: float = 1e-12) -> bool:
        if len(set(self.indices)) != len(self.indices):
            return False
        if self.pointset is not None and any(
            not 0 <= i < len(self.pointset) for i in self.indices
        ):
            return False
        sep = self.min_separation()
        if math.isinf(self.half_separation):
            return math.isinf(sep)
        return sep >= 2 * self.half_separation * (1 - rtol)

    def to_dict(self) -> dict:
        d = {
            "kind": "packing" if self.delta is None else "maximal_packing",
            "indices": list(self.indices),
            "half_separation": self.half_separation,
        }
        if self.delta is not None:
            d["delta"] = self.delta
        return d

    def to_json(self) -> str:
        return serial.dumps(self.to_dict(), indent=None)

    @classmethod
    def from_dict(cls, d: dict, pointset: PointSet | None = None) -> "Packing":
        hs = d["half_separation"]
        return cls(
            tuple(d["indices"]),
            math.inf if hs is None else float(hs),
            pointset,
            None if d.get("delta") is None else float(d["delta"]),
        )

    @classmethod
    def from_json(cls, text: str, pointset: PointSet | None = None) -> "Packing":
        return cls.from_dict(json.loads(text), pointset)


def _same_float(a, b) -> bool:
    if a is None or b is None:
        return a is b
    return a == b or (math.isinf(a) and math.isinf(b))


@dataclass(frozen=True, eq=False)
class Covering:
    centers: tuple[int, ...]
    radius: float
    pointset: PointSet | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(int(i) for i in self.centers))

    def __eq__(self, other):
        return (
            isinstance(other, Covering)
            and self.centers == other.centers
            and self.radius == other.radius
        )

    def center_points(self) -> np.ndarray:
        return self.pointset.points[list(self.centers)]

    def is_valid(self, rtol: float = 1e-12) -> bool:
        D = self.pointset.distance_matrix()[list(self.centers)]
        return bool(D.min(axis=0).max() <= self.radius * (1 + rtol))

    def to_dict(self) -> dict:
        return {"kind": "covering", "centers": list(self.centers), "radius": self.radius}

    def to_json(self) -> str:
        return serial.dumps(self.to_dict(), indent=None)

    @classmethod
    def from_json(cls, text: str, pointset: PointSet | None = None) -> "Covering":
        d = json.loads(text)
        return cls(tuple(d["centers"]), float(d["radius"]), pointset)


@dataclass(frozen=True)
class EntropyEstimate:
    k: int
    phi_lower: float
    eps_upper: float
    phi_exact: float | None = None

    def to_dict(self) -> dict:
        return {
            "kind": "entropy_estimate",
            "k": self.k,
            "phi_lower": self.phi_lower,
            "phi_exact": self.phi_exact,
            "eps_upper": self.eps_upper,
        }


def _require_size(W: PointSet, k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if len(W) < k + 1:
        raise ValueError(f"need at least k+1={k + 1} points, set has {len(W)}")


def _half_min(D: np.ndarray, idx) -> float:
    idx = list(idx)
    if len(idx) < 2:
        return math.inf
    sub = D[np.ix_(idx, idx)].copy()
    np.fill_diagonal(sub, np.inf)
    return float(sub.min()) / 2


# ---------------------------------------------------------------- exact search


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise ExactSearchInfeasible(
                f"exact search infeasible: node budget of {self.limit} exceeded"
            )


def _find_clique(adj: list[int], size: int, budget: _Budget) -> list[int] | None:
    """Return a clique of exactly ``size`` vertices (lowest-index first), or None."""
    n = len(adj)
    # a vertex in a size-clique needs degree >= size - 1; iterate the filter to a fixed point
    alive = (1 << n) - 1
    while True:
        nxt = 0
        for v in range(n):
            if alive >> v & 1 and (adj[v] & alive).bit_count() >= size - 1:
                nxt |= 1 << v
        if nxt == alive:
            break
        alive = nxt
    if alive.bit_count() < size:
        return None
    adj = [a & alive for a in adj]

    def expand(clique: list[int], cand: int) -> list[int] | None:
        budget.tick()
        if len(clique) == size:
            return clique
        need = size - len(clique)
        while cand:
            if cand.bit_count() < need:
                return None
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            # only higher-index neighbours, so each clique is visited once
            found = expand(clique + [v], cand & adj[v])
            if found is not None:
                return found
        return None

    return expand([], alive)


def inner_entropy_exact(
    W: PointSet, k: int, node_budget: int = DEFAULT_NODE_BUDGET
) -> tuple[float, Packing]:
    """Exact phi_k(W) with a witness (k+1)-subset attaining it.

    Binary search over the sorted pairwise distances; at threshold d, a
    (k+1)-clique in the graph {i~j : dist(i,j) >= d} is searched for. The
    greedy packing supplies the starting lower end. Raises
    ExactSearchInfeasible when the node budget is spent.
    """
    _require_size(W, k)
    D = W.distance_matrix()
    n = len(W)
    size = k + 1
    thresholds = np.unique(np.concatenate([[0.0], D[np.triu_indices(n, 1)]]))

    greedy = inner_entropy_greedy(W, k, D=D)
    # the greedy min distance is itself one of the thresholds
    lo = int(np.searchsorted(thresholds, 2 * greedy.half_separation, side="right")) - 1
    best = list(greedy.indices)
    hi = len(thresholds) - 1
    budget = _Budget(node_budget)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        d = thresholds[mid]
        adj = [0] * n
        rows = D >= d
        for i in range(n):
            bits = 0
            for j in np.flatnonzero(rows[i]):
                if j != i:
                    bits |= 1 << int(j)
            adj[i] = bits
        clique = _find_clique(adj, size, budget)
        if clique is None:
            hi = mid - 1
        else:
            lo, best = mid, clique
    best = sorted(best)
    phi = _half_min(D, best)
    return phi, Packing(tuple(best), phi, W)


# ---------------------------------------------------------------- greedy bounds


def _farthest_point(D: np.ndarray, start: int, size: int) -> list[int]:
    chosen = [start]
    mind = D[start].copy()
    mind[start] = -np.inf
    for _ in range(size - 1):
        j = int(np.argmax(mind))  # argmax returns the lowest index on ties
        chosen.append(j)
        mind = np.minimum(mind, D[j])
        mind[chosen] = -np.inf
    return chosen


def _sweep(D: np.ndarray, delta: float, order) -> list[int]:
    """Greedy maximal delta-separated subset, visiting points in ``order``."""
    n = D.shape[0]
    mind = np.full(n, np.inf)
    chosen = []
    for i in order:
        if mind[i] >= delta:
            chosen.append(int(i))
            mind = np.minimum(mind, D[i])
    return chosen


def inner_entropy_greedy(
    W: PointSet,
    k: int,
    seed: int | None = None,
    max_starts: int | None = 64,
    D: np.ndarray | None = None,
) -> Packing:
    """A (k+1)-point packing whose half-separation is a certified lower bound on phi_k.

    Two heuristics, best kept: farthest-point traversal from several start
    points (all of them when |W| <= max_starts), and a threshold sweep that
    takes the first k+1 points of a greedy maximal d-packing for the largest
    pairwise distance d where that sweep still reaches k+1 points. ``seed``
    only permutes which start points are tried first.
    """
    _require_size(W, k)
    if D is None:
        D = W.distance_matrix()
    n = len(W)
    size = k + 1
    starts = np.arange(n)
    if seed is not None:
        starts = np.random.default_rng(seed).permutation(n)
    if max_starts is not None:
        starts = starts[:max_starts]

    best, best_val = None, -1.0
    for s in starts:
        cand = _farthest_point(D, int(s), size)
        val = _half_min(D, cand)
        if val > best_val:
            best, best_val = cand, val

    thresholds = np.unique(D[np.triu_indices(n, 1)])
    lo, hi = 0, len(thresholds) - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        cand = _sweep(D, thresholds[mid], range(n))
        if len(cand) >= size:
            val = _half_min(D, cand[:size])
            if val > best_val:
                best, best_val = cand[:size], val
            lo = mid + 1
        else:
            hi = mid - 1

    best = sorted(best)
    return Packing(tuple(best), _half_min(D, best), W)


def covering_upper(W: PointSet, k: int) -> Covering:
    """Greedy k-center (Gonzalez) with centers in W, then one exchange pass.

    The Gonzalez centers together with the final farthest point are pairwise
    at least the covering radius apart, so radius <= 2 * phi_k(W).
    """
    n = len(W)
    if n == 0:
        raise ValueError("cannot cover an empty set")
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if k >= n:
        return Covering(tuple(range(n)), 0.0, W)
    D = W.distance_matrix()
    centers = [0]
    mind = D[0].copy()
    while len(centers) < k:
        j = int(np.argmax(mind))
        centers.append(j)
        mind = np.minimum(mind, D[j])
    radius = float(mind.max())

    for pos in range(k):
        others = [c for i, c in enumerate(centers) if i != pos]
        base = D[others].min(axis=0) if others else np.full(n, np.inf)
        # radius after replacing centers[pos] by each candidate j
        trial = np.minimum(base[None, :], D).max(axis=1)
        trial[centers] = np.inf
        j = int(np.argmin(trial))
        if trial[j] < radius:
            centers[pos] = j
            radius = float(trial[j])
    return Covering(tuple(centers), radius, W)


def maximal_packing(W: PointSet, delta: float, seed: int | None = None) -> Packing:
    """Greedy maximal subset with pairwise distances >= delta.

    Every point of W ends up within distance < delta of a selected point,
    otherwise the sweep would have selected it. Without a seed the sweep
    starts at index 0; a seed picks a random start and wraps around.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    n = len(W)
    if n == 0:
        raise ValueError("cannot pack an empty set")
    start = 0 if seed is None else int(np.random.default_rng(seed).integers(n))
    D = W.distance_matrix()
    order = [(start + i) % n for i in range(n)]
    chosen = sorted(_sweep(D, delta, order))
    return Packing(tuple(chosen), _half_min(D, chosen), W, delta=float(delta))


def is_delta_covering(W: PointSet, indices, delta: float) -> bool:
    """Every point of W lies strictly within delta of some selected point."""
    D = W.distance_matrix()[list(indices)]
    return bool((D.min(axis=0) < delta).all())


def entropy_estimate(
    W: PointSet, k: int, exact: bool = True, node_budget: int = DEFAULT_NODE_BUDGET
) -> EntropyEstimate:
    """Bracket phi_k and eps_k; the exact value is omitted when the search is infeasible."""
    greedy = inner_entropy_greedy(W, k)
    cover = covering_upper(W, k)
    phi_exact = None
    if exact:
        try:
            phi_exact, _ = inner_entropy_exact(W, k, node_budget=node_budget)
        except ExactSearchInfeasible:
            pass
    return EntropyEstimate(k, greedy.half_separation, cover.radius, phi_exact)
