"""Binary codes in the Hamming cube and the volume counts behind packing bounds.

Words of {0,1}^N are stored as integers, u_1 being the most significant bit.
Counting is done with exact Python integers; logarithmic bounds are floats.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

LOG2E = math.log2(math.e)
# 1/4 * log2(4/e): the exponent of the guaranteed size of a maximal N/4-packing
C1 = 0.25 * (2.0 - LOG2E)

MAX_EXHAUSTIVE_N = 24


def binomial_sum(N: int, m: int) -> int:
    """sum_{i=0}^{m} C(N, i), exactly."""
    if N < 0 or m < 0:
        raise ValueError(f"binomial_sum needs N, m >= 0, got N={N}, m={m}")
    if m > N:
        raise ValueError(f"binomial_sum needs m <= N, got m={m} > N={N}")
    total, term = 0, 1
    for i in range(m + 1):
        total += term
        term = term * (N - i) // (i + 1)
    return total


def binomial_sum_bound_log2(N: int, m: int) -> float:
    """log2 of (eN/m)^m, an upper bound for log2 binomial_sum(N, m) when 1 <= m <= N.

    m = 0 gives 0 (the sum is 1).
    """
    if m == 0:
        return 0.0
    if not 1 <= m <= N:
        raise ValueError(f"need 1 <= m <= N, got m={m}, N={N}")
    return m * (LOG2E + math.log2(N) - math.log2(m))


def gv_packing_log2_lower(N: int) -> float:
    """c1 * N: log2 lower bound on the size of any maximal packing of {0,1}^N at Hamming distance >= N/4."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return C1 * N


def quarter_distance(N: int) -> int:
    """Smallest integer Hamming distance d with d/N >= 1/4."""
    return -(-N // 4)


def hamming_ball_offsets(N: int, radius: int) -> np.ndarray:
    """All words of weight <= radius, so that u ^ offsets is the ball around u."""
    out = []
    for r in range(radius + 1):
        for pos in itertools.combinations(range(N), r):
            w = 0
            for p in pos:
                w |= 1 << p
            out.append(w)
    return np.array(out, dtype=np.int64)


def popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(a, dtype=np.uint64))


def min_pairwise_distance(words: np.ndarray, chunk: int = 512) -> int | None:
    """Minimum Hamming distance over distinct pairs; None for fewer than two words."""
    w = np.asarray(words, dtype=np.uint64)
    n = w.size
    if n < 2:
        return None
    best = None
    for s in range(0, n, chunk):
        block = w[s : s + chunk]
        d = popcount(block[:, None] ^ w[None, :]).astype(np.int64)
        # mask the diagonal and the lower triangle
        rows = np.arange(s, s + block.size)[:, None]
        d[np.arange(n)[None, :] <= rows] = np.iinfo(np.int64).max
        m = int(d.min())
        best = m if best is None else min(best, m)
    return best


@dataclass(frozen=True, eq=False)
class BinaryCode:
    N: int
    words: np.ndarray
    d: int
    maximal: bool
    min_distance: int | None = None

    def __post_init__(self):
        w = np.array(self.words, dtype=np.int64)
        w.setflags(write=False)
        object.__setattr__(self, "words", w)
        if self.min_distance is None:
            object.__setattr__(self, "min_distance", min_pairwise_distance(w))

    def __len__(self):
        return self.words.size

    def __eq__(self, other):
        return (
            isinstance(other, BinaryCode)
            and (self.N, self.d, self.maximal, self.min_distance)
            == (other.N, other.d, other.maximal, other.min_distance)
            and np.array_equal(self.words, other.words)
        )

    def bit_matrix(self) -> np.ndarray:
        shifts = np.arange(self.N - 1, -1, -1, dtype=np.int64)
        return ((self.words[:, None] >> shifts) & 1).astype(np.int8)

    def to_dict(self) -> dict:
        width = max(1, -(-self.N // 4))
        return {
            "kind": "binary_code",
            "N": self.N,
            "d": self.d,
            "maximal": self.maximal,
            "min_distance": self.min_distance,
            "words": [format(int(x), f"0{width}x") for x in self.words],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "BinaryCode":
        words = np.array([int(x, 16) for x in d["words"]], dtype=np.int64)
        return cls(d["N"], words, d["d"], d["maximal"], d.get("min_distance"))

    @classmethod
    def from_json(cls, text: str) -> "BinaryCode":
        return cls.from_dict(json.loads(text))


def greedy_hamming_packing(
    N: int, d: int, seed: int | None = None, samples: int = 1 << 16
) -> BinaryCode:
    """Greedy code with minimum distance >= d.

    For N <= 24 the whole cube is swept in lexicographic order, adding every
    word not yet within distance < d of the code; the result is maximal and
    independent of ``seed``. For larger N, ``samples`` random words (from
    ``seed``) are swept instead and ``maximal`` is False.
    """
    if not 1 <= d <= N:
        raise ValueError(f"need 1 <= d <= N, got d={d}, N={N}")
    if N <= MAX_EXHAUSTIVE_N:
        return _lexicographic_code(N, d)

    if N > 62:
        raise ValueError("sampled mode supports N <= 62")
    rng = np.random.default_rng(seed)
    cand = rng.integers(0, 1 << N, size=samples, dtype=np.int64)
    chosen: list[int] = []
    arr = np.empty(0, dtype=np.uint64)
    for c in cand:
        if arr.size == 0 or popcount(arr ^ np.uint64(c)).min() >= d:
            chosen.append(int(c))
            arr = np.append(arr, np.uint64(c))
    return BinaryCode(N, np.array(chosen, dtype=np.int64), d, maximal=False)


def _lexicographic_code(N: int, d: int) -> BinaryCode:
    size = 1 << N
    covered = np.zeros(size, dtype=bool)
    ball = hamming_ball_offsets(N, d - 1)
    words = []
    pos, chunk = 0, 1 << 14
    while pos < size:
        block = covered[pos : pos + chunk]
        j = int(np.argmin(block))  # first False, if any
        if block[j]:
            pos += block.size
            continue
        w = pos + j
        words.append(w)
        covered[w ^ ball] = True
        pos = w + 1
    return BinaryCode(N, np.array(words, dtype=np.int64), d, maximal=True)


def is_maximal(code: BinaryCode) -> bool:
    """Brute-force check that every word is within distance < d of the code."""
    covered = np.zeros(1 << code.N, dtype=bool)
    ball = hamming_ball_offsets(code.N, code.d - 1)
    for w in code.words:
        covered[int(w) ^ ball] = True
    return bool(covered.all())
