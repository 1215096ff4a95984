import math
from fractions import Fraction

import numpy as np
import pytest

from qentropy.codes import (
    C1,
    BinaryCode,
    binomial_sum,
    binomial_sum_bound_log2,
    greedy_hamming_packing,
    gv_packing_log2_lower,
    hamming_ball_offsets,
    is_maximal,
    min_pairwise_distance,
    popcount,
    quarter_distance,
)


def count_subsets(N, m):
    """Number of subsets of an N-set with at most m elements, by enumeration."""
    return int((popcount(np.arange(2**N)) <= m).sum())


def pascal_row(N):
    row = [1]
    for _ in range(N):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row


def test_binomial_sum_examples():
    assert binomial_sum(4, 2) == 11
    for L in range(0, 30):
        assert binomial_sum(L, L) == 2**L


def test_binomial_sum_against_enumeration_and_pascal():
    for N in range(0, 17):
        for m in range(N + 1):
            assert binomial_sum(N, m) == count_subsets(N, m)
    assert binomial_sum(30, 7) == sum(pascal_row(30)[:8]) == 2804012
    row = pascal_row(200)
    assert binomial_sum(200, 57) == sum(row[:58])


def test_binomial_sum_errors():
    for args in [(3, 4), (-1, 0), (3, -1)]:
        with pytest.raises(ValueError):
            binomial_sum(*args)


def test_bound_log2_examples():
    assert binomial_sum_bound_log2(4, 2) == pytest.approx(2 * math.log2(2 * math.e), abs=1e-12)
    assert binomial_sum_bound_log2(4, 2) == pytest.approx(4.885, abs=1e-3)
    assert 11 <= 2 ** binomial_sum_bound_log2(4, 2)
    assert 2 ** binomial_sum_bound_log2(4, 2) == pytest.approx(29.56, abs=0.01)
    assert binomial_sum_bound_log2(1000, 8) == pytest.approx(8 * math.log2(125 * math.e), abs=1e-12)
    assert binomial_sum_bound_log2(1000, 8) == pytest.approx(67.27, abs=0.01)
    assert binomial_sum_bound_log2(5, 0) == 0.0


def test_bound_dominates_sum():
    for N in range(1, 65):
        for m in range(1, N + 1):
            assert math.log2(binomial_sum(N, m)) <= binomial_sum_bound_log2(N, m) + 1e-9


def test_quarter_volume_step():
    # sum_{j <= N/4} C(N, j) <= (4e)^(N/4)
    for N in range(1, 65):
        lhs = math.log2(binomial_sum(N, N // 4))
        assert lhs <= N / 4 * math.log2(4 * math.e) + 1e-9


def test_c1_closed_form():
    assert C1 == pytest.approx(0.25 * math.log2(4 / math.e), rel=1e-15)
    assert C1 == pytest.approx(0.13933, abs=5e-6)
    assert gv_packing_log2_lower(8) == pytest.approx(1.1146, abs=1e-4)
    assert 2 ** gv_packing_log2_lower(8) == pytest.approx(2.17, abs=0.01)


def test_quarter_distance():
    assert [quarter_distance(N) for N in range(1, 10)] == [1, 1, 1, 1, 2, 2, 2, 2, 3]
    for N in range(1, 100):
        d = quarter_distance(N)
        assert Fraction(d, N) >= Fraction(1, 4) > Fraction(d - 1, N)


def test_ball_counts():
    for N in range(1, 17):
        for d in range(1, N + 1):
            ball = hamming_ball_offsets(N, d - 1)
            assert len(ball) == len(set(ball.tolist())) == binomial_sum(N, d - 1)
            assert (popcount(ball) < d).all()


def test_greedy_examples():
    full = greedy_hamming_packing(4, 1)
    assert sorted(full.words.tolist()) == list(range(16))

    code = greedy_hamming_packing(8, 2)
    parity = [w for w in range(256) if bin(w).count("1") % 2 == 0]
    assert len(code) == len(parity) == 128
    assert sorted(code.words.tolist()) == parity


def brute_min_distance(words):
    words = [int(w) for w in words]
    return min(bin(a ^ b).count("1") for i, a in enumerate(words) for b in words[i + 1 :])


@pytest.mark.parametrize("N", range(1, 21))
def test_greedy_quarter_packings(N):
    d = quarter_distance(N)
    code = greedy_hamming_packing(N, d)
    assert code.maximal
    assert code.min_distance >= d
    if len(code) <= 600:
        assert code.min_distance == brute_min_distance(code.words)
    assert len(code) >= math.ceil(2 ** gv_packing_log2_lower(N))
    # the volume step: 2^N <= (k+1) * |ball of radius d-1|
    assert 2**N <= len(code) * binomial_sum(N, d - 1)
    if N <= 16:
        assert is_maximal(code)


def test_sampled_mode_is_not_maximal():
    code = greedy_hamming_packing(30, 8, seed=1, samples=2000)
    assert not code.maximal
    assert code.min_distance >= 8
    assert code == greedy_hamming_packing(30, 8, seed=1, samples=2000)


def test_min_distance_helper():
    assert min_pairwise_distance([5]) is None
    assert min_pairwise_distance([0b000, 0b011, 0b101]) == 2
    rng = np.random.default_rng(0)
    words = rng.choice(2**12, 300, replace=False)
    assert min_pairwise_distance(words, chunk=37) == brute_min_distance(words)


def test_json_round_trip():
    code = greedy_hamming_packing(10, 3)
    back = BinaryCode.from_json(code.to_json())
    assert back == code
    assert code.to_dict()["words"][1] == "007"
