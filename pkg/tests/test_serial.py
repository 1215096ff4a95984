import json
import math

import mpmath
import pytest

from qentropy.serial import dumps, from_hexfloat, hexfloat


@pytest.mark.parametrize("x", [0.1, -0.1, 1e-300, -2.5, 3.0, 2.0**-1074, -1e308])
def test_hexfloat_round_trip(x):
    assert float(from_hexfloat(hexfloat(x))) == x


def test_hexfloat_keeps_mpf_precision():
    with mpmath.workprec(200):
        third = mpmath.mpf(1) / 3
        assert from_hexfloat(hexfloat(third)) == third
        assert from_hexfloat(hexfloat(-third)) == -third
    assert hexfloat(0.0) == "0x0p0"
    assert hexfloat(math.inf) is None


def test_dumps_floats():
    s = dumps({"a": 0.1, "b": math.inf, "c": [1, 2.5]}, indent=None)
    assert s == '{"a":0.10000000000000001,"b":null,"c":[1,2.5]}'
    assert json.loads(s)["a"] == 0.1
