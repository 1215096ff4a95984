"""Lower-bound certificates for the n-th minimal quantum error.

Every certified comparison is evaluated in interval arithmetic (mpmath),
with the left side taken at its upper endpoint and the right side at its
lower endpoint, so ``holds`` is conservative. Comparisons between integers
are decided exactly.

Error convention: an algorithm A has error at most eps on F when, for every
input f, P{||S(f) - A(f)|| <= eps} >= 3/4.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath.ctx_iv import MPIntervalContext
from mpmath.ctx_mp import MPContext

from . import serial
from .codes import binomial_sum, greedy_hamming_packing, quarter_distance, MAX_EXHAUSTIVE_N
from .entropy import Packing
from .lpspace import INF, LpSpace, PointSet, condition_i_check, hypercube_system, parse_exponent, radius_bounds, format_exponent

CERTIFICATE_VERSION = "1.0"
DEFAULT_PRECISION = 128
SUCCESS_PROBABILITY = 0.75
EMBEDDING = "J_{inf,1}^N : B(L_inf^N) -> L_1^N"


def _exact(raw) -> mpmath.mpf:
    return mpmath.mp.make_mpf(raw)


def _iv(prec: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def _upper(x) -> mpmath.mpf:
    return _exact(x._mpi_[1])


def _lower(x) -> mpmath.mpf:
    return _exact(x._mpi_[0])


def _float_up(x: mpmath.mpf) -> float:
    f = float(x)
    return math.nextafter(f, math.inf) if mpmath.mpf(f) < x else f


def _float_down(x: mpmath.mpf) -> float:
    f = float(x)
    return math.nextafter(f, -math.inf) if mpmath.mpf(f) > x else f


def _log2_iv(ctx, x):
    return ctx.log(ctx.mpf(x)) / ctx.log(2) if not hasattr(x, "_mpi_") else ctx.log(x) / ctx.log(2)


# ---------------------------------------------------------------- records


@dataclass(frozen=True)
class Inequality:
    """One checked comparison lhs (<= or <) rhs, both sides as base-2 logarithms.

    Boolean premises carry no sides.
    """

    name: str
    holds: bool
    relation: str = "<="
    lhs_log2: float | None = None
    rhs_log2: float | None = None
    lhs_hex: str | None = None
    rhs_hex: str | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "lhs_log2": self.lhs_log2,
            "rhs_log2": self.rhs_log2,
            "lhs_hex": self.lhs_hex,
            "rhs_hex": self.rhs_hex,
            "holds": self.holds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Inequality":
        return cls(
            d["name"], d["holds"], d["relation"], d["lhs_log2"], d["rhs_log2"],
            d.get("lhs_hex"), d.get("rhs_hex"),
        )


def _compare(name: str, lhs, rhs, strict: bool) -> Inequality:
    """Interval comparison; lhs and rhs are intervals of base-2 logs."""
    hi, lo = _upper(lhs), _lower(rhs)
    holds = bool(hi < lo) if strict else bool(hi <= lo)
    return Inequality(
        name, holds, "<" if strict else "<=",
        _float_up(hi), _float_down(lo), serial.hexfloat(hi), serial.hexfloat(lo),
    )


def _compare_exact(name: str, lhs, rhs, strict: bool) -> Inequality:
    """Exact comparison of nonnegative rationals, with log2 values for display."""
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    holds = lhs < rhs if strict else lhs <= rhs

    def lg(x: Fraction):
        if x == 0:
            return None, None
        with mpmath.workprec(DEFAULT_PRECISION):
            v = mpmath.log(mpmath.mpf(x.numerator)) / mpmath.log(2) - mpmath.log(
                mpmath.mpf(x.denominator)
            ) / mpmath.log(2)
        return float(v), serial.hexfloat(v)

    (lf, lh), (rf, rh) = lg(lhs), lg(rhs)
    return Inequality(name, bool(holds), "<" if strict else "<=", lf, rf, lh, rh)


def _premise(name: str, holds: bool) -> Inequality:
    return Inequality(name, bool(holds), "premise")


def _fraction_str(x: Fraction | None) -> str | None:
    if x is None:
        return None
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Certificate:
    statement: str
    params: dict
    mode: str
    inequalities: tuple[Inequality, ...]
    bound: float | None = None
    bound_exact: str | None = None
    bound_upper: float | None = None
    constants: dict | None = None
    witness_ref: dict | None = None
    notes: tuple[str, ...] = ()
    version: str = CERTIFICATE_VERSION

    def __post_init__(self):
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        object.__setattr__(self, "notes", tuple(self.notes))
        if self.bound is not None and not self.holds:
            raise ValueError("a bound may only be reported when every inequality holds")

    @property
    def holds(self) -> bool:
        return all(i.holds for i in self.inequalities)

    @property
    def certified(self) -> bool:
        return self.bound is not None

    def failed(self) -> list[str]:
        return [i.name for i in self.inequalities if not i.holds]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "statement": self.statement,
            "params": self.params,
            "mode": self.mode,
            "constants": self.constants,
            "inequalities": [i.to_dict() for i in self.inequalities],
            "holds": self.holds,
            "bound": self.bound,
            "bound_exact": self.bound_exact,
            "bound_hex": serial.hexfloat(self.bound),
            "bound_upper": self.bound_upper,
            "witness_ref": self.witness_ref,
            "notes": list(self.notes),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return serial.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        return cls(
            statement=d["statement"],
            params=d["params"],
            mode=d["mode"],
            inequalities=tuple(Inequality.from_dict(x) for x in d["inequalities"]),
            bound=d.get("bound"),
            bound_exact=d.get("bound_exact"),
            bound_upper=d.get("bound_upper"),
            constants=d.get("constants"),
            witness_ref=d.get("witness_ref"),
            notes=tuple(d.get("notes", ())),
            version=d.get("version", CERTIFICATE_VERSION),
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------- the basic lemma


def lemma1_condition(k_plus_1: int, dim_p: int) -> bool:
    """k+1 > log2(5) * dim_p, decided exactly as 2^(k+1) > 5^dim_p."""
    return 2**k_plus_1 > 5**dim_p


def lemma1_bound(dim_p: int, packing: Packing) -> float | None:
    """Certified lower bound on the error of any algorithm whose probability span has dimension dim_p.

    ``packing`` lives in S(F). Returns its half-separation when the packing is
    large enough for the dimension, otherwise None.
    """
    if dim_p < 1:
        raise ValueError(f"dim_p must be >= 1, got {dim_p}")
    if len(packing) < 2:
        raise ValueError("a packing needs at least two points")
    if packing.pointset is not None:
        if not packing.is_valid():
            raise ValueError("packing separation does not hold on its point set")
    elif len(set(packing.indices)) != len(packing.indices) or not packing.half_separation >= 0:
        raise ValueError("invalid packing")
    if lemma1_condition(len(packing), dim_p):
        return packing.half_separation
    return None


def zero_query_bounds(W: PointSet) -> tuple[float, float]:
    """Bracket of e_0 for a problem whose solution set is W: (diam/2, radius upper bound)."""
    return radius_bounds(W)


def zero_query_certificate(W: PointSet, statement: str = "custom point set") -> Certificate:
    lower, upper = zero_query_bounds(W)
    return Certificate(
        statement=statement,
        params={"n": 0, "size": len(W), "N": W.space.dim, "p": format_exponent(W.space.exponent)},
        mode="zero-query",
        inequalities=(_compare_exact("half_diameter_le_radius", Fraction(lower), Fraction(upper), False),),
        bound=lower,
        bound_upper=upper,
    )


def algorithm_error(probs: np.ndarray, outputs: PointSet, targets: PointSet) -> float:
    """Error of an algorithm with the 3/4-success convention.

    ``probs[f, o]`` is the probability of outcome o on input f, outcome o
    outputs ``outputs[o]`` and the exact answer on f is ``targets[f]``.
    """
    probs = np.asarray(probs, dtype=float)
    worst = 0.0
    for f, row in enumerate(probs):
        dist = outputs.distances_from(targets[f])
        order = np.argsort(dist, kind="stable")
        cum = np.cumsum(row[order])
        j = int(np.searchsorted(cum, SUCCESS_PROBABILITY, side="left"))
        worst = max(worst, float(dist[order[min(j, len(order) - 1)]]))
    return worst


# ---------------------------------------------------------------- polynomial-method threshold


def _threshold_iv(ctx, L: int, n: int):
    """Interval for log2(log2(5) * (eL/2n)^(2n))."""
    loglog5 = _log2_iv(ctx, ctx.log(5) / ctx.log(2))
    if n == 0:
        return loglog5
    log2e = 1 / ctx.log(2)
    return loglog5 + 2 * n * (log2e + _log2_iv(ctx, L) - _log2_iv(ctx, 2 * n))


def prop1_threshold_log2(L: int, n: int, precision_bits: int = DEFAULT_PRECISION) -> float:
    """log2(log2 5) + 2n (log2 e + log2 L - log2 2n), rounded upward.

    n = 0 gives log2(log2 5): the polynomial factor is then 1.
    """
    if n < 0 or 2 * n > L:
        raise ValueError(f"need 0 <= 2n <= L, got n={n}, L={L}")
    return _float_up(_upper(_threshold_iv(_iv(precision_bits), L, n)))


def prop1_certify(
    L: int,
    n: int,
    packing: Packing,
    system_check: bool,
    precision_bits: int = DEFAULT_PRECISION,
    bound_exact: Fraction | None = None,
    statement: str = "custom system",
) -> Certificate:
    """Certify e_n >= packing.half_separation for a packing of S(F ∩ system).

    The packing must have k+1 > log2(5) (eL/2n)^(2n) points, 2n <= L, and
    the system must satisfy the one-bit dependency condition. n = 0 falls
    back to the zero-query bracket of the packing's point set.
    """
    if n == 0:
        if packing.pointset is None:
            raise ValueError("n = 0 needs the packing's point set for the zero-query bracket")
        return zero_query_certificate(packing.pointset, statement)
    if n < 0 or L < 1:
        raise ValueError(f"need L >= 1 and n >= 0, got L={L}, n={n}")
    ctx = _iv(precision_bits)
    ineqs = [
        _compare_exact("query_budget", 2 * n, L, strict=False),
        _premise("condition_i", system_check),
    ]
    if packing.pointset is not None:
        ineqs.append(_premise("packing_separation", packing.is_valid()))
    k1 = len(packing)
    if 2 * n <= L:
        ineqs.append(_compare(
            "packing_threshold", _threshold_iv(ctx, L, n), _log2_iv(ctx, k1), strict=True
        ))
    ok = all(i.holds for i in ineqs)
    return Certificate(
        statement=statement,
        params={"L": L, "n": n, "k": k1 - 1},
        mode="witness",
        inequalities=tuple(ineqs),
        bound=packing.half_separation if ok else None,
        bound_exact=_fraction_str(bound_exact) if ok else None,
        witness_ref=packing.to_dict(),
    )


# ---------------------------------------------------------------- constants


@dataclass(frozen=True)
class Prop2Constants:
    c1: mpmath.mpf
    c2: mpmath.mpf
    c: mpmath.mpf
    precision: int
    tolerance: mpmath.mpf
    c_terms: tuple = field(default=())

    def floats(self) -> tuple[float, float, float]:
        return float(self.c1), float(self.c2), float(self.c)

    def to_dict(self) -> dict:
        digits = int(self.precision * math.log10(2)) - 2
        d = {"precision_bits": self.precision}
        for name in ("c1", "c2", "c"):
            v = getattr(self, name)
            d[name] = float(v)
            d[f"{name}_decimal"] = mpmath.nstr(v, digits, strip_zeros=False)
            d[f"{name}_hex"] = serial.hexfloat(v)
        d["c_terms"] = [float(t) for t in self.c_terms]
        d["c_terms_hex"] = [serial.hexfloat(t) for t in self.c_terms]
        d["c2_bisection_tolerance_hex"] = serial.hexfloat(self.tolerance)
        return d


def entropy_slope(x, ctx=None):
    """x (log2 e + log2(1/x)); increasing on (0, 1] and tending to 0 at 0."""
    ctx = ctx or mpmath.mp
    return x * (1 - ctx.log(x)) / ctx.log(2)


def constants_prop2(precision_bits: int = DEFAULT_PRECISION) -> Prop2Constants:
    """c1 = log2(4/e)/4, the largest bisection point c2 with slope(c2) < c1/2, and c.

    c = min(c1 / (2 log2 log2 5), c2 / 2, 1/2). c2 and c are exact binary
    numbers; the strict inequality at c2 and the first term of c are checked
    with interval arithmetic.
    """
    if precision_bits < 64:
        raise ValueError("precision_bits must be >= 64")
    mp = MPContext()
    mp.prec = precision_bits
    ctx = _iv(precision_bits)
    c1 = (2 - 1 / mp.log(2)) / 4
    c1_iv = (2 - 1 / ctx.log(2)) / 4
    target = c1 / 2

    tol = mp.ldexp(1, -(precision_bits - 10))
    lo, hi = mp.mpf(0), mp.mpf(1)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if entropy_slope(mid, mp) < target:
            lo = mid
        else:
            hi = mid
    c2 = hi - 2 * tol
    if not _upper(entropy_slope(ctx.mpf(c2), ctx)) < _lower(c1_iv / 2):
        raise ArithmeticError("c2 margin is too small at this precision")

    first = _lower(c1_iv / (2 * _log2_iv(ctx, ctx.log(5) / ctx.log(2))))
    terms = (first, c2 / 2, mp.mpf(0.5))
    c = min(terms)
    return Prop2Constants(
        _exact(c1._mpf_), _exact(c2._mpf_), _exact(mp.mpf(c)._mpf_), precision_bits,
        _exact(tol._mpf_), tuple(_exact(mp.mpf(t)._mpf_) for t in terms),
    )


# ---------------------------------------------------------------- the hypercube bound


def _reduction_note(p: float, q: float) -> list[str]:
    if (p, q) == (INF, 1.0):
        return []
    return [
        f"(p,q)=({format_exponent(p)},{format_exponent(q)}) reduced to (inf,1): "
        "B(L_inf^N) is contained in B(L_p^N) and ||.||_1 <= ||.||_q, so the (inf,1) bound transfers"
    ]


def prop2_certify(
    N: int,
    n: int,
    mode: str = "volume",
    p=INF,
    q=1,
    precision_bits: int = DEFAULT_PRECISION,
    constants: Prop2Constants | None = None,
) -> Certificate:
    """Certify e_n(J_{p,q}^N, B(L_p^N)) >= 1/8 for n <= cN (1 for n = 0).

    ``mode='volume'`` verifies the chain of logarithmic inequalities and relies
    on the volume bound k+1 >= 2^(c1 N) for a maximal N/4-packing of the cube.
    ``mode='witness'`` (N <= 24) builds that packing and certifies with its
    actual size.
    """
    if N < 1 or n < 0:
        raise ValueError(f"need N >= 1 and n >= 0, got N={N}, n={n}")
    if mode not in ("volume", "witness"):
        raise ValueError(f"unknown mode {mode!r}")
    p, q = parse_exponent(p), parse_exponent(q)
    notes = _reduction_note(p, q)
    params = {"N": N, "n": n, "p": format_exponent(p), "q": format_exponent(q)}

    if n == 0:
        # J(B(L_inf^N)) has diameter 2 (antipodal +-1) and is covered from 0 with radius 1
        return Certificate(
            statement=EMBEDDING,
            params=params,
            mode="zero-query",
            inequalities=(_compare_exact("half_diameter_le_radius", 1, 1, False),),
            bound=1.0,
            bound_exact="1",
            bound_upper=1.0,
            notes=tuple(notes + ["e_0 equals the norm of the embedding, which is 1"]),
        )

    consts = constants or constants_prop2(precision_bits)
    const_dict = consts.to_dict()
    if mode == "witness":
        return _prop2_witness(N, n, params, notes, precision_bits, const_dict)

    ctx = _iv(precision_bits)
    c1 = (2 - 1 / ctx.log(2)) / 4
    loglog5 = _log2_iv(ctx, ctx.log(5) / ctx.log(2))
    log2e = 1 / ctx.log(2)
    ineqs = [
        _compare("n_le_cN", _log2_iv(ctx, n), _log2_iv(ctx, ctx.mpf(consts.c) * N), strict=False),
        _compare_exact("query_budget", 2 * n, N, strict=False),
    ]
    if 2 * n <= N:
        ratio = ctx.mpf(2 * n) / N
        term = ratio * (log2e + _log2_iv(ctx, ctx.mpf(N) / (2 * n)))
        ineqs += [
            _compare("log_factor_bound", _log2_iv(ctx, loglog5 / N), _log2_iv(ctx, c1 / 2), strict=False),
            _compare("entropy_term_bound", _log2_iv(ctx, term), _log2_iv(ctx, c1 / 2), strict=True),
            _compare("log_form_condition", _log2_iv(ctx, loglog5 / N + term), _log2_iv(ctx, c1), strict=True),
            _compare("packing_count_threshold", _threshold_iv(ctx, N, n), c1 * N, strict=True),
        ]
    ok = all(i.holds for i in ineqs)
    notes.append(
        "volume bound: a maximal packing of {0,1}^N at L_1 distance >= 1/4 has k+1 >= 2^(c1 N) "
        "points, each pair at least 1/4 apart, so phi_k >= 1/8"
    )
    return Certificate(
        statement=EMBEDDING,
        params=params,
        mode="volume",
        inequalities=tuple(ineqs),
        bound=0.125 if ok else None,
        bound_exact="1/8" if ok else None,
        constants=const_dict,
        notes=tuple(notes),
    )


def _prop2_witness(N, n, params, notes, precision_bits, const_dict) -> Certificate:
    if N > MAX_EXHAUSTIVE_N:
        raise ValueError(f"witness mode needs N <= {MAX_EXHAUSTIVE_N}, got N={N}")
    d = quarter_distance(N)
    code = greedy_hamming_packing(N, d)
    system_ok = condition_i_check(hypercube_system(N))
    md = code.min_distance
    sep = Fraction(md, 2 * N) if md is not None else None
    packing = Packing(tuple(int(w) for w in code.words), math.inf if sep is None else float(sep))
    ineqs = [
        _compare_exact("packing_size", 2, len(code), strict=False),
    ]
    if md is not None:
        ineqs.append(_compare_exact("separation_quarter", Fraction(1, 4), Fraction(md, N), strict=False))
    ineqs.append(_compare_exact("volume_count", 2**N, len(code) * binomial_sum(N, d - 1), strict=False))
    base = prop1_certify(N, n, packing, system_ok, precision_bits, bound_exact=sep, statement=EMBEDDING)
    ineqs += base.inequalities
    ok = all(i.holds for i in ineqs)
    notes = notes + [
        f"witness: lexicographic maximal code of length {N}, distance >= {d}, {len(code)} words",
        "pointwise lower bound 1/8 follows since every pair is at least 1/4 apart in L_1^N",
    ]
    return Certificate(
        statement=EMBEDDING,
        params={**params, "k": len(code) - 1},
        mode="witness",
        inequalities=tuple(ineqs),
        bound=float(sep) if ok else None,
        bound_exact=_fraction_str(sep) if ok else None,
        constants=const_dict,
        witness_ref=code.to_dict(),
        notes=tuple(notes),
    )


# ---------------------------------------------------------------- Sobolev embeddings


class SmoothnessConditionError(ValueError):
    pass


def _inverse(p: float) -> Fraction:
    return Fraction(0) if p == INF else 1 / Fraction(p)


def sobolev_bound(r: int, d: int, n: int, c: float, p=2, q=2) -> float:
    """c * n^(-r/d), reported only when r/d > max(1/p, 2/p - 2/q).

    The constant c is an input; nothing here derives it.
    """
    if min(r, d, n) < 1:
        raise ValueError("r, d and n must be positive integers")
    if not c > 0:
        raise ValueError("c must be positive")
    p, q = parse_exponent(p), parse_exponent(q)
    smooth = Fraction(r, d)
    need = max(_inverse(p), 2 * _inverse(p) - 2 * _inverse(q))
    if not smooth > need:
        raise SmoothnessConditionError(
            f"refusing to report: r/d = {smooth} does not exceed max(1/p, 2/p - 2/q) = {need}"
        )
    return c * n ** (-r / d)
