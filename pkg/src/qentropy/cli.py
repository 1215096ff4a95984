"""Command-line front end.

Exit codes: 0 success, 1 bad input or parameters, 2 exact search infeasible
(greedy fallback written), 3 certificate written but no bound certified.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import serial
from .certify import (
    DEFAULT_PRECISION,
    constants_prop2,
    prop1_certify,
    prop2_certify,
    zero_query_certificate,
)
from .codes import binomial_sum, binomial_sum_bound_log2, greedy_hamming_packing
from .entropy import (
    DEFAULT_NODE_BUDGET,
    ExactSearchInfeasible,
    Packing,
    covering_upper,
    entropy_estimate,
    inner_entropy_exact,
    inner_entropy_greedy,
    maximal_packing,
)
from .lpspace import FunctionSystem, PointSet, condition_i_check, hypercube_system
from .polymethod import MAX_L, build_table, check_degree, random_algorithm, span_bound, span_dimension

PRECISION_ENV = "QENTROPY_PRECISION_BITS"
MAX_SIM_QUERIES = 4

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_UNCERTIFIED = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1, keeping 2 for infeasible exact searches
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{PRECISION_ENV}={raw!r} is not an integer") from None


def _write(text: str, output: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _read_points(path: str) -> PointSet:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return PointSet.from_csv(text)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


# ---------------------------------------------------------------- commands


def cmd_entropy(args) -> int:
    W = _read_points(args.input)
    code = EXIT_OK
    if args.action == "pack":
        if args.k is None:
            raise InputError("entropy pack needs --k")
        try:
            phi, packing = inner_entropy_exact(W, args.k, node_budget=args.node_budget)
            out = {**packing.to_dict(), "k": args.k, "phi": phi, "exact": True}
        except ExactSearchInfeasible as exc:
            packing = inner_entropy_greedy(W, args.k, seed=args.seed)
            out = {**packing.to_dict(), "k": args.k, "phi_lower": packing.half_separation,
                   "exact": False, "reason": str(exc)}
            code = EXIT_INFEASIBLE
    elif args.action == "greedy":
        packing = inner_entropy_greedy(W, args.k, seed=args.seed)
        out = {**packing.to_dict(), "k": args.k}
    elif args.action == "cover":
        if args.k is None:
            raise InputError("entropy cover needs --k")
        out = {**covering_upper(W, args.k).to_dict(), "k": args.k}
    elif args.action == "estimate":
        out = entropy_estimate(W, args.k, node_budget=args.node_budget).to_dict()
    else:
        if args.delta is None:
            raise InputError("entropy maximal needs --delta")
        out = maximal_packing(W, args.delta, seed=args.seed).to_dict()
    _write(serial.dumps(out), args.output)
    return code


def cmd_codes(args) -> int:
    if args.action == "binomial-sum":
        value = binomial_sum(args.N, args.m)
        out = {
            "N": args.N,
            "m": args.m,
            "value": str(value),
            "log2_value": math.log2(value),
            "log2_bound": binomial_sum_bound_log2(args.N, args.m),
        }
        _write(serial.dumps(out), args.output)
    else:
        code = greedy_hamming_packing(args.N, args.d, seed=args.seed)
        _write(json.dumps(code.to_dict(), indent=2), args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if not 1 <= args.L <= MAX_L:
        raise InputError(f"--L must be in 1..{MAX_L}")
    if not 0 <= args.n <= MAX_SIM_QUERIES:
        raise InputError(f"--n must be in 0..{MAX_SIM_QUERIES}")
    bound = span_bound(args.L, args.n)
    runs, n_pass = [], 0
    for i in range(args.count):
        seed = args.seed * 1_000_003 + i
        try:
            A = random_algorithm(args.L, args.n, seed, args.work_qubits, args.coarsening)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        table = build_table(A)
        rep = check_degree(table, args.n, args.tol)
        rank = span_dimension(table, args.rank_tol)
        ok = rep.passed and rank <= bound
        n_pass += ok
        runs.append({
            "index": i,
            "seed": seed,
            "degree_pass": rep.passed,
            "max_degree": max(rep.degrees),
            "max_violation": rep.max_violation,
            "span_dimension": rank,
            "rank_pass": rank <= bound,
            "pass": ok,
        })
    out = {
        "L": args.L,
        "n": args.n,
        "seed": args.seed,
        "work_qubits": args.work_qubits,
        "outcome_coarsening": args.coarsening,
        "degree_bound": 2 * args.n,
        "span_bound": bound,
        "count": args.count,
        "passed": n_pass,
        "runs": runs,
    }
    _write(serial.dumps(out), args.output)
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.action == "prop2":
        if args.N is None or args.n is None:
            raise InputError("certify prop2 needs --N and --n")
        try:
            cert = prop2_certify(args.N, args.n, args.mode, args.p, args.q, args.precision_bits)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    elif args.action == "prop1":
        if args.points is None or args.packing is None or args.n is None:
            raise InputError("certify prop1 needs --points, --packing and --n")
        W = _read_points(args.points)
        packing = Packing.from_dict(_read_json(args.packing), W)
        if args.system:
            system = FunctionSystem.from_json(json.dumps(_read_json(args.system)))
            L, ok = system.L, condition_i_check(system)
        else:
            if args.L is None:
                raise InputError("certify prop1 needs --system or --L")
            # without a system file the points must be the hypercube system itself
            system = hypercube_system(args.L)
            same = W.points.shape == (2**args.L, args.L) and bool((W.points == system.values()).all())
            L, ok = args.L, same and condition_i_check(system)
        try:
            cert = prop1_certify(L, args.n, packing, ok, args.precision_bits)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        if args.points is None:
            raise InputError("certify zero needs --points")
        cert = zero_query_certificate(_read_points(args.points))
    _write(cert.to_json(), args.output)
    return EXIT_OK if cert.certified else EXIT_UNCERTIFIED


def cmd_constants(args) -> int:
    try:
        consts = constants_prop2(args.precision_bits)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = consts.to_dict()
    out["provenance"] = {
        "c1": "log2(4/e) / 4",
        "c2": "largest bisection point below the crossing of x(log2 e + log2(1/x)) with c1/2, "
              "minus twice the bisection tolerance",
        "c": "min(c1 / (2 log2 log2 5), c2 / 2, 1/2)",
    }
    _write(serial.dumps(out), args.output)
    return EXIT_OK


def _parse_range(spec: str) -> list[int]:
    """'a:b:step' (inclusive) or 'a,b,c'."""
    try:
        if ":" in spec:
            parts = [int(x) for x in spec.split(":")]
            a, b = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            return list(range(a, b + 1, step))
        return [int(x) for x in spec.split(",") if x]
    except ValueError:
        raise InputError(f"bad range {spec!r}") from None


def cmd_report(args) -> int:
    consts = constants_prop2(args.precision_bits)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "n", "mode", "certified", "bound", "failed"])
    for N in _parse_range(args.N_range):
        for n in _parse_range(args.n_range):
            cert = prop2_certify(N, n, args.mode, precision_bits=args.precision_bits, constants=consts)
            w.writerow([N, n, cert.mode, int(cert.certified), cert.bound_exact or "", ";".join(cert.failed())])
    _write(buf.getvalue(), args.output)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--precision-bits", type=int, default=None)

    parser = _Parser(prog="qentropy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", parents=[common], help="packings and coverings of a point set")
    p.add_argument("action", choices=["pack", "greedy", "cover", "maximal", "estimate"])
    p.add_argument("input", help="point set CSV")
    p.add_argument("--k", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("codes", parents=[common], help="binomial sums and greedy Hamming codes")
    p.add_argument("action", choices=["binomial-sum", "packing"])
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--d", type=int, default=1)
    p.set_defaults(func=cmd_codes)

    p = sub.add_parser("simulate", parents=[common], help="degree and rank checks on random query algorithms")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--work-qubits", type=int, default=0)
    p.add_argument("--coarsening", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--rank-tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("certify", parents=[common], help="emit a lower-bound certificate")
    p.add_argument("action", choices=["prop2", "prop1", "zero"])
    p.add_argument("--N", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--mode", choices=["volume", "witness"], default="volume")
    p.add_argument("--p", default="inf")
    p.add_argument("--q", default="1")
    p.add_argument("--points", help="point set CSV")
    p.add_argument("--packing", help="packing JSON (indices into --points)")
    p.add_argument("--system", help="function system JSON")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("constants", parents=[common], help="the constants c1, c2, c")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("report", parents=[common], help="certification grid over N and n as CSV")
    p.add_argument("--N-range", required=True)
    p.add_argument("--n-range", required=True)
    p.add_argument("--mode", choices=["volume", "witness"], default="volume")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.precision_bits is None:
            args.precision_bits = _default_precision()
        return args.func(args)
    except InputError as exc:
        print(f"qentropy: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError) as exc:
        print(f"qentropy: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
