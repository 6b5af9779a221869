"""Command-line entry point.

Exit codes: 0 success, 1 at least one failed check, 2 usage error, 3 internal
inconsistency (an exact computation hit an impossible state).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from .exact import ExactArithmeticError
from .fields import cy_system
from . import qseries as qs
from . import rc
from . import verify as vf

FORMAT_ENV = "CYMODFORMS_FORMAT"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational number")


def _ns(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated list of integers")
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("dimensions must be positive")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"),
                        default=os.environ.get(FORMAT_ENV, "text") if os.environ.get(FORMAT_ENV) in ("text", "json")
                        else "text",
                        help=f"output format (default from ${FORMAT_ENV}, else text)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--cn", type=_rational, default=None, help="override the constant c_n")

    p = argparse.ArgumentParser(prog="cymodforms", description="Calabi-Yau modular forms toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("chart", parents=[common], help="chart generators, slots and weights")
    s.add_argument("--n", type=_positive, required=True)

    s = sub.add_parser("derive", parents=[common], help="components of a vector field")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--field", default="R", help="R, D, H, F or g:a,b")

    s = sub.add_parser("connection", parents=[common], help="connection matrix of a vector field")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--field", default="R", help="R, D, H, F or g:a,b")

    s = sub.add_parser("bracket", parents=[common], help="Rankin-Cohen bracket of two forms")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--via", choices=("D", "R", "canonical"), default="D")

    s = sub.add_parser("series", parents=[common], help="q-expansion coefficients as JSON")
    s.add_argument("--expr", required=True, choices=("eta", "theta2", "theta3", "t1", "t2", "t3", "t4", "delta"))
    s.add_argument("--n", type=int, choices=(1, 2), default=1)
    s.add_argument("--order", type=_positive, default=10)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=tuple(vf.SUITES))
    s.add_argument("--n", type=_positive, default=None, help="restrict to one dimension")
    s.add_argument("--ns", type=_ns, default=vf.DEFAULT_NS, help="dimensions for symbolic suites")
    s.add_argument("--order", type=_positive, default=50)
    return p


def _system(args):
    return cy_system(args.n, "calibrated" if args.cn is None else args.cn)


def _pick_field(system, spec: str):
    spec = spec.strip()
    if spec in ("R", "D", "H", "F"):
        return getattr(system, spec)
    if spec.startswith("g:"):
        try:
            a, b = (int(x) for x in spec[2:].split(","))
        except ValueError:
            raise UsageError(f"bad field {spec!r}; expected g:a,b")
        from .fields import derive_g_field

        try:
            return derive_g_field(system, a, b)
        except ValueError as exc:
            raise UsageError(str(exc))
    raise UsageError(f"unknown field {spec!r}")


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_chart(args) -> int:
    system = _system(args)
    chart = system.chart
    slots = {f"{i},{j}": name for (i, j), name in sorted(chart.slots.items())}
    dep = {k: v.to_text() for k, v in sorted(chart.dependent.items())}
    payload = {"n": chart.n, "d": chart.d, "generators": list(chart.chart_generators), "slots": slots,
               "weights": system.weights, "dependent": dep,
               "cn": str(chart.cn) if chart.cn is not None else chart.cn_name,
               "extra_generator": chart.extra_generator}
    lines = [f"n={chart.n} d={chart.d} c_n={payload['cn']}",
             "generators: " + " ".join(chart.chart_generators),
             "weights: " + " ".join(f"{k}:{v}" for k, v in system.weights.items())]
    lines += [f"S[{k}] = {v}" for k, v in slots.items()]
    lines += [f"{k} = {v}" for k, v in dep.items()]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_derive(args) -> int:
    system = _system(args)
    v = _pick_field(system, args.field)
    comps = {g: v.component(g).to_text() for g in system.chart.chart_generators}
    text = "\n".join(f"d{g} = {c}" for g, c in comps.items())
    _emit(args, {"n": args.n, "field": args.field, "components": comps}, text)
    return EXIT_OK


def cmd_connection(args) -> int:
    system = _system(args)
    A = system.connection(_pick_field(system, args.field))
    rows = [[A[i, j].to_text() for j in range(A.cols)] for i in range(A.rows)]
    text = "\n".join("[" + ", ".join(r) + "]" for r in rows)
    _emit(args, {"n": args.n, "field": args.field, "matrix": rows}, text)
    return EXIT_OK


def cmd_bracket(args) -> int:
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    algebra = rc.CYModularForms(args.n, "calibrated" if args.cn is None else args.cn)
    try:
        f, g = algebra.parse(args.f), algebra.parse(args.g)
    except (ExactArithmeticError, SyntaxError, ValueError) as exc:
        raise UsageError(f"cannot parse expression: {exc}")
    if args.via == "canonical":
        val = rc.canonical_bracket(f, g, args.k)
    else:
        val = rc.rc_bracket(f, g, args.k, args.via)
    payload = {"n": args.n, "k": args.k, "via": args.via, "value": val.to_text(),
               "weight": val.weight, "two_cy": rc.is_two_cy(val)}
    text = f"value: {payload['value']}\nweight: {payload['weight']}\nin M2: {payload['two_cy']}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_series(args) -> int:
    N = args.order
    if args.expr == "eta":
        s = qs.eta(N)
    elif args.expr == "theta2":
        s = qs.theta2(N)
    elif args.expr == "theta3":
        s = qs.theta3(N)
    else:
        if args.n == 1:
            t1, t2, t3 = qs.solution_n1(N)
            table = {"t1": t1, "t2": t2, "t3": t3, "delta": t3 * (t1 ** 3 - t3)}
        else:
            T1, T2, T3, T4 = qs.solution_n2(N)
            table = {"t1": T1, "t2": T2, "t3": T3, "t4": T4, "delta": T4 * (T1 ** 4 - T4)}
        if args.expr not in table:
            raise UsageError(f"{args.expr} is not defined for n={args.n}")
        s = table[args.expr]
    # the series dump is JSON in either mode
    print(json.dumps(s.to_json(), indent=1))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.n is not None and args.suite != "qseries":
        args.ns = (args.n,)
    if args.suite == "qseries" and args.n not in (None, 1, 2):
        raise UsageError("q-series are available for n = 1, 2")
    rep = vf.SUITES[args.suite](args)
    if args.format == "json":
        print(rep.to_json(include_elapsed=False))
    else:
        print(rep.to_text())
        print(f"elapsed {rep.elapsed:.2f}s")
    return EXIT_OK if rep.ok else EXIT_FAIL


COMMANDS = {"chart": cmd_chart, "derive": cmd_derive, "connection": cmd_connection,
            "bracket": cmd_bracket, "series": cmd_series, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExactArithmeticError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
