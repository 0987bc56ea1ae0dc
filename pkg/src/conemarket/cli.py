"""Command-line surface.

Subcommands: check, measure, price, cone, counterexample.  Exit codes:
0 success / arbitrage-free, 2 arbitrage found (or measure absent), 1 error.
Errors go to stderr as ``{"error": code, "detail": ...}``.  With ``--exact``
rationals are printed losslessly as "p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import counterexample as cx
from .cones import PolyhedralCone, dual_membership, dual_interior_membership, \
    is_nonannihilating, is_pointed, is_total
from .errors import ConeMarketError, ParseError
from .ftap import ftap_equivalence, martingale_measure, price_claim
from .market import parse_market_file


def _ser(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (tuple, list)):
        return [_ser(v) for v in x]
    return x


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _kv_csv(data, prefix=""):
    lines = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            lines.extend(_kv_csv(value, prefix=f"{name}."))
        else:
            lines.append(f"{name},{json.dumps(value) if isinstance(value, list) else value}")
    return lines


def _render(data, fmt):
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        return "\n".join(_kv_csv(data)) + "\n"
    return "\n".join(
        f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}"
        for k, v in data.items()
    ) + "\n"


def _load_claim(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read().strip()
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno, column=exc.colno)
        return [float(x) for x in data]
    toks = text.replace("\n", ",").split(",")
    try:
        return [float(t) for t in toks if t.strip()]
    except ValueError:
        raise ParseError(f"cannot parse claim file {path}")


def _load_cone(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno, column=exc.colno)
    if "generators" not in data:
        raise ParseError("cone JSON needs a 'generators' key")
    return PolyhedralCone.from_json_dict(data)


def _cmd_check(args):
    market = parse_market_file(args.input)
    report = ftap_equivalence(market, args.mode)
    _emit(_render(report.to_json_dict(), args.format), args.out)
    return 0 if report.free else 2


def _cmd_measure(args):
    market = parse_market_file(args.input)
    measure = martingale_measure(market, args.mode)
    if measure is None:
        _emit(_render({"measure": None}, args.format), args.out)
        return 2
    data = {
        "q": _ser(measure.q),
        "density": _ser(measure.density),
        "margin": _ser(measure.margin),
    }
    _emit(_render(data, args.format), args.out)
    return 0


def _cmd_price(args):
    market = parse_market_file(args.input)
    measure = martingale_measure(market, args.mode)
    if measure is None:
        _emit(_render({"price": None, "detail": "no martingale measure"}, args.format),
              args.out)
        return 2
    claim = _load_claim(args.claim)
    if args.mode == "exact":
        claim = [Fraction(x) for x in claim]
    value = price_claim(market, measure, claim)
    _emit(_render({"price": _ser(value)}, args.format), args.out)
    return 0


def _cmd_cone(args):
    K = _load_cone(args.cone)
    pointed = is_pointed(K)
    data = {
        "pointed": pointed.pointed,
        "pointedness_witness": None if pointed.witness is None
        else [float(x) for x in pointed.witness],
    }
    if args.vector:
        y = [float(t) for t in args.vector.split(",")]
        data["dual_membership"] = dual_membership(K, y)
        if pointed.pointed:
            data["dual_interior_membership"] = dual_interior_membership(K, y)
    if args.test:
        test = _load_cone(args.test)
        data["total"] = is_total(test, K, sample_budget=args.budget).to_json_dict()
        data["nonannihilating"] = is_nonannihilating(test, K).to_json_dict()
    _emit(_render(data, args.format), args.out)
    return 0


def _cmd_counterexample(args):
    report = cx.decay_report(args.n, args.mode)
    if args.format == "csv":
        _emit(report.to_csv(), args.out)
    elif args.format == "text":
        lines = [
            f"N={r.N}  margin={r.margin}  analytic={r.analytic}  "
            f"arbitrage_free={r.arbitrage_free}"
            for r in report.rows
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(report.to_json() + "\n", args.out)
    return 0


def _add_common(sub):
    sub.add_argument("--tol", type=float, default=1e-9,
                     help="feasibility/positivity tolerance (informational)")
    sub.add_argument("--exact", dest="mode", action="store_const",
                     const="exact", default="float",
                     help="use exact rational arithmetic")
    sub.add_argument("--out", default=None, help="write the report to a file")
    sub.add_argument("--format", choices=("json", "csv", "text"), default="json")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="conemarket",
        description="Arbitrage-freeness, state-price measures and cone verdicts "
                    "for one-period scenario markets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide arbitrage-freeness of a market file")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("measure", help="construct the max-margin state-price measure")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(fn=_cmd_measure)

    p = sub.add_parser("price", help="price a claim vector under the measure")
    p.add_argument("input")
    p.add_argument("claim")
    _add_common(p)
    p.set_defaults(fn=_cmd_price)

    p = sub.add_parser("cone", help="pointedness/duality/totality verdicts")
    p.add_argument("cone")
    p.add_argument("--test", default=None, help="test cone JSON for totality checks")
    p.add_argument("--vector", default=None, help="comma-separated vector for membership")
    p.add_argument("--budget", type=int, default=10_000,
                   help="sample budget above the exact-dimension cap")
    _add_common(p)
    p.set_defaults(fn=_cmd_cone)

    p = sub.add_parser("counterexample", help="margin decay at finite truncation")
    p.add_argument("--n", type=int, required=True, help="largest truncation level")
    _add_common(p)
    p.set_defaults(fn=_cmd_counterexample)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol <= 0:
        print(json.dumps({"error": "invalid_parameter", "detail": "tolerance must be positive"}),
              file=sys.stderr)
        return 1
    try:
        return args.fn(args)
    except ConeMarketError as exc:
        print(json.dumps({"error": exc.code, "detail": str(exc)}), file=sys.stderr)
        return 1
    except OSError as exc:
        print(json.dumps({"error": "io_error", "detail": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
