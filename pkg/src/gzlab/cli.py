"""Command-line front end.

Subcommands: bell, cn, eval, asym, falsify, voronin, fe-check.  Every command
honors --precision-bits (default 256, overridable via GZ_PRECISION_BITS),
--format {json,csv,text} and --seed; identical command lines produce
byte-identical output.  JSON payloads validate against the schemas shipped
under gzlab/schemas/.

Exit codes: 0 success, 2 order/series cap, 3 pole, 4 degenerate input,
5 parse error, 6 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import asym, decomp, diffpoly, polyparse, specfun, voronin
from .errors import (
    AllZeroCoefficients,
    DivisionNearZero,
    DomainError,
    ExponentOverflow,
    GzlabError,
    LimitExceeded,
    ParseError,
    PoleError,
    PrecisionUnreachable,
    SectorError,
    ZeroPolynomial,
)
from .hp import ComplexHP, PrecisionConfig, to_decimal

EXIT_OK = 0
EXIT_CAP = 2
EXIT_POLE = 3
EXIT_DEGENERATE = 4
EXIT_PARSE = 5
EXIT_USAGE = 6

ENV_PRECISION = "GZ_PRECISION_BITS"


@dataclass(frozen=True)
class RunConfig:
    """Per-invocation settings shared by every command."""

    precision_bits: int = 256
    output_format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.precision_bits < 64:
            raise DomainError("precision-bits must be >= 64")
        if self.output_format not in ("json", "csv", "text"):
            raise DomainError("format must be json, csv or text")
        if self.seed < 0:
            raise DomainError("seed must be non-negative")

    @property
    def precision(self) -> PrecisionConfig:
        return PrecisionConfig(self.precision_bits)


# ----------------------------------------------------------------------------
# literal / range parsing


def parse_complex_literal(text: str, bits: int) -> ComplexHP:
    """Literals of the shape a, bi or a+bi with decimal components."""
    s = text.strip().replace(" ", "")
    if not s:
        raise DomainError("empty complex literal")

    def is_number(frag):
        if not frag or frag in "+-":
            return False
        try:
            float(frag)
            return True
        except ValueError:
            return False

    if s.endswith("i"):
        body = s[:-1]
        split = None
        for idx in range(len(body) - 1, 0, -1):
            if body[idx] in "+-" and body[idx - 1] not in "eE":
                split = idx
                break
        if split is None:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:split], body[split:]
            if im_part in "+-":
                im_part += "1"
    else:
        re_part, im_part = s, "0"
    if not (is_number(re_part) and is_number(im_part)):
        raise DomainError(f"malformed complex literal {text!r}")
    return ComplexHP(re_part, im_part, bits=bits)


def parse_real_list(text: str) -> list[float]:
    """Comma list, lo:hi[:step] or lo..hi[..step]; bare values allowed.

    Two-part ranges subdivide into 10 equally spaced points inclusive.
    """
    s = text.strip()
    if "," in s:
        return [float(tok) for tok in s.split(",") if tok.strip()]
    for sep in ("..", ":"):
        if sep in s:
            parts = s.split(sep)
            if len(parts) == 2:
                lo, hi = float(parts[0]), float(parts[1])
                if hi < lo:
                    raise DomainError("range upper end below lower end")
                if hi == lo:
                    return [lo]
                step = (hi - lo) / 9
                return [lo + k * step for k in range(10)]
            if len(parts) == 3:
                lo, hi, step = (float(p) for p in parts)
                if step <= 0 or hi < lo:
                    raise DomainError(f"malformed range {text!r}")
                out, k = [], 0
                while True:
                    y = lo + k * step
                    if y > hi + 1e-9 * max(1.0, abs(hi)):
                        return out
                    out.append(y)
                    k += 1
            raise DomainError(f"malformed range {text!r}")
    return [float(s)]


def parse_range_pair(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise DomainError("range must be lo:hi")
    lo, hi = float(parts[0]), float(parts[1])
    if hi < lo:
        raise DomainError("range upper end below lower end")
    return lo, hi


# ----------------------------------------------------------------------------
# output assembly


def _emit_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def _emit_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _c(v: ComplexHP) -> dict:
    return v.to_json()


def _cstr(v: ComplexHP) -> str:
    j = v.to_json()
    return f"{j['re']} {j['im']}i"


@dataclass
class Rendered:
    payload: dict
    csv_header: list
    csv_rows: list
    text_lines: list


# ----------------------------------------------------------------------------
# commands


def _cmd_bell(args, run: RunConfig) -> Rendered:
    poly = diffpoly.gamma_log_ratio(args.n)
    rendered = poly.render()
    return Rendered(
        payload={"command": "bell", "n": args.n, "poly": rendered},
        csv_header=["n", "poly"],
        csv_rows=[[args.n, rendered]],
        text_lines=[rendered],
    )


def _cmd_cn(args, run: RunConfig) -> Rendered:
    value = diffpoly.c_coefficient(args.n)
    formula = 0 if args.n == 1 else args.n * (args.n - 1) // 2
    return Rendered(
        payload={
            "command": "cn", "n": args.n, "value": value, "formula": formula,
        },
        csv_header=["n", "value", "formula"],
        csv_rows=[[args.n, value, formula]],
        text_lines=[str(value)],
    )


def _cmd_eval(args, run: RunConfig) -> Rendered:
    cfg = run.precision
    z = parse_complex_literal(args.z, cfg.precision_bits)
    order = args.order
    if order < 0:
        raise DomainError("order must be non-negative")
    if args.function == "zeta":
        value = specfun.zeta_jet(z, order, cfg)[order]
    elif args.function == "gamma":
        value = specfun.gamma_deriv(z, order, cfg)
    else:
        value = specfun.digamma_jet(z, order, cfg)[order]
    return Rendered(
        payload={
            "command": "eval",
            "function": args.function,
            "z": _c(z),
            "order": order,
            "value": _c(value),
        },
        csv_header=["function", "order", "re", "im"],
        csv_rows=[[args.function, order, _c(value)["re"], _c(value)["im"]]],
        text_lines=[f"{args.function}^({order})({args.z}) = {_cstr(value)}"],
    )


def _cmd_asym(args, run: RunConfig) -> Rendered:
    cfg = run.precision
    bits = cfg.precision_bits
    if args.check == "epsilon":
        zs = parse_real_list(args.zs)
        report = asym.verify_epsilon(args.n, zs, cfg)
        rj = report.to_json()
        rows = [
            [
                repr(z), mj["re"], mj["im"], pj["re"], pj["im"],
                qj["re"], qj["im"],
            ]
            for z, mj, pj, qj in zip(
                zs, rj["measured"], rj["predicted"], rj["ratios"]
            )
        ]
        return Rendered(
            payload={"command": "asym", "check": "epsilon", "report": rj},
            csv_header=[
                "z", "measured_re", "measured_im", "predicted_re",
                "predicted_im", "ratio_re", "ratio_im",
            ],
            csv_rows=rows,
            text_lines=[
                f"epsilon n={args.n} converging={report.converging}",
                *(
                    f"  z={z!r} measured={_cstr(m)} ratio={_cstr(r)}"
                    for z, m, r in zip(zs, report.measured, report.ratios)
                ),
            ],
        )
    if args.check == "hlimits":
        zs = parse_real_list(args.zs)
        samples = []
        for zv in zs:
            first, second = asym.h_limits(ComplexHP(zv, bits=bits), cfg)
            samples.append((zv, first, second))
        return Rendered(
            payload={
                "command": "asym",
                "check": "hlimits",
                "samples": [
                    {"z": repr(zv), "first": _c(a), "second": _c(b)}
                    for zv, a, b in samples
                ],
            },
            csv_header=["z", "first_re", "first_im", "second_re", "second_im"],
            csv_rows=[
                [repr(zv), _c(a)["re"], _c(a)["im"], _c(b)["re"], _c(b)["im"]]
                for zv, a, b in samples
            ],
            text_lines=[
                f"z={zv!r} first={_cstr(a)} second={_cstr(b)}"
                for zv, a, b in samples
            ],
        )
    ys = parse_real_list(args.ys if args.ys else str(args.y))
    samples = [(y, asym.stirling_modulus_ratio(y, cfg)) for y in ys]
    return Rendered(
        payload={
            "command": "asym",
            "check": "stirling",
            "samples": [
                {"y": repr(y), "ratio": _c(r)} for y, r in samples
            ],
        },
        csv_header=["y", "ratio"],
        csv_rows=[[repr(y), _c(r)["re"]] for y, r in samples],
        text_lines=[
            f"y={y!r} ratio={to_decimal(r.re, 20)}" for y, r in samples
        ],
    )


def _cmd_falsify(args, run: RunConfig) -> Rendered:
    cfg = run.precision
    spec = decomp.VarSpec(m=args.m, n=args.n, l=args.l)
    source = args.poly
    candidate = Path(source)
    if candidate.is_file():
        source = candidate.read_text()
    poly = polyparse.parse_polyspec(source, spec, cfg.precision_bits)
    ys = parse_real_list(args.ys)
    report = decomp.falsify(poly, ys, cfg, seed=run.seed)
    rj = report.to_json()
    return Rendered(
        payload={"command": "falsify", **rj},
        csv_header=["y", "measured", "predicted"],
        csv_rows=[
            [s["y"], s["measured"]["re"], s["predicted"]["re"]]
            for s in rj["samples"]
        ],
        text_lines=[
            f"p0={report.p0} q0={report.q0} t0={report.t0} "
            f"verdict={report.verdict}",
            *(
                f"  y={y!r} measured={to_decimal(m.re, 20)} "
                f"predicted={to_decimal(p.re, 20)}"
                for y, m, p in report.samples
            ),
        ],
    )


def _cmd_voronin(args, run: RunConfig) -> Rendered:
    cfg = run.precision
    bits = cfg.precision_bits
    target = [
        parse_complex_literal(tok, bits) for tok in args.target.split(",")
    ]
    if len(target) != args.m + 1:
        raise DomainError(
            f"target must have {args.m + 1} entries for m={args.m}"
        )
    y_range = parse_range_pair(args.range)
    result = voronin.nearest_approach(
        target, y_range, args.step, args.m, args.x, cfg
    )
    rj = result.to_json()
    return Rendered(
        payload={"command": "voronin", **rj},
        csv_header=["y", "distance"],
        csv_rows=[[rj["best_y"], rj["distance"]["re"]]],
        text_lines=[
            f"best_y={result.best_y!r} "
            f"distance={to_decimal(result.distance.re, 20)} "
            f"samples={result.samples_scanned}"
        ],
    )


def _cmd_fe_check(args, run: RunConfig) -> Rendered:
    cfg = run.precision
    bits = cfg.precision_bits
    ys = parse_real_list(args.ys)
    samples = []
    worst = None
    for y in ys:
        res = specfun.functional_eq_residual(
            ComplexHP(0.75, y, bits=bits), cfg
        )
        samples.append((y, res))
        if worst is None or res.re > worst.re:
            worst = res
    return Rendered(
        payload={
            "command": "fe-check",
            "samples": [{"y": repr(y), "residual": _c(r)} for y, r in samples],
            "max_residual": _c(worst),
        },
        csv_header=["y", "residual"],
        csv_rows=[[repr(y), _c(r)["re"]] for y, r in samples],
        text_lines=[
            *(
                f"y={y!r} residual={to_decimal(r.re, 20)}"
                for y, r in samples
            ),
            f"max residual {to_decimal(worst.re, 20)}",
        ],
    )


_DISPATCH = {
    "bell": _cmd_bell,
    "cn": _cmd_cn,
    "eval": _cmd_eval,
    "asym": _cmd_asym,
    "falsify": _cmd_falsify,
    "voronin": _cmd_voronin,
    "fe-check": _cmd_fe_check,
}

_SCHEMAS = {
    "bell": "bell.schema.json",
    "cn": "cn.schema.json",
    "eval": "eval.schema.json",
    ("asym", "epsilon"): "asym_epsilon.schema.json",
    ("asym", "hlimits"): "asym_hlimits.schema.json",
    ("asym", "stirling"): "asym_stirling.schema.json",
    "falsify": "falsify.schema.json",
    "voronin": "voronin.schema.json",
    "fe-check": "fecheck.schema.json",
}


def schema_name(command: str, check: str | None = None) -> str:
    key = (command, check) if check else command
    return _SCHEMAS[key]


def load_schema(name: str) -> dict:
    data = resources.files("gzlab").joinpath("schemas", name).read_text()
    return json.loads(data)


# ----------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument(
        "--precision-bits", type=int,
        default=int(os.environ.get(ENV_PRECISION, "256")),
        help="working precision in bits (default 256, env GZ_PRECISION_BITS)",
    )
    common.add_argument(
        "--format", choices=("json", "csv", "text"), default="json",
        help="output format (default json)",
    )
    common.add_argument(
        "--seed", type=int, default=0,
        help="seed for randomized degeneracy guards (default 0)",
    )

    parser = _Parser(
        prog="gzlab",
        description=(
            "Gamma/zeta laboratory: exact derivative-ratio ladders, "
            "high-precision evaluation, asymptotic checks, a dominance "
            "falsifier and a zeta-curve density probe."
        ),
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("bell", parents=[common],
                       help="print the ratio polynomial Gamma^(n)/Gamma")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("cn", parents=[common],
                       help="ladder constant: coefficient of f^(n-2) f'")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("eval", parents=[common],
                       help="evaluate zeta/gamma/digamma derivatives")
    p.add_argument("function", choices=("zeta", "gamma", "digamma"))
    p.add_argument("--z", required=True, help="complex literal a+bi")
    p.add_argument("--order", type=int, default=0)

    p = sub.add_parser("asym", parents=[common],
                       help="asymptotic-ladder checks")
    p.add_argument("check", choices=("epsilon", "hlimits", "stirling"))
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--zs", help="sample points (comma list or range)")
    p.add_argument("--y", type=float, help="single height for stirling")
    p.add_argument("--ys", help="heights for stirling (comma list or range)")

    p = sub.add_parser("falsify", parents=[common],
                       help="dominance probe of a candidate polynomial")
    p.add_argument("--poly", required=True, help="expression or file path")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--ys", required=True,
                   help="heights: comma list, lo:hi:step or lo..hi")

    p = sub.add_parser("voronin", parents=[common],
                       help="nearest approach of the zeta curve to a target")
    p.add_argument("--target", required=True,
                   help="comma list of complex literals, length m+1")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--range", required=True, help="height range lo:hi")
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--x", type=float, default=0.75)

    p = sub.add_parser("fe-check", parents=[common],
                       help="functional-equation residual sweep on x=3/4")
    p.add_argument("--ys", required=True,
                   help="heights: comma list, lo:hi:step or lo..hi")

    return parser


def _checked_args(args) -> RunConfig:
    return RunConfig(
        precision_bits=args.precision_bits,
        output_format=args.format,
        seed=args.seed,
    )


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        run = _checked_args(args)
        if args.command == "asym":
            if args.check == "epsilon" and not args.zs:
                raise DomainError("asym epsilon requires --zs")
            if args.check == "hlimits" and not args.zs:
                raise DomainError("asym hlimits requires --zs")
            if args.check == "stirling" and args.y is None and not args.ys:
                raise DomainError("asym stirling requires --y or --ys")
        rendered = _DISPATCH[args.command](args, run)
    except ParseError as e:
        sys.stderr.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except LimitExceeded as e:
        sys.stderr.write(f"cap exceeded: {e}\n")
        return EXIT_CAP
    except PoleError as e:
        sys.stderr.write(f"pole: {e}\n")
        return EXIT_POLE
    except (
        ZeroPolynomial, AllZeroCoefficients, SectorError, DivisionNearZero,
    ) as e:
        sys.stderr.write(f"degenerate input: {e}\n")
        return EXIT_DEGENERATE
    except DomainError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except (PrecisionUnreachable, ExponentOverflow, GzlabError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except (ValueError, OverflowError) as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE

    fmt = run.output_format
    if fmt == "json":
        sys.stdout.write(_emit_json(rendered.payload))
    elif fmt == "csv":
        sys.stdout.write(_emit_csv(rendered.csv_header, rendered.csv_rows))
    else:
        sys.stdout.write("\n".join(rendered.text_lines) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
