"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 degenerate lattice, 4 a shape
satisfying both hypotheses violates the bound, 5 an enclosure stayed
undecided at the maximum precision.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .analyzer import SamplerConfig, figure8_demo, sample_constrained_shapes, verify_shape
from .certifier import (
    Verdict,
    certify_delta,
    certify_theorem,
    delta_max,
    quartic_bound,
    with_refinement,
)
from .errors import DegenerateLattice, IndeterminateEnclosure, SamplerExhausted
from .io import ParseError, dumps, envelope, load_shape_file, parse_shape, parse_slope
from .lattice import enumerate_short_slopes, slope_distance, slope_length, slope_length_squared
from .scalar import DEFAULT_BITS, MAX_BITS, working_precision

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_VIOLATION = 4
EXIT_INDETERMINATE = 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _cutoff(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid length {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("length must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=DEFAULT_BITS,
                        help="interval endpoint precision in bits (default %(default)s)")
    common.add_argument("--format", choices=["table", "json"], default=None)

    parser = _Parser(prog="cuspslope", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("length", parents=[common], help="length of a slope")
    p.add_argument("--shape", required=True, help="fig8 or mx,my,lx,ly")
    p.add_argument("--slope", required=True, help="p/q or n")

    p = sub.add_parser("distance", parents=[common], help="distance |p1 q2 - p2 q1| of two slopes")
    p.add_argument("--slope", action="append", required=True, help="give exactly twice")

    p = sub.add_parser("short", parents=[common], help="slopes no longer than --max-length")
    p.add_argument("--shape", required=True)
    p.add_argument("--max-length", type=_cutoff, default=Fraction(6))

    p = sub.add_parser("verify", parents=[common], help="check shapes against the bound")
    p.add_argument("file", nargs="?", help="ShapeFile JSON ('-' for stdin)")
    p.add_argument("--shape", action="append", default=[])
    p.add_argument("--seed", type=int, default=None, help="verify sampled shapes from this seed")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-length", type=_cutoff, default=Fraction(6))

    p = sub.add_parser("certify", parents=[common], help="certify the distance bound")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--delta", type=int)
    g.add_argument("--max", action="store_true")

    p = sub.add_parser("demo", parents=[common], help="built-in demonstrations")
    p.add_argument("which", choices=["fig8"])
    return parser


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_length(args, argv) -> int:
    shape = parse_shape(args.shape)
    slope = parse_slope(args.slope)
    length = slope_length(shape, slope)
    if args.format == "json":
        _out(dumps(envelope(argv, {"slope": slope, "length": length,
                                   "length_squared": slope_length_squared(shape, slope)})))
    else:
        _out(f"length({slope}) = {length}" + ("" if length.is_exact else
                                               f"  (squared {slope_length_squared(shape, slope)})"))
    return EXIT_OK


def _cmd_distance(args, argv) -> int:
    if len(args.slope) != 2:
        raise ParseError("distance needs exactly two --slope arguments")
    s1, s2 = (parse_slope(s) for s in args.slope)
    d = slope_distance(s1, s2)
    if args.format == "json":
        _out(dumps(envelope(argv, {"slopes": [s1, s2], "distance": d})))
    else:
        _out(str(d))
    return EXIT_OK


def _cmd_short(args, argv) -> int:
    shape = parse_shape(args.shape)
    reports = enumerate_short_slopes(shape, args.max_length)
    if args.format == "json":
        _out(dumps(envelope(argv, reports)))
        return EXIT_OK
    _out(f"{len(reports)} slope(s) of length <= {args.max_length} on {shape.name}")
    for r in reports:
        flag = "  (boundary uncertain)" if r.boundary_uncertain else ""
        _out(f"{str(r.slope):>8}  {r.length}{flag}")
    return EXIT_OK


def _verify_inputs(args):
    shapes = []
    if args.file:
        text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
        shapes.extend(load_shape_file(text))
    shapes.extend(parse_shape(s) for s in args.shape)
    if args.seed is not None:
        shapes.extend(sample_constrained_shapes(SamplerConfig(seed=args.seed, count=args.count)))
    if not shapes:
        raise ParseError("verify needs a file, --shape or --seed")
    return shapes


def _cmd_verify(args, argv) -> int:
    reports = [verify_shape(s, args.max_length) for s in _verify_inputs(args)]
    violations = [r for r in reports if r.hypotheses_hold and not r.bound_holds]
    if args.format == "table":
        for r in reports:
            ns = [n for n, _ in r.integral_short_slopes]
            _out(f"{r.shape_name}: min_slope={r.satisfies_min_slope} min_area={r.satisfies_min_area} "
                 f"integral={ns} count={r.count} max_distance={r.max_pairwise_distance} "
                 f"bound_holds={r.bound_holds}{' uncertain' if r.uncertain else ''}")
    else:
        _out(dumps(envelope(argv, reports)))
    for r in violations:
        print(f"bound violated for {r.shape_name!r}: this indicates a bug", file=sys.stderr)
    return EXIT_VIOLATION if violations else EXIT_OK


def _render_cert(report) -> list[str]:
    lines = [f"delta = {report.delta}: {report.verdict.value}  ({report.precision} bits)"]
    for step in report.trace:
        mark = "pass" if step.passed else "FAIL"
        lines.append(f"  [{mark}] {step.name}: {step.value} {step.relation} {step.threshold}")
    if report.witness is not None:
        w = report.witness
        lines.append(f"  witness a={w.a} b={w.b} theta={w.theta} ({float(w.theta.lo):.6f} rad)")
    return lines


def _cmd_certify(args, argv) -> int:
    if args.max:
        reports = certify_theorem(bits=args.precision)
        dmax = delta_max(reports)
        quartic = with_refinement(quartic_bound, args.precision)
        if args.format == "json":
            _out(dumps(envelope(argv, {"delta_max": dmax, "quartic": quartic, "reports": reports})))
        else:
            _out(f"Δ_max = {dmax}")
            _out(f"quartic: delta^2 < {quartic.delta_squared}, delta < {quartic.delta}, floor {quartic.floor}")
            _out(f"at most {dmax + 1} integral candidate slopes")
            _out("")
            _out(f"{'delta':>5}  {'verdict':<13} combined left side (< 1296 needed)")
            for r in reports:
                combined = next(s for s in r.trace if s.name.startswith("combined"))
                _out(f"{r.delta:>5}  {r.verdict.value:<13} {combined.value}")
        ok = dmax == 8
    else:
        if args.delta < 1:
            raise ParseError("--delta must be at least 1")
        report = with_refinement(lambda: certify_delta(args.delta), args.precision)
        if args.format == "json":
            _out(dumps(envelope(argv, report)))
        else:
            _out("\n".join(_render_cert(report)))
        ok = report.verdict is not Verdict.INDETERMINATE
    return EXIT_OK if ok else EXIT_INDETERMINATE


def _cmd_demo(args, argv) -> int:
    demo = figure8_demo()
    if args.format == "json":
        _out(dumps(envelope(argv, {"report": demo.report, "short_slopes": list(demo.short_slopes),
                                   "checks": [{"claim": c, "ok": ok} for c, ok in demo.checks]})))
    else:
        _out(demo.narrative)
        for claim, ok in demo.checks:
            _out(f"  [{'ok' if ok else 'FAILED'}] {claim}")
    return EXIT_OK if demo.ok else 1


COMMANDS = {
    "length": _cmd_length,
    "distance": _cmd_distance,
    "short": _cmd_short,
    "verify": _cmd_verify,
    "certify": _cmd_certify,
    "demo": _cmd_demo,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    if args.format is None:
        args.format = "json" if args.command == "verify" else "table"
    if not 16 <= args.precision <= MAX_BITS:
        print(f"--precision must lie in [16, {MAX_BITS}]", file=sys.stderr)
        return EXIT_PARSE
    try:
        with working_precision(args.precision):
            return COMMANDS[args.command](args, argv)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateLattice as exc:
        print(f"degenerate lattice: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except IndeterminateEnclosure as exc:
        print(f"indeterminate at maximum precision: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except SamplerExhausted as exc:
        print(f"sampler exhausted: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
