"""
Command-line front end: python -m app <subcommand> [options]

Exit codes: 0 success, 2 parameters outside the characterized region,
1 any error (message on stderr).
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from app.config import configure_logging
from app.frames.errors import GaborError
from app.frames.lattice import OutOfScope, classify_params
from app.frames.numbers import parse_rational
from app.frames.window import Window, make_bspline
from app.utils import dump_window, dumps_report, load_window, write_csv
from app.workflows import run_atlas, run_check, run_curves, run_dual, run_verify, run_zzbound

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_OUT_OF_SCOPE = 2


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument errors surface as exit code 1; exit 2 is reserved for OutOfScope."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _rational(value: str):
    try:
        return parse_rational(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _add_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--window", type=Path, help="Window JSON file")
    group.add_argument("--bspline", type=int, metavar="N", help="Use the centered B-spline B_N")


def _add_lattice(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=_rational, required=True, help="Translation step, rational 'p/q'")
    parser.add_argument("--b", type=_rational, required=True, help="Modulation step, rational 'p/q'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gabor", description="Gabor frames for compactly supported piecewise-polynomial windows.")
    parser.add_argument("--log-level", default=None, help="Overrides GABOR_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="Decide the frame property")
    _add_source(p)
    _add_lattice(p)
    p.add_argument("--json", action="store_true", help="Print the report as JSON")

    p = sub.add_parser("dual", help="Construct the compactly supported dual window")
    _add_source(p)
    _add_lattice(p)
    p.add_argument("--grid", type=int, default=1001, help="Uniform samples of h for --out")
    p.add_argument("--out", type=Path, help="CSV file with columns x,h")
    p.add_argument("--cases", type=Path, help="JSON case tree of h")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="Sample the duality residuals of the constructed dual")
    _add_source(p)
    _add_lattice(p)
    p.add_argument("--grid", type=int, default=10000, help="Samples per band")
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("curves", help="Candidate obstruction curves of the window")
    _add_source(p)
    p.add_argument("--max-index", type=int, default=None)
    p.add_argument("--out", type=Path, help="CSV file")
    p.add_argument("--svg", type=Path, help="SVG overlay over the region alpha <= a < 2 alpha")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("atlas", help="Frame-set atlas for a B-spline")
    p.add_argument("--bspline", type=int, metavar="N", required=True)
    p.add_argument("--amin", type=_rational, default=parse_rational(0))
    p.add_argument("--amax", type=_rational, default=parse_rational(2))
    p.add_argument("--bmin", type=_rational, default=parse_rational(0))
    p.add_argument("--bmax", type=_rational, default=parse_rational(3))
    p.add_argument("--res", type=int, default=100)
    p.add_argument("--out", type=Path, help="CSV file with columns a,b,label,evidence")
    p.add_argument("--svg", type=Path)
    p.add_argument("--png", type=Path)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("zzbound", help="Lower frame bound estimate from the window factorization")
    _add_source(p)
    _add_lattice(p)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("window", help="Write a B-spline in the window file format")
    p.add_argument("--bspline", type=int, metavar="N", required=True)
    p.add_argument("--out", type=Path, help="Output file (stdout when omitted)")
    return parser


def _window(args: argparse.Namespace) -> Window:
    if getattr(args, "window", None) is not None:
        return load_window(args.window)
    return make_bspline(args.bspline)


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _out_of_scope(w: Window, args: argparse.Namespace) -> Optional[OutOfScope]:
    params = classify_params(w.alpha, args.a, args.b)
    return params if isinstance(params, OutOfScope) else None


def cmd_check(args: argparse.Namespace) -> int:
    w = _window(args)
    report = run_check(w, args.a, args.b, bspline=args.bspline)
    if args.json:
        _out(dumps_report(report))
    else:
        lines = [f"verdict: {report['verdict']}"]
        for key in ("failed_condition", "reason", "M", "kappa", "step", "atlas_label"):
            if report.get(key) is not None:
                lines.append(f"{key}: {report[key]}")
        if report["fast_path"]:
            lines.append("fast_path: interior-positive window")
        for wt in report["witnesses"]:
            lines.append(f"witness: side={wt['side']} n={wt['n']} zero={wt['zero']} vanishes={wt['test_point_vanishes']}")
        for pt in report["offending_points"]:
            lines.append(f"offending_point: {pt}")
        _out("\n".join(lines))
    return EXIT_OUT_OF_SCOPE if report["verdict"] == "OutOfScope" else EXIT_OK


def cmd_dual(args: argparse.Namespace) -> int:
    w = _window(args)
    scope = _out_of_scope(w, args)
    if scope is not None:
        _out(f"OutOfScope: {scope.reason}")
        return EXIT_OUT_OF_SCOPE
    h, report = run_dual(w, args.a, args.b)
    if args.out:
        xs, ys = h.grid(args.grid)
        write_csv(args.out, ["x", "h"], zip(xs.tolist(), ys.tolist()))
    if args.cases:
        args.cases.write_text(dumps_report(report["case_tree"]), encoding="utf-8")
    if args.json:
        _out(dumps_report(report["summary"]))
    else:
        s = report["summary"]
        _out(
            f"dual window: M={s['M']} kappa={s['kappa']} support=[{s['support'][0]}, {s['support'][1]}] "
            f"epsilon={s['epsilon']} bound={s['bound']:.6g} audit={s['audit_residual']:.3e}"
        )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    w = _window(args)
    scope = _out_of_scope(w, args)
    if scope is not None:
        _out(f"OutOfScope: {scope.reason}")
        return EXIT_OUT_OF_SCOPE
    report = run_verify(w, args.a, args.b, args.grid, args.tol)
    _out(dumps_report(report.to_dict()))
    return EXIT_OK if report.passed is not False else EXIT_ERROR


def cmd_curves(args: argparse.Namespace) -> int:
    w = _window(args)
    curves, report = run_curves(w, args.max_index)
    if args.out:
        write_csv(
            args.out,
            ["kind", "y_plus", "y_minus", "n", "a_min", "a_max", "formula", "blowup_possible"],
            (
                [c.kind, str(c.y_plus), str(c.y_minus), c.n, str(c.domain.lo), str(c.domain.hi), c.formula, c.blowup_possible]
                for c in curves
            ),
        )
    if args.svg:
        from app.frames.render import curves_svg

        curves_svg(curves, float(w.alpha), args.svg)
    if args.json:
        _out(dumps_report(report))
    else:
        _out("\n".join([f"{len(curves)} candidate curves"] + [f"{c.kind} n={c.n} a in {c.domain}: {c.formula}" for c in curves]))
    return EXIT_OK


def cmd_atlas(args: argparse.Namespace) -> int:
    grid, report = run_atlas(args.bspline, (args.amin, args.amax), (args.bmin, args.bmax), args.res)
    if args.out:
        write_csv(args.out, ["a", "b", "label", "evidence"], (cell.csv_row() for cell in grid.cells))
    if args.svg or args.png:
        from app.frames.render import atlas_png, atlas_svg

        if args.svg:
            atlas_svg(grid, args.svg)
        if args.png:
            atlas_png(grid, args.png)
    if args.json:
        _out(dumps_report(report))
    else:
        _out("\n".join(f"{label}: {count}" for label, count in report["counts"].items()))
    return EXIT_OK if report["audit_problems"] == 0 else EXIT_ERROR


def cmd_zzbound(args: argparse.Namespace) -> int:
    w = _window(args)
    report = run_zzbound(w, args.a, args.b, args.grid)
    _out(dumps_report(report) if args.json else f"{report['estimate']!r}")
    return EXIT_OK


def cmd_window(args: argparse.Namespace) -> int:
    text = dump_window(make_bspline(args.bspline), args.out)
    if args.out is None:
        _out(text)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "dual": cmd_dual,
    "verify": cmd_verify,
    "curves": cmd_curves,
    "atlas": cmd_atlas,
    "zzbound": cmd_zzbound,
    "window": cmd_window,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except UsageError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_ERROR
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except (GaborError, ValueError, OSError, RuntimeError) as e:
        sys.stderr.write(f"error: {e}\n")
        logger.debug(f"{args.command} failed: {e!r}")
        return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))
