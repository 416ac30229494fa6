"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 unreadable or invalid input file,
3 domain error (a quantity is undefined for the given input).
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import __version__, kernels
from .errors import DomainError, ScenarioError
from .planner import compare, evaluate, plan_additional
from .scenario_io import (
    ResultsTable,
    load_candidates,
    load_observed_ratios,
    parse_scenario,
    render_lorenz_svg,
    write_lorenz_csv,
    write_results_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _InputError(Exception):
    """An input path could not be read or decoded."""


def _style(text: str, code: str) -> str:
    if os.environ.get("CACCESS_NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise _InputError(f"{path}: cannot read file: {exc.strerror or exc}") from None


def _scenario(path: str):
    data = _read(path)
    try:
        return parse_scenario(data)
    except ScenarioError as exc:
        raise _InputError(f"{path}: {exc}") from None


def _ratios(path: str | None, scenario):
    if path is None:
        return None
    try:
        return load_observed_ratios(_read(path), scenario)
    except ScenarioError as exc:
        raise _InputError(f"{path}: {exc}") from None


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _table(args) -> ResultsTable:
    scenario = _scenario(args.scenario)
    report = evaluate(scenario, ratios=_ratios(getattr(args, "observed_ratios", None), scenario))
    return ResultsTable(scenario, report.results, report)


def cmd_simulate(args) -> int:
    table = _table(args)
    text = write_results_csv(table)
    if args.out:
        write_atomic(args.out, text)
        print(f"wrote {args.out}: {table.scenario.n} LGAs, gini {table.report.gini:.4f}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_lorenz(args) -> int:
    table = _table(args)
    if args.csv:
        write_atomic(args.csv, write_lorenz_csv(table))
        print(f"wrote {args.csv}")
    if args.svg:
        title = f"Lorenz curve for {table.scenario.name}"
        write_atomic(args.svg, render_lorenz_svg(table.report.curve, title=title))
        print(f"wrote {args.svg}")
    if not (args.csv or args.svg):
        sys.stdout.write(write_lorenz_csv(table))
    return EXIT_OK


def _epsilons(text: str | None) -> list[float]:
    if not text:
        return []
    try:
        eps = [float(e) for e in text.split(",") if e.strip()]
    except ValueError:
        raise _UsageError(f"--atkinson expects comma-separated numbers, got {text!r}") from None
    if any(not e >= 0 for e in eps):
        raise _UsageError("--atkinson values must be >= 0")
    return eps


def cmd_gini(args) -> int:
    eps = _epsilons(args.atkinson)
    scenario = _scenario(args.scenario)
    report = evaluate(scenario, eps, ratios=_ratios(args.observed_ratios, scenario))
    print(f"{_style('gini', '1')} {report.gini:.4f}")
    for e, value in report.atkinson.items():
        print(f"{_style(f'atkinson(eps={e:g})', '1')} {value:.4f}")
    return EXIT_OK


def cmd_compare(args) -> int:
    base = _scenario(args.baseline)
    var = _scenario(args.variant)
    cmp = compare(base, var)
    names = {lga.index: lga.name for lga in base.lgas}
    print(f"baseline gini {cmp.baseline_report.gini:.4f}")
    print(f"variant gini  {cmp.variant_report.gini:.4f}")
    print(f"{_style('delta_gini', '1')} {cmp.delta_gini:+.4f}")
    print(_style(f"{'lga':<12} {'t_base':>8} {'t_var':>8} {'delta_t':>8}", "1"))
    for b, v, d in zip(cmp.baseline_report.results, cmp.variant_report.results, cmp.delta_t):
        print(f"{names[b.lga_index]:<12} {b.ratio:8.4f} {v.ratio:8.4f} {d:+8.4f}")
    return EXIT_OK


def _site(site) -> str:
    return f"({site[0]:g},{site[1]:g})"


def cmd_plan(args) -> int:
    scenario = _scenario(args.scenario)
    try:
        candidates = load_candidates(_read(args.candidates))
    except ScenarioError as exc:
        raise _InputError(f"{args.candidates}: {exc}") from None
    if args.backend and args.backend not in kernels.AVAILABLE:
        raise _UsageError(f"backend {args.backend!r} not available (have {', '.join(kernels.AVAILABLE)})")
    baseline = evaluate(scenario).gini
    ranked = plan_additional(
        scenario,
        candidates,
        args.add,
        strategy=args.strategy,
        top=args.top,
        jobs=args.jobs,
        backend=args.backend,
    )
    print(f"baseline gini {baseline:.4f}; {args.strategy} search, adding {args.add}")
    print(_style(f"{'rank':>4} {'gini':>8} {'delta':>8}  sites", "1"))
    for rank, res in enumerate(ranked, 1):
        sites = " ".join(_site(s) for s in res.placement)
        print(f"{rank:>4} {res.gini:8.4f} {res.gini - baseline:+8.4f}  {sites}")
    return EXIT_OK


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="caccess", description="Spatial inequality in cancer-service access.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ratios_help = "JSON file of ratios (object by LGA name, or array in index order) replacing computed ratios"

    p = sub.add_parser("simulate", help="per-LGA results table and Lorenz coordinates as CSV")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--out", metavar="FILE", help="write CSV here instead of standard output")
    p.add_argument("--observed-ratios", metavar="FILE", help=ratios_help)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("lorenz", help="Lorenz coordinates (CSV) and/or figure (SVG)")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--csv", metavar="FILE", help="write Lorenz coordinates CSV")
    p.add_argument("--svg", metavar="FILE", help="write Lorenz curve SVG")
    p.add_argument("--observed-ratios", metavar="FILE", help=ratios_help)
    p.set_defaults(func=cmd_lorenz)

    p = sub.add_parser("gini", help="print the Gini coefficient (and Atkinson indices)")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--atkinson", metavar="EPS[,EPS...]", help="inequality-aversion values for Atkinson indices")
    p.add_argument("--observed-ratios", metavar="FILE", help=ratios_help)
    p.set_defaults(func=cmd_gini)

    p = sub.add_parser("compare", help="Gini and per-LGA ratio differences between two scenarios")
    p.add_argument("baseline", help="baseline scenario JSON file")
    p.add_argument("variant", help="variant scenario JSON file (same LGAs)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plan", help="rank placements of additional facilities by resulting Gini")
    p.add_argument("scenario", help="scenario JSON file (simulated mode)")
    p.add_argument("--candidates", metavar="FILE", required=True, help="JSON array of [x_km, y_km] sites")
    p.add_argument("--add", metavar="K", type=_positive_int, required=True, help="number of facilities to add")
    p.add_argument("--strategy", choices=("exhaustive", "greedy"), default="exhaustive")
    p.add_argument("--top", metavar="M", type=_positive_int, help="show only the best M placements")
    p.add_argument("--jobs", metavar="N", type=_positive_int, default=1, help="threads for scoring placements")
    p.add_argument("--backend", choices=("cython", "python"), help="scoring kernel (default: fastest available)")
    p.set_defaults(func=cmd_plan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"caccess {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _InputError as exc:
        print(f"caccess {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ValueError) as exc:
        print(f"caccess {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"caccess {args.command}: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run(argv) -> int:
    """``main`` that also converts argparse's ``SystemExit`` into a return code."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
