"""Command-line interface: bounds, reduce, search, oracle, verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from .baker import theorem1_bounds
from .numerics import DEFAULT_PRECISION
from .reduction import (
    DEFAULT_WINDOW,
    MAX_WINDOW,
    PUBLISHED_CAPS,
    PUBLISHED_TABLES,
    STEP_VARIABLE,
    InconclusiveReduction,
    ReductionTable,
    full_reduction,
)
from .search import (
    DEFAULT_K_MAX,
    REDUCED_T_BOUNDS,
    SearchConfig,
    brute_force_oracle,
    records_csv,
    records_markdown,
    search_all,
    verify_table1,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def eps2(x: float) -> str:
    """Two significant digits, as in the published tables."""
    return f"{x:.1e}"


def _bases(args) -> list[int]:
    if getattr(args, "all", False) or args.g is None:
        return list(range(2, 13))
    return sorted(set(args.g))


def _emit(text: str, out) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------- bounds


def cmd_bounds(args, out) -> int:
    results = [theorem1_bounds(g, args.precision) for g in _bases(args)]
    if args.format == "json":
        _emit(json.dumps([r.as_dict() for r in results], indent=2), out)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["g", "t_bound", "k_bound", "t_coefficient", "k_coefficient"])
        for r in results:
            w.writerow([r.g, f"{r.t_bound:.3e}", f"{r.k_bound:.3e}", f"{r.t_coefficient:.3e}", f"{r.k_coefficient:.3e}"])
        _emit(buf.getvalue(), out)
    else:
        lines = ["| stage | Matveev coefficient | published | bound coefficient | published |", "|---|---|---|---|---|"]
        for s in results[0].stages:
            lines.append(
                f"| {s.stage} | {s.matveev_coefficient:.3g} | {s.published_matveev:.3g} | {s.coefficient:.3g} | {s.published_coefficient:.3g} |"
            )
        lines += ["", "| g | t bound | k bound |", "|---|---|---|"]
        for r in results:
            lines.append(f"| {r.g} | {r.t_bound:.3e} | {r.k_bound:.3e} |")
        r = results[0]
        lines += ["", f"t < {r.t_coefficient:.3g} log^12 g, k < {r.k_coefficient:.3g} log^13 g (absorption constant {r.absorb_constant})"]
        _emit("\n".join(lines), out)
    return EXIT_OK


# ---------------------------------------------------------------- reduce


def reduction_rows(table: ReductionTable) -> list[dict]:
    rows = []
    for s in range(1, 5):
        for r in table.step(s):
            pub = PUBLISHED_TABLES[s].get(r.g)
            rows.append(
                {
                    "step": s,
                    "variable": STEP_VARIABLE[s],
                    "g": r.g,
                    "q_index": r.used_index,
                    "epsilon": r.min_epsilon,
                    "bound": r.variable_bound,
                    "published_bound": pub[2] if pub else None,
                }
            )
    return rows


def render_reduction(table: ReductionTable, fmt: str) -> str:
    """Tables 2-5 analogues as json, csv or markdown text."""
    rows = reduction_rows(table)
    if fmt == "json":
        return json.dumps(table.as_dict(), indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "variable", "g", "q_index", "epsilon", "bound", "published_bound"])
        for r in rows:
            w.writerow([r["step"], r["variable"], r["g"], r["q_index"], eps2(r["epsilon"]), r["bound"], r["published_bound"]])
        return buf.getvalue()
    else:
        lines = []
        for s in range(1, 5):
            v = STEP_VARIABLE[s]
            lines += [f"Step {s}: bound on {v}", "", f"| g | q-index | epsilon >= | {v} <= |", "|---|---|---|---|"]
            for r in rows:
                if r["step"] == s:
                    lines.append(f"| {r['g']} | q_{r['q_index']} | {eps2(r['epsilon'])} | {r['bound']} |")
            lines.append("")
        gm = table.global_max()
        lines.append("Overall: " + ", ".join(f"{v} <= {b}" for v, b in gm.items()))
        return "\n".join(lines) + "\n"


def cmd_reduce(args, out) -> int:
    caps = tuple(args.caps) if args.caps else PUBLISHED_CAPS
    try:
        table = full_reduction(
            _bases(args),
            caps,
            policy=args.policy,
            precision=args.precision,
            window=args.window,
            jobs=args.jobs,
            max_window=args.max_window,
        )
    except InconclusiveReduction as e:
        print(f"inconclusive reduction: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    _emit(render_reduction(table, args.format), out)
    return EXIT_OK


# ---------------------------------------------------------------- search / oracle / verify


def render_records(records, fmt: str) -> str:
    if fmt == "markdown":
        return records_markdown(records) + "\n"
    if fmt == "csv":
        return records_csv(records) + "\n"
    return "".join(r.to_json() + "\n" for r in records)


def _search_config(args) -> SearchConfig:
    bases = _bases(args)
    t_map = {g: args.t_max if args.t_max else REDUCED_T_BOUNDS[g] for g in range(2, 13)}
    if args.g is not None and sorted(bases) != list(range(min(bases), max(bases) + 1)):
        raise ValueError("--g values must form a contiguous range")
    return SearchConfig(min(bases), max(bases), args.k_max, t_map, args.jobs)


def cmd_search(args, out) -> int:
    records = search_all(_search_config(args))
    out.write(render_records(records, args.format))
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    bases = _bases(args) if args.g is not None else [2, 3, 4, 5]
    ok = True
    lines = []
    for g in bases:
        brute = brute_force_oracle(g, args.k_max, args.t_max)
        fast = search_all(SearchConfig.uniform(g, g, args.k_max, args.t_max))
        same = brute == fast
        ok &= same
        lines.append(f"g={g}: {len(fast)} records, {'agree' if same else 'DIFFER'}")
    _emit("\n".join(lines), out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args, out) -> int:
    records = search_all(SearchConfig(k_max=args.k_max, parallelism=args.jobs))
    report = verify_table1(records)
    _emit(report.summary(), out)
    return EXIT_OK if report.clean else EXIT_FAIL


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="narep", description="Narayana numbers that are products of four repdigits.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="decimal digits (default %(default)s)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", parents=[common], help="absolute bounds from linear forms in logarithms")
    b.add_argument("--g", type=int, action="append")
    b.add_argument("--format", choices=("json", "markdown", "csv"), default="markdown")

    r = sub.add_parser("reduce", parents=[common], help="Dujella-Petho reduction tables")
    r.add_argument("--g", type=int, action="append")
    r.add_argument("--all", action="store_true", help="every base 2..12 (the default)")
    r.add_argument("--policy", choices=("best", "first"), default="best")
    r.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="convergents examined per instance")
    r.add_argument("--max-window", type=int, default=MAX_WINDOW, help="largest window tried before giving up")
    r.add_argument("--caps", type=int, nargs=3, metavar=("L", "M", "N"), help="exponent caps (default 257 265 271)")
    r.add_argument("--format", choices=("json", "markdown", "csv"), default="markdown")

    s = sub.add_parser("search", parents=[common], help="search for solutions")
    s.add_argument("--g", type=int, action="append")
    s.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    s.add_argument("--t-max", type=int, help="one length bound for all bases (default: reduced bounds)")
    s.add_argument("--format", choices=("json", "markdown", "csv"), default="json")

    o = sub.add_parser("oracle", parents=[common], help="compare the search with brute force")
    o.add_argument("--g", type=int, action="append")
    o.add_argument("--k-max", type=int, default=30)
    o.add_argument("--t-max", type=int, default=8)

    v = sub.add_parser("verify", parents=[common], help="check a golden table")
    v.add_argument("target", choices=("table1",))
    v.add_argument("--k-max", type=int, default=2000)
    return p


def _validate(args, parser: argparse.ArgumentParser) -> None:
    if args.precision < 50:
        parser.error("--precision must be >= 50")
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    for g in getattr(args, "g", None) or []:
        if not 2 <= g <= 12:
            parser.error(f"--g {g}: bases must lie in 2..12")
    if getattr(args, "k_max", 1) < 1:
        parser.error("--k-max must be >= 1")
    t = getattr(args, "t_max", None)
    if t is not None and t < 1:
        parser.error("--t-max must be >= 1")
    if args.command == "reduce":
        if args.all and args.g:
            parser.error("--all and --g are mutually exclusive")
        if args.window < 1 or args.max_window < 1:
            parser.error("--window must be >= 1")
        if args.caps and not 1 <= args.caps[0] <= args.caps[1] <= args.caps[2]:
            parser.error("--caps must be non-decreasing positive integers")
    if args.command == "search" and args.g:
        gs = sorted(set(args.g))
        if gs != list(range(gs[0], gs[-1] + 1)):
            parser.error("--g values must form a contiguous range")


COMMANDS = {"bounds": cmd_bounds, "reduce": cmd_reduce, "search": cmd_search, "oracle": cmd_oracle, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as out:
            return COMMANDS[args.command](args, out)
    return COMMANDS[args.command](args, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
