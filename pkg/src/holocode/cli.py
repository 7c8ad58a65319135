"""Command-line entry point.

Exit codes: 0 success, 2 bad input or non-hyperbolic tiling, 3 internal
simulator inconsistency.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import analysis
from .geometry import NotHyperbolicError, SchlafliPair, bound, classify, tile_geometry
from .inflation import (
    census_code_rate,
    census_system,
    gamma,
    growth_system,
)
from .tiling import (
    CENSUS_COLUMNS,
    SeedKind,
    TilingError,
    census_rows,
    simulate,
    verify_growth_matrix,
    verify_isoperimetric,
)

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 3
DEFAULT_PRECISION = 6


class UsageError(Exception):
    pass


def _fmt(value, precision):
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{precision}f}"
    if isinstance(value, Fraction):
        return _fmt(float(value), precision)
    return str(value)


def _json_value(value, precision):
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, float):
        return float(f"{value:.{precision}f}")
    return value


def render_rows(rows, columns, fmt, precision) -> str:
    if fmt == "json":
        data = [{c: _json_value(r.get(c), precision) for c in columns} for r in rows]
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    cells = [[_fmt(r.get(c), precision) for c in columns] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return buf.getvalue()
    widths = [max(len(c), *(len(row[i]) for row in cells)) if cells else len(c)
              for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def render_record(record: dict, fmt, precision) -> str:
    if fmt == "pretty":
        width = max(len(k) for k in record)
        return "".join(f"{k.ljust(width)}  {_fmt(v, precision)}\n" for k, v in record.items())
    if fmt == "json":
        data = {k: _json_value(v, precision) for k, v in record.items()}
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    return render_rows([record], list(record), fmt, precision)


def _pair(p, q) -> SchlafliPair:
    try:
        pq = SchlafliPair(p, q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pq.require_hyperbolic()
    return pq


def cmd_bound(args) -> str:
    pq = _pair(args.p, args.q)
    geo = tile_geometry(pq)
    record = {"p": pq.p, "q": pq.q, "curvature": classify(pq).value,
              "side_length": geo.side_length, "area": geo.area, "bound": geo.bound}
    return render_record(record, args.format, args.precision)


def cmd_rate(args) -> str:
    pq = _pair(args.p, args.q)
    system = growth_system(pq)
    (m11, m12), (m21, m22) = system.matrix.entries
    rate, chi = system.code_rate, bound(pq)
    record = {
        "p": pq.p, "q": pq.q,
        "gamma": float(gamma(pq)),
        "growth_rate": system.growth_rate,
        "m11": m11, "m12": m12, "m21": m21, "m22": m22,
        "u1": system.growth_vector[0], "u2": system.growth_vector[1],
        "code_rate": rate,
        "bound": chi,
        "ratio": rate / chi,
        "qec": "yes" if rate < 1 else "no",
        "census_code_rate": census_code_rate(pq),
    }
    return render_record(record, args.format, args.precision)


SCAN_COLUMNS = ("p", "q_min", "q_max", "q_opt", "best_bound", "q1_estimate")


def cmd_scan(args) -> str:
    if not 3 <= args.p_from <= args.p_to:
        raise UsageError(f"need 3 <= p_from <= p_to, got {args.p_from}..{args.p_to}")
    rows = [vars(analysis.range_report(p)) for p in range(args.p_from, args.p_to + 1)]
    return render_rows(rows, SCAN_COLUMNS, args.format, args.precision)


def cmd_simulate(args) -> str:
    pq = _pair(args.p, args.q)
    try:
        kind = SeedKind.parse(args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.layers < 1:
        raise UsageError("--layers must be >= 1")
    _, censuses = simulate(pq, kind, max_layers=args.layers, max_boundary=args.max_boundary)

    published = growth_system(pq)
    rows = census_rows(censuses, published.edge_vector)
    for row, census in zip(rows, censuses):
        row["isoperimetric"] = verify_isoperimetric(census, pq)
    summary = {
        "p": pq.p, "q": pq.q, "seed": kind.value, "layers": censuses[-1].layer,
        "empirical_rate": rows[-1]["empirical_rate"],
        "code_rate": published.code_rate,
        "census_code_rate": census_code_rate(pq),
        "isoperimetric_all": all(r["isoperimetric"] for r in rows),
    }
    if len(censuses) >= 4:
        check = verify_growth_matrix(censuses, published)
        fitted = verify_growth_matrix(censuses, census_system(pq))
        summary.update({
            "matrix_ok": check.ok, "transient": check.transient,
            "census_matrix_ok": fitted.ok, "census_transient": fitted.transient,
            "two_class_from": fitted.two_class_from,
        })
    else:
        summary.update({"matrix_ok": None, "transient": None, "census_matrix_ok": None,
                        "census_transient": None, "two_class_from": None})

    columns = (*CENSUS_COLUMNS, "isoperimetric")
    fmt, prec = args.format, args.precision
    if fmt == "json":
        data = {"layers": json.loads(render_rows(rows, columns, fmt, prec)),
                "summary": json.loads(render_record(summary, fmt, prec))}
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    body = render_rows(rows, columns, fmt, prec)
    if fmt == "csv":
        return body + "".join(f"# {k}={_fmt(v, prec)}\n" for k, v in summary.items())
    return body + "\n" + render_record(summary, fmt, prec)


def _table_blocks():
    return [
        ("table_1", analysis.table_code_rates(), ("p", "q", "code_rate", "bound", "ratio")),
        ("table_2", analysis.table_best_bounds(), ("p", "q_opt", "best_bound")),
        ("table_3", analysis.table_ranges(), ("p", "q_min", "q_max", "q1_estimate")),
    ]


def cmd_tables(args) -> str:
    prec = 3 if args.precision is None else args.precision
    blocks = []
    for name, rows, columns in _table_blocks():
        rows = [{k: analysis.round3(v, prec) if isinstance(v, float) else v for k, v in r.items()}
                for r in rows]
        blocks.append((name, rows, columns))
    if args.format == "json":
        data = {name: json.loads(render_rows(rows, cols, "json", prec)) for name, rows, cols in blocks}
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    out = []
    for name, rows, columns in blocks:
        out.append(f"# {name}\n" + render_rows(rows, columns, args.format, prec))
    return "\n".join(out)


def cmd_figures(args) -> str:
    try:
        rows = analysis.figure_data(args.fig_id, args.limit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return render_rows(rows, analysis.FIGURE_COLUMNS, args.format, args.precision)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "pretty"), default="pretty")
    common.add_argument("--output", "-o", default="-", help="file path, '-' for stdout")
    common.add_argument("--precision", type=int, default=None,
                        help="decimal places (default 6; 3 for tables)")

    parser = argparse.ArgumentParser(prog="holocode", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="tile side, area and code-rate bound")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("rate", parents=[common], help="tile-completion growth algebra and code rate")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("scan", parents=[common], help="q_min, q_max, q_opt per p")
    p.add_argument("p_from", type=int)
    p.add_argument("p_to", type=int)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("simulate", parents=[common], help="grow a patch and report per-layer censuses")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--seed", default="tile", help="tile, edge or vertex")
    p.add_argument("--layers", type=int, default=8)
    p.add_argument("--max-boundary", type=int, default=10**6)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tables", parents=[common], help="reproduce the three published tables")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("figures", parents=[common], help="(x, y) series for figures 1-4")
    p.add_argument("fig_id", type=int)
    p.add_argument("--limit", type=int, default=40, help="largest value of the free entry")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision is None and args.command != "tables":
        args.precision = DEFAULT_PRECISION
    try:
        text = args.func(args)
    except (UsageError, NotHyperbolicError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TilingError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
