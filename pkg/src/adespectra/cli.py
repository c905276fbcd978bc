"""``adespectra`` command line.

Exit codes: 0 ok, 1 a verification failed, 2 usage error or unknown graph,
3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from .algebra import Poly, RationalFunction, frac_str, series_expand
from .checks import DEFAULT_K_MAX, Check, all_checks, graph_checks, symbolic_checks
from .cyclotomic import decompose
from .errors import AdeSpectraError
from .graphs import GraphName, build_graph, default_catalog, loop_counts, symbolic_catalog, truncate_infinite
from .measures import CycloMeasure, MeasureAtom, catalog_measure, point_weights, verify_measure
from .recursion import SEEDS, cyclotomic_simplify, seed_builder, seed_family, verify_family
from .series import series_bundle

SCHEMA = "1"

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


# argument helpers ----------------------------------------------------------------


def parse_graph(text: str) -> GraphName:
    try:
        return GraphName.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_measure(text: str) -> CycloMeasure:
    """A JSON object ``{"AlphaRoots(4)": "1/1", ...}`` or a single atom name."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return CycloMeasure.from_json(json.loads(text))
        return CycloMeasure({MeasureAtom.parse(text): 1})
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad measure {text!r}: {exc}") from None


_TERM_RE = re.compile(r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(q(?:\^(\d+))?)?")


def parse_poly(text: str) -> Poly:
    """Small polynomial grammar for ``--perturb-theta``: ``q^3``, ``-2*q^5 + q``."""
    s = text.replace(" ", "")
    if not s:
        raise UsageError("empty polynomial")
    coeffs: dict[int, Any] = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise UsageError(f"cannot parse polynomial {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        e = 0 if not m.group(3) else int(m.group(4) or 1)
        coeffs[e] = coeffs.get(e, 0) + sign * c
        pos = m.end()
    return Poly([coeffs.get(i, 0) for i in range(max(coeffs) + 1)])


def format_witness(witness: dict) -> str:
    parts = []
    for k, v in witness.items():
        mag = "" if abs(v) == 1 else f"{abs(v)}*"
        parts.append(("-" if v < 0 else "+", f"{mag}{k}"))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return text + "".join(f" {sgn} {body}" for sgn, body in parts[1:])


def factored(f: RationalFunction) -> str:
    return cyclotomic_simplify(f).format()


# JSON ------------------------------------------------------------------------------


def emit_json(report: dict) -> bytes:
    """Compact, key-order-preserving JSON; records are built in a fixed order."""
    return json.dumps(report, separators=(",", ":"), ensure_ascii=True).encode("ascii")


def graph_record(name: GraphName, k_max: int = DEFAULT_K_MAX) -> dict:
    t0 = time.perf_counter()
    g = build_graph(name)
    bundle = series_bundle(g, 0)
    entry = catalog_measure(name)
    checks = graph_checks(name, k_max)
    _, dec = decompose(bundle.t_series)
    rec: dict[str, Any] = {
        "graph": str(name),
        "vertex_count": g.vertex_count,
        "loops": loop_counts(g, k_max),
        "t_series": {"factored": factored(bundle.t_series), **bundle.t_series.to_json()},
    }
    if entry.measure is not None:
        rec["measure"] = entry.measure.to_json()
        rec["measure_formula"] = entry.formula
    else:
        rec["measure"] = {"cyclotomic": False}
        rec["measure_formula"] = entry.formula
    rec["decomposition"] = dec.to_json()
    rec["checks"] = {c.name: c.ok for c in checks}
    rec["ok"] = all(c.ok for c in checks)
    rec["seconds"] = f"{time.perf_counter() - t0:.3f}"
    return rec


def _select(names: Sequence[str], use_all: bool, pattern: str | None) -> list[GraphName]:
    if names:
        chosen = [parse_graph(n) for n in names]
    elif use_all or pattern is not None:
        chosen = default_catalog()
    else:
        raise UsageError("give graph names or --all")
    if pattern is not None:
        rx = re.compile(pattern, re.IGNORECASE)
        chosen = [n for n in chosen if rx.fullmatch(str(n))]
    for n in chosen:
        if not n.is_finite:
            raise UsageError(f"{n} is infinite; reports cover finite graphs")
    return chosen


def _parallel_map(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# verbs ------------------------------------------------------------------------------


def cmd_catalog(args, out) -> int:
    rows = []
    for name in default_catalog() + symbolic_catalog():
        e = catalog_measure(name)
        rows.append((str(name), e.formula, "yes" if e.cyclotomic else "no"))
    if args.format == "json":
        data = {
            "schema": SCHEMA,
            "catalog": [{"graph": g, "measure": f, "cyclotomic": c == "yes"} for g, f, c in rows],
        }
        out.write(emit_json(data).decode() + "\n")
        return EXIT_OK
    w = max(len(r[0]) for r in rows)
    for g, f, _ in rows:
        out.write(f"{g:<{w}}  {f}\n")
    return EXIT_OK


def cmd_loops(args, out) -> int:
    name = parse_graph(args.graph)
    if args.max_k < 0:
        raise UsageError("--max-k must be nonnegative")
    if name.is_finite:
        g = build_graph(name)
    else:
        g = truncate_infinite(name, 2 * args.max_k + 2)
    counts = loop_counts(g, args.max_k)
    if args.format == "json":
        out.write(emit_json({"schema": SCHEMA, "graph": str(name), "loops": counts}).decode() + "\n")
    else:
        out.write(", ".join(map(str, counts)) + "\n")
    return EXIT_OK


def cmd_series(args, out) -> int:
    name = parse_graph(args.graph)
    if not name.is_finite:
        e = catalog_measure(name)
        if args.kind != "t":
            raise UsageError("only --kind t is available for infinite graphs")
        f, var = e.t_series, "q"
    else:
        bundle = series_bundle(build_graph(name), 0)
        f, var = {"poincare": (bundle.poincare, "z"), "theta": (bundle.theta, "q"), "t": (bundle.t_series, "q")}[
            args.kind
        ]
    closed = factored(f) if var == "q" else f.format("z")
    trunc = series_expand(f, args.order)
    if args.format == "json":
        data = {
            "schema": SCHEMA,
            "graph": str(name),
            "kind": args.kind,
            "closed_form": closed,
            **f.to_json(),
            "coefficients": [frac_str(c) for c in trunc.coeffs],
        }
        out.write(emit_json(data).decode() + "\n")
    else:
        out.write(closed + "\n")
        out.write(trunc.format(var) + "\n")
    return EXIT_OK


def cmd_measure(args, out) -> int:
    name = parse_graph(args.graph)
    e = catalog_measure(name)
    if args.format == "json":
        data: dict[str, Any] = {"schema": SCHEMA, "graph": str(name), "formula": e.formula}
        data["measure"] = e.measure.to_json() if e.measure is not None else {"cyclotomic": False}
        data["t_series"] = factored(e.t_series)
        out.write(emit_json(data).decode() + "\n")
        return EXIT_OK
    out.write(f"{name}: {e.formula}\n")
    if e.measure is None:
        out.write(f"not cyclotomic; T = {factored(e.t_series)}\n")
        return EXIT_OK
    out.write(f"  = {e.measure}\n")
    out.write(f"T = {factored(e.t_series)}\n")
    if args.weights:
        w = point_weights(e.measure, args.digits)
        for label, c in w["continuous"].items():
            out.write(f"  continuous part {label}: coefficient {c}\n")
        for t, weight in w["points"]:
            out.write(f"  exp(2 pi i * {t}): {weight}\n")
    return EXIT_OK


def _report_checks(checks: list[Check], out, fmt: str, elapsed: float) -> int:
    failed = [c for c in checks if not c.ok]
    if fmt == "json":
        data = {
            "schema": SCHEMA,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks],
            "failed": len(failed),
            "seconds": f"{elapsed:.3f}",
        }
        out.write(emit_json(data).decode() + "\n")
    else:
        for c in checks:
            line = f"{'PASS' if c.ok else 'FAIL'}  {c.name}"
            if c.detail and not c.ok:
                line += f"  ({c.detail})"
            out.write(line + "\n")
        out.write(f"{len(checks)} checks, {len(failed)} failed, {elapsed:.2f}s\n")
        for c in failed:
            out.write(f"failed identity: {c.name}\n")
    return EXIT_FAILED if failed else EXIT_OK


def _graph_checks_job(payload):
    name, k_max = payload
    return graph_checks(name, k_max)


def cmd_verify(args, out) -> int:
    t0 = time.perf_counter()
    override = parse_measure(args.measure) if args.measure else None
    shift = RationalFunction(parse_poly(args.perturb_theta)) if args.perturb_theta else None
    if args.all:
        if args.graph or override is not None or shift is not None:
            raise UsageError("--all takes no graph, --measure or --perturb-theta")
        if args.jobs > 1:
            parts = _parallel_map(_graph_checks_job, [(n, args.max_k) for n in default_catalog()], args.jobs)
            checks = [c for p in parts for c in p]
            rest = all_checks(args.max_k, names=[])
            checks += rest
        else:
            checks = all_checks(args.max_k)
    elif args.graph:
        name = parse_graph(args.graph)
        if name.is_finite:
            checks = graph_checks(name, args.max_k, measure=override, theta_shift=shift)
        else:
            if shift is not None:
                raise UsageError("--perturb-theta needs a finite graph")
            if override is None:
                checks = [c for c in symbolic_checks(args.max_k) if c.name.startswith(f"{name}:")]
            else:
                checks = [
                    Check(
                        f"{name}: measure moments = truncated loop counts (2k <= {2 * args.max_k})",
                        verify_measure(name, override, args.max_k),
                    )
                ]
    else:
        raise UsageError("give a graph name or --all")
    return _report_checks(checks, out, args.format, time.perf_counter() - t0)


def cmd_decompose(args, out) -> int:
    name = parse_graph(args.graph)
    if not name.is_finite:
        raise UsageError("decompose needs a finite graph")
    if args.period is not None and args.period < 1:
        raise UsageError("--period must be positive")
    t = series_bundle(build_graph(name), 0).t_series
    system, dec = decompose(t, args.period)
    if args.format == "json":
        data = {"schema": SCHEMA, "graph": str(name), **dec.to_json()}
        out.write(emit_json(data).decode() + "\n")
        return EXIT_OK
    out.write(f"{name}: {dec.summary()}\n")
    if dec.feasible:
        out.write(f"  minimum-support solution: {dec.measure}\n")
        out.write(f"  back-substitution solution: {CycloMeasure(dec.rref_solution)}\n")
        out.write(f"  solution-space dimension: {dec.nullity}\n")
    else:
        out.write(f"  witness: {format_witness(dec.witness)}\n")
        out.write("  (this combination of columns vanishes on every P_n, Q_m row but not on R)\n")
    return EXIT_OK


def _record_job(payload):
    name, k_max = payload
    return graph_record(name, k_max)


def cmd_report(args, out) -> int:
    names = _select(args.graphs, args.all, args.filter)
    records = _parallel_map(_record_job, [(n, args.max_k) for n in names], args.jobs)
    report = {"schema": SCHEMA, "graphs": records}
    if args.format == "json":
        out.write(emit_json(report).decode() + "\n")
    else:
        for r in records:
            mark = "ok" if r["ok"] else "FAILED"
            out.write(f"{r['graph']:<12} {mark:<6} T = {r['t_series']['factored']}\n")
            out.write(f"{'':<12} measure: {r['measure_formula']}\n")
            dec = r["decomposition"]
            out.write(f"{'':<12} decomposition: {'feasible' if dec['feasible'] else 'infeasible'} (period {dec['period']})\n")
    return EXIT_OK if all(r["ok"] for r in records) else EXIT_FAILED


def cmd_family(args, out) -> int:
    if args.name not in SEEDS:
        raise UsageError(f"unknown family {args.name!r}; choose from {', '.join(SEEDS)}")
    seed = SEEDS[args.name]
    fam = seed_family(args.name)
    res = verify_family(fam, seed_builder(args.name), args.k_max)
    out.write(f"{seed.name}: X_k = {seed.description} ({seed.kind})\n")
    out.write(f"P = {fam.P.format()}\n")
    for k in range(args.k_max + 1):
        out.write(f"  k={k} {seed.graph(k):<12} T = {factored(series_bundle(build_graph(seed.graph(k)), 0).t_series)}\n")
    out.write("recursion agrees with the resolvent\n" if res else f"mismatch at k={res.failing_k}\n")
    return EXIT_OK if res else EXIT_FAILED


# parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adespectra", description="Spectral measures of ADE-type graphs.")
    sub = p.add_subparsers(dest="verb", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=("table", "json"), default="table")

    sp = sub.add_parser("catalog", help="list graphs and their measures")
    fmt(sp)
    sp.set_defaults(fn=cmd_catalog)

    sp = sub.add_parser("loops", help="loop counts loop(0), loop(2), ..., loop(2K)")
    sp.add_argument("graph")
    sp.add_argument("--max-k", type=int, default=DEFAULT_K_MAX)
    fmt(sp)
    sp.set_defaults(fn=cmd_loops)

    sp = sub.add_parser("series", help="Poincare, Theta or T series")
    sp.add_argument("graph")
    sp.add_argument("--kind", choices=("poincare", "theta", "t"), default="t")
    sp.add_argument("--order", type=int, default=DEFAULT_K_MAX)
    fmt(sp)
    sp.set_defaults(fn=cmd_series)

    sp = sub.add_parser("measure", help="catalog measure of a graph")
    sp.add_argument("graph")
    sp.add_argument("--weights", action="store_true", help="print numeric point masses (display only)")
    sp.add_argument("--digits", type=int, default=20)
    fmt(sp)
    sp.set_defaults(fn=cmd_measure)

    sp = sub.add_parser("verify", help="run the verification suite")
    sp.add_argument("graph", nargs="?")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--max-k", type=int, default=DEFAULT_K_MAX)
    sp.add_argument("--measure", help="use this measure instead of the catalog one")
    sp.add_argument("--perturb-theta", metavar="POLY", help="add POLY to the computed Theta-series")
    sp.add_argument("--jobs", type=int, default=1)
    fmt(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("decompose", help="cyclotomic decomposition of the T-series")
    sp.add_argument("graph")
    sp.add_argument("--period", type=int)
    fmt(sp)
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("report", help="full per-graph report")
    sp.add_argument("graphs", nargs="*")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--filter", help="regular expression on graph names")
    sp.add_argument("--max-k", type=int, default=DEFAULT_K_MAX)
    sp.add_argument("--jobs", type=int, default=1)
    fmt(sp)
    sp.set_defaults(fn=cmd_report)

    sp = sub.add_parser("family", help="tail-recursion family check")
    sp.add_argument("name", help=", ".join(SEEDS))
    sp.add_argument("--k-max", type=int, default=5)
    sp.set_defaults(fn=cmd_family)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args, out)
    except (UsageError, ValueError, KeyError) as exc:
        sys.stderr.write(f"adespectra: error: {exc}\n")
        return EXIT_USAGE
    except (AdeSpectraError, ArithmeticError, AssertionError) as exc:
        sys.stderr.write(f"adespectra: internal error: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
