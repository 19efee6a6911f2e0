"""``polydiam`` command line interface.

Exit status: 0 on success, 1 for bad input (missing file, parse error,
invalid polyhedron or vertex id), 2 when an internal invariant fails.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .bounds import comparison_bounds, kk_recurrence, quasipoly_bound, verify_theorem_grid
from .generators import FAMILIES, FamilySpec, generate
from .graph import build_graph, diameter
from .hrep import HRepParseError, PolyhedronError, read_hrep, serialize_hrep
from .kkpath import InvariantViolation, NoCommonFacetError, is_valid_walk, kk_path, verify_q_lemma
from .linalg import format_rational, parse_rational
from .report import full_report
from .vertices import enumerate_vertices

log = logging.getLogger("polydiam")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    output_format: str = "text"
    jobs: int = 1
    verbosity: int = 0
    seed: int = 0
    options: dict = field(default_factory=dict)


def _dump(obj, out) -> None:
    json.dump(obj, out, indent=2, sort_keys=False)
    out.write("\n")


def _finish(summary: str, cfg: RunConfig, out) -> None:
    # keep machine-readable stdout parseable; the summary line goes to stderr
    stream = sys.stderr if cfg.output_format in ("json", "csv") else out
    print(summary, file=stream)


def _cmd_gen(cfg, out):
    o = cfg.options
    params = {k: o[k] for k in ("d", "n", "m", "p", "q") if o.get(k) is not None}
    if o.get("eps") is not None:
        params["eps"] = parse_rational(o["eps"])
    params["seed"] = cfg.seed
    try:
        P = generate(FamilySpec(o["family"], params))
    except KeyError as exc:
        raise ValueError(f"family {o['family']!r} needs parameter --{exc.args[0]}") from None
    text = serialize_hrep(P)
    if o.get("output"):
        with open(o["output"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    _finish(f"generated {o['family']} d={P.dim} n={P.n}", cfg, sys.stderr if not o.get("output") else out)


def _cmd_vertices(cfg, out):
    P = read_hrep(cfg.inputs[0])
    vertices, _ = enumerate_vertices(P, method=cfg.options.get("method", "dd"), n_jobs=cfg.jobs)
    if cfg.output_format == "text":
        for v in vertices:
            coords = " ".join(format_rational(c) for c in v.coords)
            out.write(f"{v.id}: ({coords}) active={sorted(v.active_set)}\n")
    else:
        _dump([v.to_dict() for v in vertices], out)
    _finish(f"{len(vertices)} vertices, d={P.dim}, n={P.n}", cfg, out)


def _cmd_graph(cfg, out):
    P = read_hrep(cfg.inputs[0])
    vertices, inc = enumerate_vertices(P, n_jobs=cfg.jobs)
    G = build_graph(vertices, inc, P)
    if cfg.output_format == "text":
        for w, nbrs in enumerate(G.adjacency):
            out.write(f"{w}: {' '.join(map(str, nbrs))}\n")
    else:
        _dump({"vertices": G.n_vertices, "edges": G.edges()}, out)
    _finish(f"{G.n_vertices} vertices, {G.n_edges} edges", cfg, out)


def _cmd_diameter(cfg, out):
    P = read_hrep(cfg.inputs[0])
    vertices, inc = enumerate_vertices(P, n_jobs=cfg.jobs)
    rep = diameter(build_graph(vertices, inc, P))
    if cfg.output_format == "json":
        doc = rep.to_dict()
        doc.pop("eccentricities")
        _dump(doc, out)
    elif cfg.output_format == "csv":
        flat = {k: v for k, v in rep.to_dict().items() if k not in ("bounds", "checks", "eccentricities", "witness")}
        flat["witness"] = "-".join(map(str, rep.witness)) if rep.witness else ""
        flat.update(rep.bounds)
        flat.update(rep.checks)
        writer = csv.DictWriter(out, fieldnames=list(flat))
        writer.writeheader()
        writer.writerow(flat)
    else:
        for k, v in rep.to_dict().items():
            if k != "eccentricities":
                out.write(f"{k}: {v}\n")
    _finish(rep.summary(), cfg, out)


def _cmd_kk_path(cfg, out):
    P = read_hrep(cfg.inputs[0])
    v, u = cfg.options["from"], cfg.options["to"]
    trace = kk_path(P, v=v, u=u)
    from .graph import analyze

    an = analyze(P)
    if not is_valid_walk(an.graph, trace.path, v, u):
        raise InvariantViolation("assembled path is not a walk in the graph")
    if cfg.options.get("trace"):
        with open(cfg.options["trace"], "w", encoding="utf-8") as fh:
            _dump(trace.to_dict(), fh)
    if cfg.output_format == "json":
        _dump(trace.to_dict(), out)
    else:
        out.write("path: " + " ".join(map(str, trace.path)) + "\n")
        for depth, level in enumerate(trace.levels()):
            extra = ""
            if level.kind == "recursive":
                extra = f" k_v={level.k_v} k_u={level.k_u} facet={level.facet}"
            out.write(f"  level {depth}: d={level.d} n={level.n} {level.kind} length={level.length}{extra}\n")
    dist = an.distances(v)[u]
    _finish(f"{trace.summary()} (graph distance {dist})", cfg, out)


def _cmd_bounds(cfg, out):
    d, n = cfg.options["d"], cfg.options["n"]
    doc = comparison_bounds(d, n).to_dict()
    doc["quasipoly"] = quasipoly_bound(d, n)
    doc["kk_recurrence"] = kk_recurrence(d, n)
    if cfg.output_format == "json":
        _dump({"d": d, "n": n, **doc}, out)
    else:
        for k, v in doc.items():
            out.write(f"{k}: {'n/a' if v is None else v}\n")
    _finish(f"bounds at d={d} n={n}: f={doc['kk_recurrence']} quasipoly={doc['quasipoly']:.6g}", cfg, out)


def _cmd_verify(cfg, out):
    rep = verify_theorem_grid(cfg.options["dmax"], cfg.options["nmax"], keep_rows=cfg.output_format == "csv")
    if cfg.output_format == "csv":
        writer = csv.writer(out)
        writer.writerow(["d", "n", "f", "quasipoly", "holds"])
        writer.writerows(rep.rows)
    elif cfg.output_format == "json":
        _dump({
            "d_max": rep.d_max, "n_max": rep.n_max, "cells": rep.cells,
            "violations": rep.violations, "max_ratio": rep.max_ratio, "argmax": list(rep.argmax),
        }, out)
    _finish(rep.summary(), cfg, out)
    if not rep.passed:
        return EXIT_INTERNAL
    return EXIT_OK


def _cmd_q_lemma(cfg, out):
    P = read_hrep(cfg.inputs[0])
    from .graph import analyze

    an = analyze(P)
    targets = [cfg.options["vertex"]] if cfg.options.get("vertex") is not None else range(an.graph.n_vertices)
    reports = [verify_q_lemma(P, v) for v in targets]
    if cfg.output_format == "json":
        _dump([r.to_dict() for r in reports], out)
    else:
        for r in reports:
            out.write(f"v={r.v} k_v={r.k_v} |Q|={len(r.q_rows)} omegas={len(r.omegas)} {r.status} {r.reason}\n")
    counts = {}
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    _finish("q-lemma " + " ".join(f"{k}={v}" for k, v in sorted(counts.items())), cfg, out)
    return EXIT_INTERNAL if counts.get("fail") else EXIT_OK


def _cmd_report(cfg, out):
    if not os.path.exists(cfg.inputs[0]):
        raise FileNotFoundError(cfg.inputs[0])
    doc = full_report(cfg.inputs[0], exhaustive=cfg.options.get("exhaustive", False), seed=cfg.seed)
    _dump(doc, out)
    print(doc["summary"], file=sys.stderr)
    failed = [s for s in doc["stages"].values() if s["status"] == "failed"]
    return EXIT_INPUT if failed else EXIT_OK


COMMANDS = {
    "gen": _cmd_gen,
    "vertices": _cmd_vertices,
    "graph": _cmd_graph,
    "diameter": _cmd_diameter,
    "kk-path": _cmd_kk_path,
    "bounds": _cmd_bounds,
    "verify": _cmd_verify,
    "q-lemma": _cmd_q_lemma,
    "report": _cmd_report,
}


def run(cfg: RunConfig, out=None) -> int:
    out = out if out is not None else sys.stdout
    logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbosity, 2), format="%(levelname)s: %(message)s")
    try:
        status = COMMANDS[cfg.subcommand](cfg, out)
    except (InvariantViolation, NoCommonFacetError) as exc:
        print(f"polydiam: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except FileNotFoundError as exc:
        print(f"polydiam: no such file: {exc.filename or exc}", file=sys.stderr)
        return EXIT_INPUT
    except (HRepParseError, PolyhedronError, ValueError, IndexError, OSError) as exc:
        where = f"{cfg.inputs[0]}: " if cfg.inputs else ""
        print(f"polydiam: {where}{exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK if status is None else status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polydiam", description="Polyhedron graphs, diameters and recursive path certificates.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--jobs", type=int, default=None, help="worker processes (default: $POLYDIAM_THREADS or 1)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def fmt(p, choices=("text", "json")):
        group = p.add_mutually_exclusive_group()
        for c in choices:
            if c != "text":
                group.add_argument(f"--{c}", dest="output_format", action="store_const", const=c)
        p.set_defaults(output_format="text")

    g = sub.add_parser(
        "gen",
        help="write a generated instance",
        description=(
            "Families and their parameters: cube --d, simplex --d, cross --d (2..12), "
            "polygon --n, polygon-product --p --q, klee-minty --d [--eps p/q], "
            "random-tangent --d --m [--seed]."
        ),
    )
    g.add_argument("family", choices=FAMILIES)
    for name in ("d", "n", "m", "p", "q"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--eps", help="Klee-Minty deformation, rational in (0, 1/2)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")

    p = sub.add_parser("vertices", help="enumerate vertices")
    p.add_argument("file")
    p.add_argument("--method", choices=("dd", "brute"), default="dd")
    fmt(p)

    p = sub.add_parser("graph", help="print the vertex-edge graph")
    p.add_argument("file")
    fmt(p)

    p = sub.add_parser("diameter", help="diameter and bound checks")
    p.add_argument("file")
    fmt(p, ("text", "json", "csv"))

    p = sub.add_parser("kk-path", help="recursive path with certificate")
    p.add_argument("file")
    p.add_argument("--from", dest="from_", type=int, required=True)
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--trace", help="write the level-by-level trace as JSON")
    fmt(p)

    p = sub.add_parser("bounds", help="evaluate every bound formula at (d, n)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    fmt(p)

    p = sub.add_parser("verify", help="check the recurrence table against n^(log2 d + 2)")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    fmt(p, ("text", "json", "csv"))

    p = sub.add_parser("q-lemma", help="check distance preservation in the restricted polyhedron")
    p.add_argument("file")
    p.add_argument("--vertex", type=int)
    fmt(p)

    p = sub.add_parser("report", help="full JSON report for one instance")
    p.add_argument("file")
    p.add_argument("--exhaustive", action="store_true", help="all vertex pairs regardless of size")
    p.add_argument("--seed", type=int, default=0)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    skip = {"subcommand", "file", "output_format", "verbose", "jobs", "seed"}
    options = {k: v for k, v in vars(ns).items() if k not in skip}
    if "from_" in options:
        options["from"] = options.pop("from_")
    return RunConfig(
        subcommand=ns.subcommand,
        inputs=[ns.file] if getattr(ns, "file", None) else [],
        output_format=getattr(ns, "output_format", "json"),
        jobs=ns.jobs if ns.jobs is not None else int(os.environ.get("POLYDIAM_THREADS", "1")),
        verbosity=ns.verbose,
        seed=getattr(ns, "seed", 0) or 0,
        options=options,
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
