"""Composite per-instance report combining every pipeline stage."""
from __future__ import annotations

import random
from itertools import combinations

from .bounds import kk_recurrence
from .graph import analyze, diameter
from .hrep import HPolyhedron, read_hrep
from .kkpath import balls_intersect, is_valid_walk, kk_path, verify_q_lemma
from .vertices import is_bounded, redundant_rows

SAMPLE_THRESHOLD = 200
SAMPLE_PAIRS = 64


def vertex_pairs(n_vertices: int, exhaustive: bool = False, seed: int = 0,
                 threshold: int = SAMPLE_THRESHOLD, k: int = SAMPLE_PAIRS) -> tuple:
    """Unordered pairs ``v < u``: all of them, or ``k`` seeded samples above
    ``threshold`` vertices. Returns ``(pairs, sampled)``."""
    pairs = list(combinations(range(n_vertices), 2))
    if exhaustive or n_vertices <= threshold or len(pairs) <= k:
        return pairs, False
    return sorted(random.Random(seed).sample(pairs, k)), True


def kk_stats(P: HPolyhedron, pairs) -> dict:
    an = analyze(P)
    G, inc = an.graph, an.incidence
    n = an.n_irredundant
    bound = kk_recurrence(P.dim, n)
    max_len, violations, pigeonhole_failures = 0, [], []
    for v, u in pairs:
        trace = kk_path(P, G, inc, v, u)
        dist = an.distances(v)[u]
        ok = is_valid_walk(G, trace.path, v, u) and dist <= trace.length <= bound
        if not ok:
            violations.append([v, u, trace.length, dist])
        if not balls_intersect(G, inc, v, u, n):
            pigeonhole_failures.append([v, u])
        max_len = max(max_len, trace.length)
    return {
        "pairs": len(pairs),
        "max_length": max_len,
        "bound": bound,
        "violations": violations,
        "pigeonhole_failures": pigeonhole_failures,
        "all_valid": not violations and not pigeonhole_failures,
    }


def q_lemma_stats(P: HPolyhedron) -> dict:
    an = analyze(P)
    reports = [verify_q_lemma(P, v) for v in range(an.graph.n_vertices)]
    counts = {}
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    return {"counts": counts, "per_vertex": [r.to_dict() for r in reports]}


def full_report(source, exhaustive: bool = False, seed: int = 0) -> dict:
    """Run every stage on a polyhedron or ``.ine`` path.

    A failing stage is recorded under ``stages`` and later stages that
    depend on it are marked skipped; the document is always returned.
    """
    doc = {"input": str(source) if not isinstance(source, HPolyhedron) else None, "stages": {}}
    stages = doc["stages"]

    def stage(name, fn):
        try:
            result = fn()
        except Exception as exc:  # noqa: BLE001 - partial reports are the contract
            stages[name] = {"status": "failed", "error": f"{type(exc).__name__}: {exc}"}
            return None
        stages[name] = {"status": "ok"}
        return result

    P = source if isinstance(source, HPolyhedron) else stage("parse", lambda: read_hrep(source))
    if isinstance(source, HPolyhedron):
        stages["parse"] = {"status": "ok"}
    an = P and stage("enumerate", lambda: analyze(P))
    if an is None:
        for name in ("diameter", "kk_paths", "q_lemma"):
            stages[name] = {"status": "skipped"}
        doc["summary"] = "FAILED before enumeration: " + next(
            s["error"] for s in stages.values() if s["status"] == "failed"
        )
        return doc
    doc.update(d=P.dim, n=P.n, vertices=an.graph.n_vertices, edges=an.graph.n_edges)
    doc["redundant_rows"] = sorted(redundant_rows(P, an.vertices))
    doc["bounded"] = stage("boundedness", lambda: is_bounded(P))
    rep = stage("diameter", lambda: diameter(an.graph))
    doc["diameter"] = rep.to_dict() if rep else None
    connected = rep is not None and rep.connected
    if connected:
        pairs, sampled = vertex_pairs(an.graph.n_vertices, exhaustive, seed)
        doc["kk"] = stage("kk_paths", lambda: kk_stats(P, pairs))
        if doc["kk"] is not None:
            doc["kk"]["sampled"] = sampled
        doc["q_lemma"] = stage("q_lemma", lambda: q_lemma_stats(P))
    else:
        stages["kk_paths"] = stages["q_lemma"] = {"status": "skipped", "reason": "graph disconnected"}

    failed = [k for k, s in stages.items() if s["status"] == "failed"]
    parts = [f"d={P.dim} n={rep.n_irredundant if rep else P.n} vertices={an.graph.n_vertices}"]
    if rep:
        parts.append(f"diameter={rep.diameter if connected else 'unbounded'}")
    if doc.get("kk"):
        parts.append(f"kk_max={doc['kk']['max_length']}<=f={doc['kk']['bound']}")
    if doc.get("q_lemma"):
        parts.append("q_lemma=" + ",".join(f"{k}:{v}" for k, v in sorted(doc["q_lemma"]["counts"].items())))
    parts.append("FAILED stages: " + ",".join(failed) if failed else "all stages ok")
    doc["summary"] = " ".join(parts)
    return doc
