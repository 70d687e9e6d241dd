"""Valence and bigon lemmas for embedded graphs, checked one graph at a time
or exhaustively over an enumeration.

The single-graph checkers use plain Python walks over the rotation system;
campaigns use the numba batch checks.  Tests compare the two paths.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import get_context

import numpy as np

from . import checks as C
from .enumerate import Constraints, batches, edge_cap, CapExceeded, frontier, class_spec, _keep
from .graph import ContextMismatch, EmbeddedGraph, double, faces_and_genus, find_small_faces

HOLDS, VACUOUS, COUNTEREXAMPLE = "holds", "vacuous", "COUNTEREXAMPLE"
LEMMAS = ("sphere", "disk", "torus", "bigon-bound")


class HypothesisViolated(ValueError):
    def __init__(self, clauses: list[str]):
        super().__init__("hypotheses fail: " + "; ".join(clauses))
        self.clauses = clauses


@dataclass(frozen=True)
class Verdict:
    lemma: str
    status: str
    reason: str = ""
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.status != COUNTEREXAMPLE

    def to_json(self) -> dict:
        return {"lemma": self.lemma, "status": self.status, "reason": self.reason,
                "witness": self.witness}


# --- plain walks --------------------------------------------------------


def _vertices(G: EmbeddedGraph) -> list[list[int]]:
    """Rotation orbits, in order of their least dart."""
    seen, out = set(), []
    for d in range(len(G.rho)):
        if d in seen:
            continue
        orb, x = [], d
        while x not in seen:
            seen.add(x)
            orb.append(x)
            x = G.rho[x]
        out.append(orb)
    return out


def _valences(G: EmbeddedGraph):
    if G.isolated_vertex:
        return [0], [False]
    verts = _vertices(G)
    bdy = [any(G.outer[d] for d in orb) for orb in verts]
    return [len(orb) for orb in verts], bdy


def _small_face_reason(G: EmbeddedGraph) -> str:
    census = find_small_faces(G)
    if census.monogons:
        return "has a monogon"
    if census.bigons:
        return "has a bigon"
    return ""


def _boundary_is_cycle(G: EmbeddedGraph) -> bool:
    outer = [w for w in G.face_walks if G.is_outer_face(w)]
    if len(outer) != 1:
        return False
    w = outer[0]
    verts = _vertices(G)
    owner = {d: i for i, orb in enumerate(verts) for d in orb}
    return len({owner[d] for d in w}) == len(w) and len({d // 2 for d in w}) == len(w)


# --- the lemmas -----------------------------------------------------------


def check_sphere_lemma(G: EmbeddedGraph) -> Verdict:
    """Three vertices of valence below 6, for connected graphs on the sphere
    with no monogons or bigons other than a lone vertex or a lone edge."""
    if G.context != "sphere":
        raise ContextMismatch("sphere lemma needs a sphere graph")
    name = "sphere"
    if G.isolated_vertex:
        return Verdict(name, VACUOUS, "isolated vertex")
    if not G.connected:
        return Verdict(name, VACUOUS, "not connected")
    faces_and_genus(G)
    deg, _ = _valences(G)
    if G.n_edges == 1 and len(deg) == 2:
        return Verdict(name, VACUOUS, "single edge")
    why = _small_face_reason(G)
    if why:
        return Verdict(name, VACUOUS, why)
    low = [v for v, d in enumerate(deg) if d < 6]
    if len(low) >= 3:
        return Verdict(name, HOLDS, witness={"low_vertices": low[:3]})
    return Verdict(name, COUNTEREXAMPLE, witness={"graph": G.to_json(), "valences": deg})


def check_disk_lemma(G: EmbeddedGraph) -> Verdict:
    """An interior vertex of valence at most 5, or three boundary vertices
    of valence at most 3."""
    if G.context != "disk":
        raise ContextMismatch("disk lemma needs a disk graph")
    name = "disk"
    if not G.connected:
        return Verdict(name, VACUOUS, "not connected")
    faces_and_genus(G)
    if not _boundary_is_cycle(G):
        return Verdict(name, VACUOUS, "boundary is not a simple cycle of the graph")
    why = _small_face_reason(G)
    if why:
        return Verdict(name, VACUOUS, why)
    deg, bdy = _valences(G)
    inner = [v for v in range(len(deg)) if not bdy[v] and deg[v] <= 5]
    if inner:
        return Verdict(name, HOLDS, "interior vertex", {"vertex": inner[0], "valence": deg[inner[0]]})
    low = [v for v in range(len(deg)) if bdy[v] and deg[v] <= 3]
    if len(low) >= 3:
        return Verdict(name, HOLDS, "boundary vertices", {"vertices": low[:3]})
    return Verdict(name, COUNTEREXAMPLE, witness={"graph": G.to_json(), "valences": deg})


def disk_lemma_via_double(G: EmbeddedGraph) -> Verdict:
    """The disk statement read off the sphere lemma on the doubled graph."""
    name = "disk-via-double"
    D = double(G, "disk")
    s = check_sphere_lemma(D.graph)
    if s.status != HOLDS:
        return Verdict(name, s.status, "double: " + s.reason, s.witness)
    deg, _ = _valences(D.graph)
    low = [v for v, d in enumerate(deg) if d < 6]
    off = [v for v in low if v not in D.seam_vertices]
    if off:
        return Verdict(name, HOLDS, "interior vertex", {"vertex": off[0]})
    if len(low) >= 3:
        # a seam vertex of valence 2 + 2k below 6 has valence 2 + k <= 3 in G
        return Verdict(name, HOLDS, "boundary vertices", {"vertices": low[:3]})
    return Verdict(name, COUNTEREXAMPLE, witness={"graph": G.to_json()})


def check_torus_lemma(G: EmbeddedGraph) -> Verdict:
    if G.context != "torus":
        raise ContextMismatch("torus lemma needs a torus graph")
    name = "torus"
    if G.isolated_vertex or not G.rho:
        return Verdict(name, VACUOUS, "no edges")
    faces_and_genus(G)
    why = _small_face_reason(G)
    if why:
        return Verdict(name, VACUOUS, why)
    deg, _ = _valences(G)
    v = min(range(len(deg)), key=deg.__getitem__)
    if deg[v] <= 6:
        return Verdict(name, HOLDS, witness={"vertex": v, "valence": deg[v]})
    return Verdict(name, COUNTEREXAMPLE, witness={"graph": G.to_json(), "valences": deg})


def bigon_threshold(rtw: int, variant: str = "disk") -> Fraction:
    return Fraction(rtw, 6 if variant == "disk" else 8) - 1


def _schedule(G: EmbeddedGraph, rtw: int, deg, bdy, side_vertices=frozenset()):
    fails = []
    for v, d in enumerate(deg):
        if v in side_vertices:
            continue
        need = rtw // 2 + 1 if bdy[v] else rtw
        if d < need:
            fails.append(v)
    return fails


def _tagged_chains(G: EmbeddedGraph, tagged) -> int:
    """Longest edge-sharing chain of tagged triangles."""
    walks = G.face_walks
    parent = {f: f for f in tagged}

    def find(f):
        while parent[f] != f:
            f = parent[f]
        return f

    by_edge: dict[int, list[int]] = {}
    for f in tagged:
        for d in walks[f]:
            by_edge.setdefault(d // 2, []).append(f)
    for fs in by_edge.values():
        for f in fs[1:]:
            parent[find(f)] = find(fs[0])
    sizes: dict[int, int] = {}
    for f in tagged:
        sizes[find(f)] = sizes.get(find(f), 0) + 1
    return max(sizes.values(), default=0)


def check_bigon_bound(G: EmbeddedGraph, rtw: int, variant: str = "disk") -> Verdict:
    """Adjacent bigons forced by high valence.

    ``disk``: interior valence at least rtw and boundary valence at least
    rtw/2 + 1, apart from the vertices in ``G.exceptional`` (at most two),
    force a bigon family longer than rtw/6 - 1.  ``square``: the same
    schedule away from the marked sides forces a bigon family or a chain of
    tagged triangles longer than rtw/8 - 1.
    """
    if rtw < 2 or rtw % 2:
        raise ValueError("R_tw must be an even integer >= 2")
    if variant not in ("disk", "square"):
        raise ValueError(f"unknown variant {variant!r}")
    clauses = []
    if G.context != variant:
        clauses.append(f"context is {G.context}, not {variant}")
    if not G.connected:
        clauses.append("not connected")
    if not clauses:
        faces_and_genus(G)
        if not _boundary_is_cycle(G):
            clauses.append("boundary is not a simple cycle of the graph")
    census = find_small_faces(G)
    if census.monogons:
        clauses.append("has a monogon")
    deg, bdy = _valences(G)
    side_vertices = frozenset()
    if variant == "square":
        verts = _vertices(G)
        side_vertices = frozenset(
            v for v, orb in enumerate(verts)
            if sum(1 for d in orb if d // 2 in G.sides) == 2
            and deg[v] - 2 == 1)
        bad_side = [v for v, orb in enumerate(verts)
                    if sum(1 for d in orb if d // 2 in G.sides) == 2 and deg[v] - 2 != 1]
        if bad_side:
            clauses.append(f"side vertices {bad_side} do not have valence one")
    if len(G.exceptional) > 2:
        clauses.append(f"{len(G.exceptional)} exceptional vertices, at most 2 allowed")
    fails = [v for v in _schedule(G, rtw, deg, bdy, side_vertices) if v not in G.exceptional]
    if fails:
        clauses.append(f"vertices {fails} miss the valence schedule and are not exceptional")
    if clauses:
        raise HypothesisViolated(clauses)
    bound = bigon_threshold(rtw, variant)
    fam = census.longest
    length = fam.length if fam else 0
    wit = {"bound": str(bound), "family": fam.to_json() if fam else None}
    if length > bound:
        return Verdict("bigon-bound", HOLDS, "bigon family", wit)
    if variant == "square":
        chain = _tagged_chains(G, census.tagged_triangles)
        wit["triangle_chain"] = chain
        if chain > bound:
            return Verdict("bigon-bound", HOLDS, "tagged triangles", wit)
    wit["graph"] = G.to_json()
    return Verdict("bigon-bound", COUNTEREXAMPLE, witness=wit)


# --- campaigns ------------------------------------------------------------


def lemma_class(lemma: str, rtw: int | None = None) -> tuple[str, Constraints]:
    if lemma == "sphere":
        return "sphere", Constraints(3)
    if lemma == "disk":
        return "disk", Constraints(3)
    if lemma == "torus":
        return "torus", Constraints(3)
    if lemma == "bigon-bound":
        if rtw is None or rtw < 2 or rtw % 2:
            raise ValueError("bigon-bound needs an even --rtw >= 2")
        return "disk", Constraints(2, (rtw, rtw // 2 + 1), 2)
    raise ValueError(f"unknown lemma {lemma!r}")


def _exceptional(rho, outer, rtw):
    g = EmbeddedGraph.from_arrays(rho, "disk", outer)
    deg, bdy = _valences(g)
    return frozenset(_schedule(g, rtw, deg, bdy))


def _check_batch(lemma, rows, outer, rtw, acc):
    n = rows.shape[0]
    if lemma == "sphere":
        ok = C.sphere_rows(rows)
    elif lemma == "torus":
        ok = C.torus_rows(rows)
    elif lemma == "disk":
        ok = C.disk_rows(rows, outer)
        via, sane = C.doubled_disk_rows(rows, outer)
        acc["cross_checked"] += n
        acc["cross_disagree"] += int((ok != via).sum())
        acc["double_not_clean"] += int((~sane).sum())
    else:
        ok, lengths = C.bigon_rows(rows, outer, rtw)
        for k in lengths:
            acc["family_lengths"][str(int(k))] = acc["family_lengths"].get(str(int(k)), 0) + 1
    E = rows.shape[1] // 2
    acc["counts"][str(E)] = acc["counts"].get(str(E), 0) + n
    bad = np.nonzero(~ok)[0]
    acc["n_counterexamples"] += len(bad)
    if lemma == "bigon-bound":
        for i in bad:
            g = EmbeddedGraph.from_arrays(rows[i], "disk", outer)
            deg, bdy = _valences(g)
            inner = any(not bdy[v] for v in _schedule(g, rtw, deg, bdy))
            key = "interior_exception" if inner else "boundary_exceptions_only"
            acc["split"][key] = acc["split"].get(key, 0) + 1
    for i in bad:
        ctx = "sphere" if lemma == "sphere" else "torus" if lemma == "torus" else "disk"
        rho = rows[i]
        exc = _exceptional(rho, outer, rtw) if lemma == "bigon-bound" else frozenset()
        g = EmbeddedGraph.from_arrays(rho, ctx, outer if ctx == "disk" else None, exceptional=exc)
        acc["counterexamples"].append(g.to_json())
    _trim(acc)


def _trim(acc):
    # keep the smallest witnesses so the report is independent of visiting order
    if len(acc["counterexamples"]) > acc["keep"]:
        acc["counterexamples"].sort(key=_witness_key)
        del acc["counterexamples"][acc["keep"]:]


def _witness_key(g):
    return (len(g["pairing"]), json.dumps(g, sort_keys=True))


def _new_acc(keep):
    return {"counts": {}, "n_counterexamples": 0, "counterexamples": [], "keep": keep,
            "cross_checked": 0, "cross_disagree": 0, "double_not_clean": 0,
            "family_lengths": {}, "split": {}}


def _merge(a, b):
    for key in ("n_counterexamples", "cross_checked", "cross_disagree", "double_not_clean"):
        a[key] += b[key]
    for key in ("counts", "family_lengths", "split"):
        for k, v in b[key].items():
            a[key][k] = a[key].get(k, 0) + v
    a["counterexamples"].extend(b["counterexamples"])
    _trim(a)
    return a


def _run_roots(args):
    lemma, max_edges, rtw, roots, keep = args
    ctx, cons = lemma_class(lemma, rtw)
    acc = _new_acc(keep)
    for rows, outer in batches(ctx, max_edges, cons, roots):
        _check_batch(lemma, rows, outer, rtw, acc)
    return acc


@dataclass
class CampaignReport:
    lemma: str
    max_edges: int
    rtw: int | None
    instances_checked: int
    counts: dict
    counterexamples: list
    n_counterexamples: int
    runtime: float
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.n_counterexamples == 0 and not self.extra.get("cross_disagree") \
            and not self.extra.get("double_not_clean")

    def to_json(self, with_runtime: bool = True) -> dict:
        out = {"lemma": self.lemma, "max_edges": self.max_edges, "rtw": self.rtw,
               "instances_checked": self.instances_checked,
               "counts": dict(sorted(self.counts.items(), key=lambda kv: int(kv[0]))),
               "n_counterexamples": self.n_counterexamples,
               "counterexamples": self.counterexamples, **self.extra}
        if with_runtime:
            out["runtime"] = round(self.runtime, 3)
        return out

    def digest(self) -> str:
        blob = json.dumps(self.to_json(with_runtime=False), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def search_counterexamples(lemma: str, max_edges: int, rtw: int | None = None,
                           workers: int = 1, keep: int = 20, split_edges: int = 6) -> CampaignReport:
    """Run a lemma checker over its whole class up to ``max_edges`` edges.

    With ``workers`` > 1 the generation tree is cut at ``split_edges`` edges
    and the subtrees are shared out to a process pool; the merged report
    does not depend on the number of workers.
    """
    if max_edges > edge_cap():
        raise CapExceeded(f"max_edges {max_edges} exceeds the cap {edge_cap()}")
    ctx, cons = lemma_class(lemma, rtw)
    t0 = time.perf_counter()
    if workers <= 1:
        acc = _run_roots((lemma, max_edges, rtw, None, keep))
    else:
        small, roots = frontier(ctx, cons, min(split_edges, max_edges), max_edges)
        spec = class_spec(ctx, cons)
        acc = _new_acc(keep)
        for rho, outer in small:
            row = rho.reshape(1, -1)
            if _keep(spec, row, outer)[0]:
                _check_batch(lemma, row, outer, rtw, acc)
        chunks = [roots[i::workers * 4] for i in range(workers * 4)]
        jobs = [(lemma, max_edges, rtw, ch, keep) for ch in chunks if ch]
        with get_context("fork").Pool(workers) as pool:
            for part in pool.map(_run_roots, jobs):
                _merge(acc, part)
    acc["counterexamples"].sort(key=_witness_key)
    extra = {}
    if lemma == "disk":
        extra = {k: acc[k] for k in ("cross_checked", "cross_disagree", "double_not_clean")}
    if lemma == "bigon-bound":
        extra = {"bound": str(bigon_threshold(rtw)),
                 "counterexample_split": dict(sorted(acc["split"].items())),
                 "family_lengths": dict(sorted(acc["family_lengths"].items(), key=lambda kv: int(kv[0])))}
    return CampaignReport(lemma, max_edges, rtw, sum(acc["counts"].values()), acc["counts"],
                          acc["counterexamples"], acc["n_counterexamples"],
                          time.perf_counter() - t0, extra)


# --- complexity ------------------------------------------------------------


@dataclass(frozen=True, order=True)
class ComplexityTuple:
    """(vertices of the blue graph, of the blue-red graph, of the tri-colour
    graph, edges of the tri-colour graph), ordered lexicographically."""

    v_B: int
    v_BR: int
    v_BRG: int
    e_BRG: int

    def __post_init__(self):
        vals = (self.v_B, self.v_BR, self.v_BRG, self.e_BRG)
        if any(x < 0 for x in vals):
            raise ValueError("complexity entries are non-negative")
        if not self.v_B <= self.v_BR <= self.v_BRG:
            raise ValueError("need v_B <= v_BR <= v_BRG")


def complexity(t: ComplexityTuple, u: ComplexityTuple) -> str:
    return "less" if t < u else "greater" if t > u else "equal"
