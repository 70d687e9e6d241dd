"""Isomorph-free generation of embedded graphs by canonical augmentation.

Every map in a class is reached from a base map by adding one edge at a
time (a pendant edge, a chord inside a face, or for the torus a chord
joining two faces of a planar map).  A child is kept only when its new
edge is the canonical last edge, so each isomorphism class appears once
without a global table.  Reflections are identified on the sphere and the
disk but not on the torus.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from . import kernels as K
from .graph import EmbeddedGraph, cycle

DEFAULT_CAP = 14


class CapExceeded(ValueError):
    pass


def edge_cap() -> int:
    return int(os.environ.get("TWISTLINK_MAX_EDGES", DEFAULT_CAP))


@dataclass(frozen=True)
class Constraints:
    """``min_face``: least degree of an inner face (3 forbids monogons and
    bigons, 2 forbids monogons).  ``valence``: (interior, boundary) lower
    bounds met by all but ``exceptions`` vertices."""

    min_face: int = 1
    valence: tuple[int, int] | None = None
    exceptions: int = 2


@dataclass(frozen=True)
class ClassSpec:
    context: str
    constraints: Constraints
    mirror: bool
    use_outer: bool
    gmax: int
    final_genus: int


def class_spec(context: str, constraints: Constraints) -> ClassSpec:
    m = constraints.min_face
    ok = {"sphere": (1, 3), "disk": (2, 3), "torus": (3,)}
    if context not in ok:
        raise ValueError(f"no generator for the {context} context")
    if m not in ok[context]:
        raise ValueError(f"{context} generation supports min_face in {ok[context]}")
    if constraints.valence is not None and context != "disk":
        raise ValueError("valence schedules are only generated on the disk")
    if context == "torus":
        return ClassSpec(context, constraints, False, False, 1, 1)
    return ClassSpec(context, constraints, True, context == "disk", 0, 0)


def _arr(x, dtype=np.int64):
    return np.array(x, dtype=dtype)


def _cycle_base(L):
    G = cycle(L)
    return G.arr, G.outer_arr


@lru_cache(maxsize=None)
def _torus_cores():
    """Unicellular genus-one maps with every vertex of degree at least 3:
    the interleaved two-loop bouquet and the unicellular thetas."""
    found = []
    for n in (4, 6):
        codes = set()
        for perm in itertools.permutations(range(n)):
            rho = _arr(perm)
            if not K.is_connected(rho) or K.euler_genus(rho) != 1:
                continue
            _, fdeg = K.face_ids(rho)
            _, vdeg = K.vertex_ids(rho)
            if len(fdeg) != 1 or vdeg.min() < 3:
                continue
            code = tuple(K.canon(rho, False, np.zeros(n, np.bool_), False)[0])
            if code not in codes:
                codes.add(code)
                found.append(rho)
    return found


def torus_bases(max_edges: int, mindeg: int = 3):
    """Leafless unicellular genus-one maps with no genus-lowering deletion,
    up to ``max_edges``.  They are the cores with edges subdivided."""
    out, codes = [], set()
    layer = list(_torus_cores())
    while layer:
        nxt = []
        for rho in layer:
            if rho.shape[0] // 2 > max_edges:
                continue
            none = np.zeros(rho.shape[0], np.bool_)
            code = tuple(K.canon(rho, False, none, False)[0])
            if code in codes:
                continue
            codes.add(code)
            _, rule = K.deletion_candidates(rho, none, False, mindeg, True)
            if rule == 0:
                out.append(rho)
            for e in range(rho.shape[0] // 2):
                nxt.append(K.subdivide(rho, e))
        layer = nxt
    return out


def bases(spec: ClassSpec, max_edges: int):
    """Base maps of a class as (rho, outer) pairs; the single vertex with no
    edges is handled by the caller."""
    m = spec.constraints.min_face
    if spec.context == "sphere":
        if m == 1:
            raw = [[0, 1], [1, 0]]
        else:
            raw = [[0, 2, 1, 3]]
        return [(_arr(r), np.zeros(len(r), np.bool_)) for r in raw]
    if spec.context == "disk":
        out = []
        lo = 3 if m == 3 else 2
        for L in range(lo, max_edges + 1):
            out.append(_cycle_base(L))
        small = (1, 2) if m == 3 else (1,)
        for L in small:
            rho, outer = _cycle_base(L)
            # a pendant edge inside; the odd darts bound the inner face
            out.append((K.add_leaf(rho, 1), np.concatenate([outer, [False, False]])))
        return [(r, o) for r, o in out if r.shape[0] // 2 <= max_edges]
    none = lambda n: np.zeros(n, np.bool_)
    out = [(_arr([0, 2, 1, 3]), none(4))]
    out += [(r, none(r.shape[0])) for r in torus_bases(max_edges)]
    return [(r, o) for r, o in out if r.shape[0] // 2 <= max_edges]


def _keep(spec: ClassSpec, rows: np.ndarray, outer: np.ndarray) -> np.ndarray:
    c = spec.constraints
    mask = np.ones(rows.shape[0], np.bool_)
    if spec.final_genus:
        mask &= K.genus_rows(rows) == spec.final_genus
    if c.valence is not None:
        mask &= K.schedule_rows(rows, outer, c.valence[0], c.valence[1], c.exceptions)
    return mask


def batches(context: str, max_edges: int, constraints: Constraints = Constraints(),
            roots=None) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Depth-first stream of class members in batches (rows, outer): the
    rows are rotations of equal size sharing one outer mask.  ``roots``
    restricts the run to the subtrees below the given (rho, outer) pairs."""
    cap = edge_cap()
    if max_edges > cap:
        raise CapExceeded(f"max_edges {max_edges} exceeds the cap {cap}; set TWISTLINK_MAX_EDGES")
    spec = class_spec(context, constraints)
    m = constraints.min_face
    thr_int = thr_bdy = 0
    max_exc = constraints.exceptions
    if constraints.valence is not None:
        thr_int, thr_bdy = constraints.valence
    if roots is None and context == "sphere" and m == 1:
        yield np.zeros((1, 0), np.int64), np.zeros(0, np.bool_)
    stack = list(roots) if roots is not None else bases(spec, max_edges)
    for rho, outer in stack:
        row = rho.reshape(1, -1)
        if _keep(spec, row, outer)[0]:
            yield row, outer
    while stack:
        rho, outer = stack.pop()
        if rho.shape[0] // 2 >= max_edges:
            continue
        kids = K.expand(rho, outer, spec.use_outer, spec.mirror, m, spec.gmax,
                        thr_int, thr_bdy, max_exc, max_edges)
        if not len(kids):
            continue
        child_outer = np.concatenate([outer, np.zeros(2, np.bool_)])
        mask = _keep(spec, kids, child_outer)
        if mask.all():
            yield kids, child_outer
        elif mask.any():
            yield kids[mask], child_outer
        E = kids.shape[1] // 2
        if E == max_edges - 1:
            # the last level in one call: grandchildren are never expanded
            last = K.expand_rows(kids, child_outer, spec.use_outer, spec.mirror, m, spec.gmax,
                                 thr_int, thr_bdy, max_exc, max_edges)
            if len(last):
                last_outer = np.concatenate([child_outer, np.zeros(2, np.bool_)])
                mask = _keep(spec, last, last_outer)
                if mask.any():
                    yield last[mask], last_outer
        elif E < max_edges:
            stack.extend((c, child_outer) for c in kids)


def members(context: str, max_edges: int, constraints: Constraints = Constraints(),
            roots=None) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Class members one at a time as (rho, outer)."""
    for rows, outer in batches(context, max_edges, constraints, roots):
        for rho in rows:
            yield rho, outer


def walk(context: str, max_edges: int, constraints: Constraints = Constraints(),
         visit: Callable[[np.ndarray, np.ndarray], None] | None = None,
         roots=None) -> dict[int, int]:
    """Run over the class calling ``visit(rows, outer)`` on every batch;
    returns the count per edge number."""
    counts: dict[int, int] = {}
    for rows, outer in batches(context, max_edges, constraints, roots):
        E = rows.shape[1] // 2
        counts[E] = counts.get(E, 0) + rows.shape[0]
        if visit is not None:
            visit(rows, outer)
    return dict(sorted(counts.items()))


def frontier(context: str, constraints: Constraints, depth_edges: int, max_edges: int):
    """Split the generation tree: the members with fewer than
    ``depth_edges`` edges, and the roots of all subtrees at that size."""
    spec = class_spec(context, constraints)
    m = constraints.min_face
    thr_int = thr_bdy = 0
    if constraints.valence is not None:
        thr_int, thr_bdy = constraints.valence
    small, roots = [], []
    stack = bases(spec, max_edges)
    while stack:
        rho, outer = stack.pop()
        if rho.shape[0] // 2 >= depth_edges:
            roots.append((rho, outer))
            continue
        small.append((rho, outer))
        kids = K.expand(rho, outer, spec.use_outer, spec.mirror, m, spec.gmax,
                        thr_int, thr_bdy, constraints.exceptions, max_edges)
        co = np.concatenate([outer, np.zeros(2, np.bool_)])
        stack.extend((c, co) for c in kids)
    return small, roots


def enumerate_graphs(context: str, max_edges: int,
                     constraints: Constraints = Constraints()) -> Iterator[EmbeddedGraph]:
    """Stream every member of the class with at most ``max_edges`` edges."""
    for rho, outer in members(context, max_edges, constraints):
        if rho.shape[0] == 0:
            yield EmbeddedGraph((), context, isolated_vertex=True)
        else:
            yield EmbeddedGraph.from_arrays(rho, context, outer if context == "disk" else None)


def count(context: str, max_edges: int, constraints: Constraints = Constraints()) -> dict[int, int]:
    return walk(context, max_edges, constraints)
