"""Embedded multigraphs as rotation systems, with contexts and boundary data.

Darts follow the kernel convention: darts d and d^1 form one edge, ``rho``
is the counterclockwise successor around a vertex and faces are orbits of
``d -> rho[d ^ 1]``.

Contexts:

* ``sphere`` and ``torus``: closed surfaces, every face is a face of the graph.
* ``disk``: one face is marked outer (its darts have ``outer`` set); its
  boundary walk is the disk boundary.
* ``square``: a disk whose boundary carries two marked opposite sides,
  given as the set ``sides`` of boundary edges.
* ``annulus``: two outer faces; produced by doubling a square.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import kernels as K

CONTEXTS = ("sphere", "disk", "square", "annulus", "torus")
_GENUS = {"sphere": 0, "disk": 0, "square": 0, "annulus": 0, "torus": 1}
_OUTER_FACES = {"sphere": 0, "disk": 1, "square": 1, "annulus": 2, "torus": 0}


class ContextMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EmbeddedGraph:
    rho: tuple[int, ...]
    context: str = "sphere"
    outer: tuple[bool, ...] = ()
    sides: frozenset[int] = frozenset()
    exceptional: frozenset[int] = frozenset()
    isolated_vertex: bool = False

    def __post_init__(self):
        if self.context not in CONTEXTS:
            raise ContextMismatch(f"unknown context {self.context!r}")
        if not self.outer:
            object.__setattr__(self, "outer", (False,) * len(self.rho))
        if len(self.outer) != len(self.rho):
            raise ValueError("outer mask must have one flag per dart")

    @classmethod
    def from_arrays(cls, rho, context="sphere", outer=None, **kw) -> EmbeddedGraph:
        return cls(tuple(int(x) for x in rho), context,
                   () if outer is None else tuple(bool(x) for x in outer), **kw)

    @classmethod
    def from_rotations(cls, rotations, pairing=None, context="sphere", boundary=(),
                       sides=(), exceptional=()) -> EmbeddedGraph:
        """Build from per-vertex cyclic lists of half-edge ids.

        ``pairing`` lists the edges as half-edge pairs; when omitted, h and
        h^1 are paired.  ``boundary`` lists half-edges whose face is outer
        and ``sides`` lists marked edges as half-edge pairs or edge ids.
        ``exceptional`` holds vertex indices into ``rotations``.
        """
        hs = [h for rot in rotations for h in rot]
        if len(set(hs)) != len(hs):
            raise ValueError("a half-edge appears twice")
        if pairing is None:
            pairing = sorted({(min(h, h ^ 1), max(h, h ^ 1)) for h in hs})
        dart = {}
        for e, (a, b) in enumerate(pairing):
            dart[a], dart[b] = 2 * e, 2 * e + 1
        if set(dart) != set(hs):
            raise ValueError("pairing does not match the rotations")
        rho = [0] * len(hs)
        for rot in rotations:
            for k, h in enumerate(rot):
                rho[dart[h]] = dart[rot[(k + 1) % len(rot)]]
        outer = [False] * len(hs)
        for h in boundary:
            outer[dart[h]] = True
        edge_of = {frozenset(p): e for e, p in enumerate(map(tuple, pairing))}
        side_ids = set()
        for s in sides:
            side_ids.add(edge_of[frozenset(s)] if isinstance(s, (tuple, list)) else int(s))
        first = [dart[rot[0]] for rot in rotations if rot]
        g = cls(tuple(rho), context, tuple(outer), frozenset(side_ids),
                isolated_vertex=not hs and len(rotations) == 1)
        vid = g.vertex_of
        return replace(g, exceptional=frozenset(int(vid[first[v]]) for v in exceptional))

    # --- structure -----------------------------------------------------

    @cached_property
    def arr(self) -> np.ndarray:
        return np.array(self.rho, dtype=np.int64)

    @cached_property
    def outer_arr(self) -> np.ndarray:
        return np.array(self.outer, dtype=np.bool_)

    @property
    def n_edges(self) -> int:
        return len(self.rho) // 2

    @cached_property
    def _v(self):
        vid, vdeg = K.vertex_ids(self.arr)
        return vid, vdeg

    @cached_property
    def _f(self):
        fid, fdeg = K.face_ids(self.arr)
        return fid, fdeg

    @property
    def vertex_of(self) -> np.ndarray:
        return self._v[0]

    @property
    def n_vertices(self) -> int:
        return 1 if self.isolated_vertex else len(self._v[1])

    def degree(self, v: int, count_sides: bool = True) -> int:
        if count_sides or not self.sides:
            return 0 if self.isolated_vertex else int(self._v[1][v])
        return sum(1 for d in range(len(self.rho))
                   if self.vertex_of[d] == v and d // 2 not in self.sides)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return (0,) if self.isolated_vertex else tuple(int(x) for x in self._v[1])

    @cached_property
    def face_walks(self) -> tuple[tuple[int, ...], ...]:
        out = []
        seen = set()
        for d in range(len(self.rho)):
            if d in seen:
                continue
            walk, x = [], d
            while x not in seen:
                seen.add(x)
                walk.append(x)
                x = self.rho[x ^ 1]
            out.append(tuple(walk))
        return tuple(out)

    def is_outer_face(self, walk) -> bool:
        return bool(walk) and self.outer[walk[0]]

    @cached_property
    def inner_faces(self) -> tuple[tuple[int, ...], ...]:
        return tuple(w for w in self.face_walks if not self.is_outer_face(w))

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        vid = self.vertex_of
        return frozenset(int(vid[d]) for d in range(len(self.rho)) if self.outer[d])

    @property
    def connected(self) -> bool:
        return bool(K.is_connected(self.arr))

    # --- serialization -------------------------------------------------

    def rotations(self) -> list[list[int]]:
        vid = self.vertex_of
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        seen = set()
        for d in range(len(self.rho)):
            if d in seen:
                continue
            x = d
            while x not in seen:
                seen.add(x)
                out[vid[d]].append(x)
                x = self.rho[x]
        return out

    def to_json(self) -> dict:
        return {"context": self.context,
                "vertices": [{"rot": r} for r in self.rotations()],
                "pairing": [[2 * e, 2 * e + 1] for e in range(self.n_edges)],
                "boundary": [d for d in range(len(self.rho)) if self.outer[d]],
                "marks": {"sides": sorted(self.sides), "exceptional": sorted(self.exceptional)}}

    @classmethod
    def from_json(cls, obj) -> EmbeddedGraph:
        if isinstance(obj, str):
            obj = json.loads(obj)
        marks = obj.get("marks", {})
        return cls.from_rotations([v["rot"] for v in obj["vertices"]],
                                  [tuple(p) for p in obj["pairing"]],
                                  obj.get("context", "sphere"), obj.get("boundary", ()),
                                  marks.get("sides", ()), marks.get("exceptional", ()))

    def to_dot(self, name: str = "G") -> str:
        vid = self.vertex_of
        lines = [f"graph {name} {{", f'  label="{self.context}";']
        for v in range(self.n_vertices):
            attrs = []
            if v in self.boundary_vertices:
                attrs.append("shape=box")
            if v in self.exceptional:
                attrs.append("style=filled")
            lines.append(f"  v{v}" + (f" [{', '.join(attrs)}];" if attrs else ";"))
        for e in range(self.n_edges):
            style = ' [style=dashed]' if e in self.sides else ""
            lines.append(f"  v{vid[2 * e]} -- v{vid[2 * e + 1]}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def faces_and_genus(G: EmbeddedGraph):
    """Face walks and genus of the capped surface; checks the context."""
    if G.isolated_vertex:
        return (), 0
    if not G.connected:
        raise ContextMismatch("graph is not connected")
    walks = G.face_walks
    v, e, f = G.n_vertices, G.n_edges, len(walks)
    chi = v - e + f
    if chi % 2:
        raise ContextMismatch("odd Euler characteristic")
    genus = (2 - chi) // 2
    if genus != _GENUS[G.context]:
        raise ContextMismatch(f"{G.context} graph has genus {genus}")
    outer = [w for w in walks if G.is_outer_face(w)]
    if any(any(G.outer[d] for d in w) != all(G.outer[d] for d in w) for w in walks):
        raise ContextMismatch("outer marks must cover whole faces")
    if len(outer) != _OUTER_FACES[G.context]:
        raise ContextMismatch(f"{G.context} graph needs {_OUTER_FACES[G.context]} outer face(s), has {len(outer)}")
    if G.context == "square":
        bedges = {d // 2 for d in range(len(G.rho)) if G.outer[d]}
        if not G.sides or not G.sides <= bedges:
            raise ContextMismatch("marked sides must be boundary edges")
    return walks, genus


# --- small faces -------------------------------------------------------


@dataclass(frozen=True)
class BigonFamily:
    """A maximal edge-sharing chain of bigon faces.

    ``edges`` runs along the chain; for a closed family (the bigons close
    up around a vertex pair, as in the theta graph) the first edge is not
    repeated at the end.
    """

    edges: tuple[int, ...]
    faces: tuple[int, ...]
    closed: bool = False

    @property
    def length(self) -> int:
        return len(self.faces)

    def to_json(self) -> dict:
        return {"edges": list(self.edges), "faces": list(self.faces),
                "length": self.length, "closed": self.closed}


@dataclass(frozen=True)
class SmallFaces:
    monogons: tuple[int, ...]
    bigons: tuple[int, ...]
    triangles: tuple[int, ...]
    tagged_triangles: tuple[int, ...]
    families: tuple[BigonFamily, ...]

    @property
    def longest(self) -> BigonFamily | None:
        return max(self.families, key=lambda f: (f.length, [-e for e in f.edges]), default=None)


def _is_bigon(G: EmbeddedGraph, walk) -> bool:
    # a pendant edge seen from both sides is not a bigon
    return len(walk) == 2 and walk[0] // 2 != walk[1] // 2


def _free_degree(G: EmbeddedGraph, walk) -> int:
    return sum(1 for d in walk if d // 2 not in G.sides)


def find_small_faces(G: EmbeddedGraph) -> SmallFaces:
    """Census of monogons, bigons and triangles among the inner faces.

    Faces are numbered by position in ``G.face_walks``.  On a square, faces
    touching a marked side are measured without the side edges; a triangle
    with exactly one edge on a marked side is tagged.
    """
    walks = G.face_walks
    mono, bi, tri, tagged = [], [], [], []
    for f, w in enumerate(walks):
        if G.is_outer_face(w):
            continue
        on_side = len(w) - _free_degree(G, w)
        if on_side:
            if len(w) == 3 and on_side == 1:
                tagged.append(f)
            continue
        if len(w) == 1:
            mono.append(f)
        elif _is_bigon(G, w):
            bi.append(f)
        elif len(w) == 3:
            tri.append(f)
    return SmallFaces(tuple(mono), tuple(bi), tuple(tri), tuple(tagged),
                      tuple(_families(walks, bi)))


def _families(walks, bigon_faces) -> list[BigonFamily]:
    by_edge: dict[int, list[int]] = {}
    for f in bigon_faces:
        for d in walks[f]:
            by_edge.setdefault(d // 2, []).append(f)
    out, seen = [], set()
    for f0 in bigon_faces:
        if f0 in seen:
            continue
        comp, todo = {f0}, [f0]
        while todo:
            f = todo.pop()
            for d in walks[f]:
                for g in by_edge[d // 2]:
                    if g not in comp:
                        comp.add(g)
                        todo.append(g)
        seen |= comp
        # order the chain: start from a bigon with an edge shared with no
        # other bigon, or anywhere when the chain closes up
        def other_edge(f, e):
            a, b = (d // 2 for d in walks[f])
            return b if a == e else a
        ends = sorted(f for f in comp if any(len(by_edge[d // 2]) == 1 for d in walks[f]))
        closed = not ends
        start = ends[0] if ends else min(comp)
        if closed:
            e = min(d // 2 for d in walks[start])
        else:
            e = min(d // 2 for d in walks[start] if len(by_edge[d // 2]) == 1)
        edges, faces, f = [e], [], start
        while True:
            faces.append(f)
            e = other_edge(f, e)
            nxt = [g for g in by_edge[e] if g != f]
            if not nxt or nxt[0] == start:
                if not closed:
                    edges.append(e)
                break
            edges.append(e)
            f = nxt[0]
        out.append(BigonFamily(tuple(edges), tuple(faces), closed))
    return out


def _carry_exceptional(G: EmbeddedGraph, rho_new: np.ndarray, dart_map: dict[int, int]):
    """Vertex ids of G's exceptional vertices in a derived map, given a map
    from surviving old darts to new darts."""
    vid_new, _ = K.vertex_ids(rho_new)
    out = set()
    for v in G.exceptional:
        for d in range(len(G.rho)):
            if G.vertex_of[d] == v and d in dart_map:
                out.add(int(vid_new[dart_map[d]]))
                break
    return frozenset(out)


def _delete_edges(G: EmbeddedGraph, edges) -> EmbeddedGraph:
    rho = G.arr
    outer = list(G.outer)
    alive = list(range(len(G.rho)))
    sides = set(G.sides)
    for e in sorted(edges, reverse=True):
        rho = K.delete_edge(rho, e)
        del outer[2 * e:2 * e + 2]
        del alive[2 * e:2 * e + 2]
        sides = {s - 1 if s > e else s for s in sides if s != e}
    dart_map = {old: new for new, old in enumerate(alive)}
    return EmbeddedGraph.from_arrays(rho, G.context, outer, sides=frozenset(sides),
                                     exceptional=_carry_exceptional(G, rho, dart_map))


def collapse_bigon_families(G: EmbeddedGraph) -> EmbeddedGraph:
    """Replace each bigon family by a single edge.

    An open family of k bigons has k + 1 parallel edges and loses k of
    them; a closed family of k bigons has k edges and loses k - 1.  The
    surviving edge is a boundary edge when the family touches the boundary,
    otherwise the least edge.
    """
    census = find_small_faces(G)
    drop = []
    for fam in census.families:
        bdy = [e for e in fam.edges if G.outer[2 * e] or G.outer[2 * e + 1]]
        keep = min(bdy) if bdy else min(fam.edges)
        drop.extend(e for e in fam.edges if e != keep)
    return _delete_edges(G, drop) if drop else G


# --- triangulation -------------------------------------------------------


@dataclass(frozen=True)
class IdentityVerdict:
    ok: bool
    total: Fraction
    added: int
    triangulated: EmbeddedGraph

    def to_json(self) -> dict:
        return {"ok": self.ok, "sum": str(self.total), "added": self.added}


def triangulate(G: EmbeddedGraph) -> tuple[EmbeddedGraph, int]:
    """Cut off triangles from the least dart of each face until every face
    is a triangle."""
    rho = G.arr
    added = 0
    while True:
        fid, fdeg = K.face_ids(rho)
        big = [d for d in range(len(rho)) if fdeg[fid[d]] > 3]
        if not big:
            break
        d0 = min(big)
        w1 = rho[d0 ^ 1]
        w2 = rho[w1 ^ 1]
        rho = K.add_chord(rho, d0, w2)
        added += 1
    return EmbeddedGraph.from_arrays(rho, G.context), added


def triangulate_and_check_identity(G: EmbeddedGraph) -> IdentityVerdict:
    if G.context != "sphere":
        raise ContextMismatch("the valence identity is checked on the sphere")
    T, added = triangulate(G)
    faces, _ = faces_and_genus(T)
    total = sum((1 - Fraction(d, 6) for d in T.degrees), Fraction(0))
    ok = 2 * T.n_edges == 3 * len(faces) and total == 2
    return IdentityVerdict(ok, total, added, T)


# --- doubling ------------------------------------------------------------


@dataclass(frozen=True)
class Doubled:
    """A doubled graph with, per dart, its origin dart and copy index."""

    graph: EmbeddedGraph
    origin: tuple[int, ...]
    copy: tuple[int, ...]
    seam_vertices: frozenset[int] = field(default=frozenset())


def _glue(G: EmbeddedGraph, glue_edges, context: str, outer_after):
    n = len(G.rho)
    glue = np.zeros(max(n // 2, 1), np.bool_)
    for e in glue_edges:
        glue[e] = True
    rho2, origin, copy = K.double_along(G.arr, G.outer_arr, glue)
    return rho2, origin, copy


def double(G: EmbeddedGraph, mode: str = "disk") -> Doubled:
    """Glue G to its mirror image.

    ``disk``: along the whole boundary, giving a sphere graph.  ``square``:
    along the two marked sides (an annulus), then along both remaining
    boundary cycles (a torus).  The glued sides are kept as marked seam
    edges so the embedding stays cellular; valences that ignore the seams
    are available through ``degree(v, count_sides=False)``.
    """
    faces_and_genus(G)
    if mode == "disk":
        if G.context != "disk":
            raise ContextMismatch("disk doubling needs a disk graph")
        bedges = {d // 2 for d in range(len(G.rho)) if G.outer[d]}
        rho2, origin, copy = _glue(G, bedges, "sphere", None)
        H = EmbeddedGraph.from_arrays(rho2, "sphere")
        seam = frozenset(int(H.vertex_of[d]) for d in range(len(rho2)) if int(origin[d]) // 2 in bedges)
        return Doubled(H, tuple(map(int, origin)), tuple(map(int, copy)), seam)
    if mode != "square":
        raise ValueError(f"unknown doubling mode {mode!r}")
    if G.context != "square":
        raise ContextMismatch("square doubling needs a square graph")
    A, origin1, copy1 = _annulus(G)
    rho1, outer1 = A.arr, A.outer_arr
    bedges = {d // 2 for d in range(len(rho1)) if outer1[d]}
    rho2, origin2, copy2 = _glue(A, bedges, "torus", None)
    sides2 = frozenset(e for e in range(len(rho2) // 2) if int(origin2[2 * e]) // 2 in A.sides)
    T = EmbeddedGraph.from_arrays(rho2, "torus", sides=sides2)
    origin = tuple(int(origin1[int(o)]) for o in origin2)
    copy = tuple(int(copy1[int(o)]) + 2 * int(c) for o, c in zip(origin2, copy2))
    seam = frozenset(int(T.vertex_of[2 * e]) for e in sides2) | \
        frozenset(int(T.vertex_of[2 * e + 1]) for e in sides2)
    return Doubled(T, origin, copy, seam)


def _annulus(G: EmbeddedGraph):
    rho1, origin1, copy1 = _glue(G, G.sides, "annulus", None)
    # mirroring swaps the two sides of every edge; glued sides stop being
    # boundary
    outer1 = [G.outer[int(o) ^ int(c)] and int(o) // 2 not in G.sides
              for o, c in zip(origin1, copy1)]
    A = EmbeddedGraph.from_arrays(rho1, "annulus", outer1, sides=frozenset(G.sides))
    faces_and_genus(A)
    return A, origin1, copy1


def annulus_stage(G: EmbeddedGraph) -> EmbeddedGraph:
    """The intermediate annulus of the square doubling."""
    faces_and_genus(G)
    return _annulus(G)[0]
# --- builders -------------------------------------------------------------


def cycle(L: int, context: str = "disk") -> EmbeddedGraph:
    """A cycle of length L; in the disk context the even darts bound the
    outer face."""
    rho = [0] * (2 * L)
    for k in range(L):
        rho[2 * k] = (2 * k - 1) % (2 * L)
        rho[(2 * k - 1) % (2 * L)] = 2 * k
    outer = [d % 2 == 0 for d in range(2 * L)] if context in ("disk", "square") else None
    return EmbeddedGraph.from_arrays(rho, context, outer)


def _simple_darts(n, rotations):
    darts = {}
    pairing = []
    for u in range(n):
        for v in rotations[u]:
            if (u, v) not in darts:
                darts[(u, v)] = 2 * len(pairing)
                darts[(v, u)] = 2 * len(pairing) + 1
                pairing.append((darts[(u, v)], darts[(v, u)]))
    return darts, pairing


def from_edge_list(n: int, rotations: list[list[int]], context: str = "sphere") -> EmbeddedGraph:
    """Simple graphs given as neighbour lists in counterclockwise order."""
    darts, pairing = _simple_darts(n, rotations)
    rots = [[darts[(u, v)] for v in rotations[u]] for u in range(n)]
    return EmbeddedGraph.from_rotations(rots, pairing, context)


def octahedron() -> EmbeddedGraph:
    # 0 top, 5 bottom, 1..4 the equator counterclockwise seen from the top
    return from_edge_list(6, [[1, 2, 3, 4], [0, 4, 5, 2], [0, 1, 5, 3],
                              [0, 2, 5, 4], [0, 3, 5, 1], [1, 4, 3, 2]])


def cube() -> EmbeddedGraph:
    # top square 0..3, bottom square 4..7 with i above i+4
    return from_edge_list(8, [[1, 3, 4], [2, 0, 5], [3, 1, 6], [0, 2, 7],
                              [7, 5, 0], [4, 6, 1], [5, 7, 2], [6, 4, 3]])


def icosahedron() -> EmbeddedGraph:
    # 0 top, 1..5 upper ring, 6..10 lower ring, 11 bottom; lower vertex
    # 6 + i sits between upper i + 1 and i + 2
    up = lambda i: 1 + i % 5
    lo = lambda i: 6 + i % 5
    rot = [[up(i) for i in range(5)]]
    for i in range(5):
        rot.append([0, up(i - 1), lo(i - 1), lo(i), up(i + 1)])
    for i in range(5):
        rot.append([11, lo(i + 1), up(i + 1), up(i), lo(i - 1)])
    rot.append([lo(4 - i) for i in range(5)])
    return from_edge_list(12, rot)


def wheel(k: int, context: str = "disk") -> EmbeddedGraph:
    """Hub 0 joined to a rim cycle 1..k; in the disk context the rim is the
    boundary."""
    rot = [[i for i in range(1, k + 1)]]
    for i in range(1, k + 1):
        prev, nxt = (i - 2) % k + 1, i % k + 1
        rot.append([0, prev, nxt])
    G = from_edge_list(k + 1, rot, "sphere")
    if context == "sphere":
        return G
    fid = G._f[0]
    vid = G.vertex_of
    rim = [w for w in G.face_walks if all(vid[d] != 0 for d in w)]
    outer = [fid[d] == fid[rim[0][0]] for d in range(len(G.rho))]
    return replace(G, context=context, outer=tuple(outer))


def torus_grid(p: int, q: int, triangulated: bool = False) -> EmbeddedGraph:
    """p x q grid on the torus; with ``triangulated`` every square gets the
    same diagonal, giving a 6-regular triangulation."""
    idx = lambda i, j: (i % p) * q + (j % q)
    rot = []
    for i in range(p):
        for j in range(q):
            if triangulated:
                nb = [idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1),
                      idx(i - 1, j), idx(i - 1, j - 1), idx(i, j - 1)]
            else:
                nb = [idx(i + 1, j), idx(i, j + 1), idx(i - 1, j), idx(i, j - 1)]
            rot.append(nb)
    return from_edge_list(p * q, rot, "torus")


def theta() -> EmbeddedGraph:
    return EmbeddedGraph.from_rotations([[0, 2, 4], [5, 3, 1]], context="sphere")


def disk_from_edge_list(n: int, rotations: list[list[int]], boundary: list[int],
                        context: str = "disk", sides=()) -> EmbeddedGraph:
    """A disk graph from neighbour lists; ``boundary`` is the boundary cycle
    as a vertex sequence.  ``sides`` lists marked boundary edges as vertex
    pairs (square context)."""
    G = from_edge_list(n, rotations, "sphere")
    darts, _ = _simple_darts(n, rotations)
    # input vertex index of each dart
    vid = [0] * len(G.rho)
    for (u, v), d in darts.items():
        vid[d] = u
    want = set(boundary)
    pick = None
    for w in G.face_walks:
        if len(w) == len(boundary) and {int(vid[d]) for d in w} == want:
            pick = w
            break
    if pick is None:
        raise ContextMismatch("boundary cycle is not a face")
    outer = [False] * len(G.rho)
    for d in pick:
        outer[d] = True
    side_ids = set()
    for u, v in sides:
        for e in range(G.n_edges):
            if {int(vid[2 * e]), int(vid[2 * e + 1])} == {u, v}:
                side_ids.add(e)
    return replace(G, context=context, outer=tuple(outer), sides=frozenset(side_ids))
