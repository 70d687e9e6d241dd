"""Link diagrams as 4-valent combinatorial maps.

Conventions
-----------
A diagram with n crossings is a tuple of 4-tuples of edge labels in PD
order: slot 0 is the incoming under-strand, the remaining slots follow
counterclockwise, so the under-strand leaves through slot 2 and the
over-strand uses slots 1 and 3.

A half-edge is the integer ``4*x + k`` for slot k of crossing x.  The
rotation at a crossing is ``k -> k+1 (mod 4)`` and the face to the right of
an edge leaving through half-edge h is the orbit of h under
``h -> rot(partner(h))``.  The corner of crossing x between slots j and j+1
lies in the face of half-edge ``(x, j+1)``.
"""

from __future__ import annotations

import json
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property

BLUE = "blue"
RED = "red"


def other_color(color: str) -> str:
    return RED if color == BLUE else BLUE


class DiagramError(ValueError):
    """Malformed or inadmissible diagram input."""


def hx(x: int, k: int) -> int:
    return 4 * x + (k % 4)


@dataclass(frozen=True)
class Face:
    """A face of the diagram.

    ``corners`` lists (crossing, j) pairs in walk order, where corner j sits
    between slots j and j+1.
    """

    id: int
    corners: tuple[tuple[int, int], ...]
    color: str | None = None

    @property
    def degree(self) -> int:
        return len(self.corners)

    @property
    def crossings(self) -> frozenset[int]:
        return frozenset(x for x, _ in self.corners)


@dataclass(frozen=True)
class Coloring:
    colors: tuple[str, ...]

    def __getitem__(self, face_id: int) -> str:
        return self.colors[face_id]

    def faces_of(self, color: str) -> list[int]:
        return [f for f, c in enumerate(self.colors) if c == color]

    def count(self, color: str) -> int:
        return self.colors.count(color)


@dataclass(frozen=True)
class PlanarDiagram:
    """Immutable PD-coded diagram.

    ``free_loops`` counts crossingless unknotted components; it is only
    ever nonzero for the empty diagram produced when every crossing of a
    diagram has been removed.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    free_loops: int = 0
    provenance: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        xs = tuple(tuple(int(a) for a in c) for c in self.crossings)
        for c in xs:
            if len(c) != 4:
                raise DiagramError(f"crossing {c} does not have 4 slots")
        object.__setattr__(self, "crossings", xs)
        counts = Counter(a for c in xs for a in c)
        bad = sorted(a for a, m in counts.items() if m != 2)
        if bad:
            raise DiagramError(f"labels not appearing exactly twice: {bad}")
        if self.provenance is not None and len(self.provenance) != len(xs):
            raise DiagramError("provenance length mismatch")

    # --- combinatorial structure -------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    @cached_property
    def labels(self) -> tuple[int, ...]:
        return tuple(sorted({a for c in self.crossings for a in c}))

    @cached_property
    def slots_of(self) -> dict[int, tuple[int, int]]:
        """label -> the two half-edges carrying it (in half-edge order)."""
        where: dict[int, list[int]] = {}
        for x, c in enumerate(self.crossings):
            for k, a in enumerate(c):
                where.setdefault(a, []).append(hx(x, k))
        return {a: (hs[0], hs[1]) for a, hs in where.items()}

    @cached_property
    def partner(self) -> tuple[int, ...]:
        p = [0] * (4 * self.n)
        for h1, h2 in self.slots_of.values():
            p[h1], p[h2] = h2, h1
        return tuple(p)

    def label_at(self, h: int) -> int:
        return self.crossings[h // 4][h % 4]

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        return self._faces[1]

    @cached_property
    def _faces(self):
        fo = [-1] * (4 * self.n)
        walks = []
        for h0 in range(4 * self.n):
            if fo[h0] >= 0:
                continue
            walk, h = [], h0
            while fo[h] < 0:
                fo[h] = len(walks)
                walk.append(h)
                p = self.partner[h]
                h = p - p % 4 + (p + 1) % 4
            walks.append(walk)
        return walks, tuple(fo)

    def corner_face(self, x: int, j: int) -> int:
        """Face containing the corner of x between slots j and j+1."""
        return self.face_of[hx(x, j + 1)]

    def through(self, h: int) -> int:
        return h - h % 4 + (h + 2) % 4

    @cached_property
    def strands(self) -> tuple[tuple[int, ...], ...]:
        """Each component as the cyclic list of half-edges where it enters
        a crossing, in the direction of the orientation."""
        out, seen = [], set()
        for h0 in range(4 * self.n):
            if h0 in seen:
                continue
            seq, h = [], h0
            while h not in seen:
                seen.add(h)
                seen.add(self.through(h))
                seq.append(h)
                h = self.partner[self.through(h)]
            slots = {g % 4 for g in seq}
            if 0 in slots:
                forward = True
            elif 2 in slots:
                forward = False
            else:
                forward = self._over_incoming(seq[0] // 4, seq[0] % 4)
            if not forward:
                seq = [self.through(g) for g in reversed(seq)]
            k = min(range(len(seq)), key=lambda i: self.label_at(seq[i]))
            out.append(tuple(seq[k:] + seq[:k]))
        out.sort(key=lambda s: self.label_at(s[0]))
        return tuple(out)

    @cached_property
    def heads(self) -> dict[int, int]:
        """label -> half-edge where the oriented edge enters its crossing."""
        return {self.label_at(h): h for seq in self.strands for h in seq}

    def _over_incoming(self, x: int, k: int) -> bool:
        # all-over components: labels assumed consecutive along the strand
        b, d = self.crossings[x][1], self.crossings[x][3]
        a, o = (b, d) if k == 1 else (d, b)
        if abs(a - o) == 1:
            return o == a + 1
        return a > o

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Edge labels of each link component in traversal order."""
        comps = tuple(tuple(self.label_at(h) for h in seq) for seq in self.strands)
        return comps + ((),) * self.free_loops

    def sign(self, x: int) -> int:
        """+1 when the over-strand runs from slot 3 to slot 1."""
        return 1 if self.heads[self.crossings[x][3]] == hx(x, 3) else -1

    def crossing_components(self) -> list[set[int]]:
        """Connected pieces of the crossing graph."""
        seen, pieces = set(), []
        for s in range(self.n):
            if s in seen:
                continue
            piece, todo = {s}, [s]
            seen.add(s)
            while todo:
                x = todo.pop()
                for k in range(4):
                    y = self.partner[hx(x, k)] // 4
                    if y not in seen:
                        seen.add(y)
                        piece.add(y)
                        todo.append(y)
            pieces.append(piece)
        return pieces

    @cached_property
    def genus(self) -> int:
        if self.n == 0:
            return 0
        v, e, f = self.n, 2 * self.n, len(self._faces[0])
        pieces = len(self.crossing_components())
        return (2 * pieces - v + e - f) // 2


# --- parsing and serialisation ------------------------------------------

_TOKEN = re.compile(r"X\s*\[([^\]]*)\]")


def parse_pd(text: str) -> PlanarDiagram:
    """Parse ``X[a,b,c,d] ...`` (optionally wrapped in ``PD[...]``)."""
    body = text.strip()
    m = re.fullmatch(r"PD\s*\[(.*)\]", body, flags=re.S)
    if m:
        body = m.group(1)
    crossings, pos = [], 0
    for tok in _TOKEN.finditer(body):
        gap = body[pos:tok.start()]
        if gap.strip(" \t\r\n,"):
            raise DiagramError(f"unexpected text {gap.strip()!r} at offset {pos}")
        parts = [p.strip() for p in tok.group(1).split(",")]
        if len(parts) != 4 or not all(re.fullmatch(r"\d+", p) for p in parts):
            raise DiagramError(f"malformed token {tok.group(0)!r} at offset {tok.start()}")
        crossings.append(tuple(int(p) for p in parts))
        pos = tok.end()
    if body[pos:].strip(" \t\r\n,"):
        raise DiagramError(f"unexpected text {body[pos:].strip()!r} at offset {pos}")
    if not crossings:
        raise DiagramError("no crossings")
    d = PlanarDiagram(tuple(crossings))
    if len(d.crossing_components()) != 1:
        raise DiagramError("diagram is disconnected")
    if d.genus != 0:
        raise DiagramError(f"rotation system has genus {d.genus}, not planar")
    return d


def to_pd(d: PlanarDiagram) -> str:
    return " ".join("X[{},{},{},{}]".format(*c) for c in d.crossings)


def faces(d: PlanarDiagram, col: Coloring | None = None) -> list[Face]:
    out = []
    for f, walk in enumerate(d._faces[0]):
        corners = tuple((h // 4, (h - 1) % 4) for h in walk)
        out.append(Face(f, corners, col[f] if col else None))
    return out


def checkerboard(d: PlanarDiagram) -> Coloring:
    """Proper 2-colouring of faces, normalised so the face on the left of
    the least-labelled edge (traversed along the orientation) is blue."""
    nf = len(d._faces[0])
    if nf == 0:
        return Coloring(())
    side = [-1] * nf
    start = d.face_of[d.heads[d.labels[0]]]
    side[start] = 0
    todo = deque([start])
    walks = d._faces[0]
    while todo:
        f = todo.popleft()
        for h in walks[f]:
            g = d.face_of[d.partner[h]]
            if side[g] < 0:
                side[g] = 1 - side[f]
                todo.append(g)
            elif side[g] == side[f]:
                raise DiagramError("face graph is not bipartite")
    return Coloring(tuple(BLUE if s == 0 else RED for s in side))


def is_alternating(d: PlanarDiagram) -> bool:
    return all((h1 % 2) != (h2 % 2) for h1, h2 in d.slots_of.values())


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[tuple[str, bool, str], ...]
    genus: int | None

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def failures(self) -> list[str]:
        return [name for name, passed, _ in self.checks if not passed]


def validate(d: PlanarDiagram | str) -> ValidationReport:
    """Run every structural check and report instead of raising."""
    checks: list[tuple[str, bool, str]] = []
    if isinstance(d, str):
        tokens = _TOKEN.findall(d)
        if not d.strip() or not tokens:
            return ValidationReport((("nonempty", False, "no crossings"),), None)
        raw = []
        for t in tokens:
            parts = [p.strip() for p in t.split(",")]
            if len(parts) != 4 or not all(p.isdigit() for p in parts):
                checks.append(("four-valent", False, f"bad token X[{t}]"))
                return ValidationReport(tuple(checks), None)
            raw.append(tuple(int(p) for p in parts))
        try:
            d = PlanarDiagram(tuple(raw))
        except DiagramError as err:
            checks.append(("four-valent", True, ""))
            checks.append(("pairing", False, str(err)))
            return ValidationReport(tuple(checks), None)
    if d.n == 0:
        return ValidationReport((("nonempty", False, "no crossings"),), None)
    checks.append(("four-valent", True, ""))
    checks.append(("pairing", True, ""))
    pieces = len(d.crossing_components())
    checks.append(("connected", pieces == 1, f"{pieces} pieces"))
    g = d.genus
    checks.append(("genus-0", g == 0, f"genus {g}"))
    checks.append(("alternating", is_alternating(d), ""))
    return ValidationReport(tuple(checks), g)


def to_json(d: PlanarDiagram, col: Coloring | None = None) -> dict:
    col = col or checkerboard(d)
    return {
        "crossings": [
            {"slots": list(c), "over": [c[1], c[3]], "sign": d.sign(x)}
            for x, c in enumerate(d.crossings)
        ],
        "faces": [[list(c) for c in f.corners] for f in faces(d)],
        "coloring": list(col.colors),
        "free_loops": d.free_loops,
    }


def from_json(obj: dict) -> PlanarDiagram:
    return PlanarDiagram(
        tuple(tuple(c["slots"]) for c in obj["crossings"]),
        obj.get("free_loops", 0),
    )


def dumps(obj) -> str:
    """Canonical JSON text (sorted keys, no whitespace)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def to_dot(d: PlanarDiagram, col: Coloring | None = None) -> str:
    """Face-adjacency graph: one node per face, one edge per diagram edge."""
    col = col or checkerboard(d)
    lines = ["graph faces {"]
    for f in faces(d, col):
        lines.append(f'  f{f.id} [label="f{f.id} ({f.degree})", color={f.color}];')
    for a in d.labels:
        h1, h2 = d.slots_of[a]
        lines.append(f'  f{d.face_of[h1]} -- f{d.face_of[h2]} [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
