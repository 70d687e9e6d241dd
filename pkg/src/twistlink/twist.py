"""Twist regions, primality and twist-reducedness with explicit witnesses."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .diagram import BLUE, RED, Coloring, PlanarDiagram, hx, other_color


@dataclass(frozen=True)
class TwistRegion:
    crossings: tuple[int, ...]
    color: str | None
    closed: bool = False
    sign: int = 0

    @property
    def c(self) -> int:
        return len(self.crossings)

    def to_json(self) -> dict:
        return {"crossings": list(self.crossings), "c": self.c, "color": self.color,
                "closed": self.closed, "sign": self.sign}


@dataclass(frozen=True)
class CurveWitness:
    """A closed curve meeting the diagram twice, in combinatorial form.

    Evaluates false so ``if is_prime(d):`` reads naturally.
    """

    kind: str
    through: tuple[int, int]
    faces: tuple[int, int]
    sides: tuple[frozenset[int], frozenset[int]]

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"kind": self.kind, "through": list(self.through), "faces": list(self.faces),
                "sides": [sorted(s) for s in self.sides]}


class NotTwistReduced(ValueError):
    def __init__(self, witness: CurveWitness):
        super().__init__(f"not twist reduced: curve through crossings {witness.through}")
        self.witness = witness


class NotPrime(ValueError):
    def __init__(self, witness: CurveWitness):
        super().__init__(f"not prime: curve through edges {witness.through}")
        self.witness = witness


def bigons(d: PlanarDiagram) -> list[tuple[int, int, int]]:
    """(face, x, y) for every bigon joining two distinct crossings."""
    out = []
    walks = d._faces[0]
    for f, walk in enumerate(walks):
        if len(walk) == 2:
            x, y = walk[0] // 4, walk[1] // 4
            if x != y:
                out.append((f, min(x, y), max(x, y)))
    return out


def twist_regions(d: PlanarDiagram, col: Coloring) -> list[TwistRegion]:
    parent = list(range(d.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    bg = bigons(d)
    for _, x, y in bg:
        parent[find(x)] = find(y)
    groups: dict[int, list[int]] = {}
    for x in range(d.n):
        groups.setdefault(find(x), []).append(x)

    regions = []
    for members in groups.values():
        ms = set(members)
        mine = [(f, x, y) for f, x, y in bg if x in ms]
        if not mine:
            regions.append(TwistRegion((members[0],), None, False, d.sign(members[0])))
            continue
        tally = {BLUE: 0, RED: 0}
        for f, _, _ in mine:
            tally[col[f]] += 1
        color = BLUE if tally[BLUE] >= tally[RED] else RED
        chain = [(x, y) for f, x, y in mine if col[f] == color]
        adj: dict[int, list[int]] = {x: [] for x in ms}
        for x, y in chain:
            adj[x].append(y)
            adj[y].append(x)
        closed = len(chain) >= len(ms)
        ends = sorted(x for x in ms if len(adj[x]) <= 1)
        start = ends[0] if ends and not closed else min(ms)
        order, prev, cur = [start], None, start
        while len(order) < len(ms):
            nxt = [y for y in adj[cur] if y != prev and y not in order]
            if not nxt:
                break
            prev, cur = cur, min(nxt)
            order.append(cur)
        if len(order) != len(ms):
            # opposite-colour bigons glued the pieces; fall back to sorting
            order = sorted(ms)
        signs = {d.sign(x) for x in order}
        regions.append(TwistRegion(tuple(order), color, closed,
                                   signs.pop() if len(signs) == 1 else 0))
    regions.sort(key=lambda r: min(r.crossings))
    return regions


def _sides_without_edges(d: PlanarDiagram, e1: int, e2: int):
    cut = {e1, e2}
    adj: dict[int, set[int]] = {x: set() for x in range(d.n)}
    for a, (h1, h2) in d.slots_of.items():
        if a not in cut:
            adj[h1 // 4].add(h2 // 4)
            adj[h2 // 4].add(h1 // 4)
    pieces, seen = [], set()
    for s in range(d.n):
        if s in seen:
            continue
        comp, todo = {s}, [s]
        seen.add(s)
        while todo:
            x = todo.pop()
            for y in adj[x] - seen:
                seen.add(y)
                comp.add(y)
                todo.append(y)
        pieces.append(frozenset(comp))
    return pieces


def is_prime(d: PlanarDiagram) -> bool | CurveWitness:
    by_faces: dict[frozenset[int], list[int]] = {}
    for a in d.labels:
        h1, h2 = d.slots_of[a]
        f1, f2 = d.face_of[h1], d.face_of[h2]
        if f1 == f2:
            # bridge: one region on both sides
            pieces = _sides_without_edges(d, a, a)
            if len(pieces) == 2:
                return CurveWitness("prime-violation", (a, a), (f1, f1), tuple(pieces))
            continue
        by_faces.setdefault(frozenset((f1, f2)), []).append(a)
    for fs, edges in sorted(by_faces.items(), key=lambda kv: kv[1]):
        for i, e1 in enumerate(edges):
            for e2 in edges[i + 1:]:
                pieces = _sides_without_edges(d, e1, e2)
                if len(pieces) == 2:
                    f1, f2 = sorted(fs)
                    return CurveWitness("prime-violation", (e1, e2), (f1, f2), tuple(pieces))
    return True


def _curve_sides(d: PlanarDiagram, x: int, y: int, a: int):
    """Split the rest of the diagram along the curve through x, y leaving x
    between slots {a+1, a+2} and {a+3, a}.  Returns per side the crossing
    set and the set of y's slots, or None when inconsistent."""
    result = []
    for start in ((a + 1) % 4, (a + 2) % 4), ((a + 3) % 4, a % 4):
        crossings, yslots, xslots = set(), set(), set(start)
        todo = deque(hx(x, k) for k in start)
        seen = set(todo)
        while todo:
            h = todo.popleft()
            p = d.partner[h]
            z = p // 4
            if z == x:
                if p % 4 not in start:
                    return None
                continue
            if z == y:
                yslots.add(p % 4)
                continue
            if z not in crossings:
                crossings.add(z)
                for k in range(4):
                    g = hx(z, k)
                    if g not in seen:
                        seen.add(g)
                        todo.append(g)
        result.append((frozenset(crossings), frozenset(yslots)))
    (c1, y1), (c2, y2) = result
    if c1 & c2 or y1 & y2 or len(y1) != 2 or len(y2) != 2:
        return None
    return result


def _bigon_walk(d: PlanarDiagram, x: int, j: int, y: int, side: frozenset[int],
                corner_color: str | None, col: Coloring) -> bool:
    """Follow bigons from corner j of x, through opposite corners, and check
    the walk reaches y after visiting exactly the crossings of ``side``."""
    visited, cur, corner = set(), x, j
    while True:
        f = d.corner_face(cur, corner)
        walk = d._faces[0][f]
        if len(walk) != 2 or (corner_color is not None and col[f] != corner_color):
            return False
        nxt_h = [h for h in walk if not (h // 4 == cur and (h - 1) % 4 == corner)]
        if len(nxt_h) != 1:
            return False
        h = nxt_h[0]
        z, zc = h // 4, (h - 1) % 4
        if z == y:
            return visited == side
        if z == x or z in visited or z not in side:
            return False
        visited.add(z)
        cur, corner = z, (zc + 2) % 4


def _scan_twist_reduced(d: PlanarDiagram, col: Coloring, color: str | None):
    corners_of: dict[int, list[tuple[int, int]]] = {}
    for x in range(d.n):
        for j in range(4):
            corners_of.setdefault(d.corner_face(x, j), []).append((x, j))
    for x in range(d.n):
        for a in range(2):
            f1, f2 = d.corner_face(x, a), d.corner_face(x, a + 2)
            if f1 == f2:
                continue
            if color is not None and col[f1] != color:
                continue
            ys = {y for y, _ in corners_of[f1] if y != x}
            for y, b in corners_of[f2]:
                if y <= x or y not in ys:
                    continue
                if d.corner_face(y, b + 2) != f1:
                    continue
                sides = _curve_sides(d, x, y, a)
                if sides is None:
                    continue
                bigon_color = None if color is None else other_color(color)
                ok = False
                for (cs, yslots), corner in zip(sides, ((a + 1) % 4, (a + 3) % 4)):
                    if _bigon_walk(d, x, corner, y, cs, bigon_color, col):
                        ok = True
                        break
                if not ok:
                    return CurveWitness("twist-reduced-violation", (x, y), (f1, f2),
                                        (sides[0][0], sides[1][0]))
    return True


def is_twist_reduced(d: PlanarDiagram, col: Coloring) -> bool | CurveWitness:
    return _scan_twist_reduced(d, col, None)


def is_color_twist_reduced(d: PlanarDiagram, col: Coloring, color: str) -> bool | CurveWitness:
    return _scan_twist_reduced(d, col, color)


def twist_number(d: PlanarDiagram, col: Coloring) -> int:
    p = is_prime(d)
    if not p:
        raise NotPrime(p)
    w = is_twist_reduced(d, col)
    if not w:
        raise NotTwistReduced(w)
    return len(twist_regions(d, col))
