"""Crossing-circle augmentation and twist removal.

Circles are bookkeeping records attached to a twist region; the four
crossings a circle would add to a picture are never materialised.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .diagram import (BLUE, RED, Coloring, DiagramError, PlanarDiagram, checkerboard,
                      is_alternating, other_color)
from .twist import (CurveWitness, NotPrime, NotTwistReduced, TwistRegion, is_color_twist_reduced,
                    is_prime, is_twist_reduced, twist_regions)

INJ_N_TW = {0: 54, 2: 91}
ARC_N_TW = {0: 72, 2: 121}


class NotAlternating(ValueError):
    pass


class NoCircles(ValueError):
    pass


class SplitBase(DiagramError):
    """Removing crossings leaves a component with no crossings at all, so
    the link with its circles dropped is split."""


def rtw_lower_bound(n_tw: int, i: int) -> int:
    """Least number of crossings removed from any circled region."""
    if i == 0:
        return 2 * (n_tw // 2)
    if i == 2:
        return 2 * (-(-n_tw // 2)) - 2
    raise ValueError(f"i must be 0 or 2, got {i}")


@dataclass(frozen=True)
class CrossingCircle:
    id: int
    region: TwistRegion
    punctured: str
    r: int | None = None
    associated: tuple[int, ...] = ()
    faces: tuple[int, ...] = ()
    triangle: bool = False
    bigon_threading: bool = False

    @property
    def c(self) -> int:
        return self.region.c

    @property
    def n_j(self) -> int | None:
        return None if self.r is None else (self.c - self.r) // 2

    def to_json(self) -> dict:
        return {"id": self.id, "region": list(self.region.crossings), "c": self.c, "r": self.r,
                "n_j": self.n_j, "associated": list(self.associated), "color": self.punctured,
                "sign": self.region.sign, "faces": list(self.faces),
                "flags": {"triangle": self.triangle, "bigon_threading": self.bigon_threading}}


@dataclass(frozen=True)
class AugmentedDiagram:
    source: PlanarDiagram
    base: PlanarDiagram
    col: Coloring
    circles: tuple[CrossingCircle, ...]
    provenance: tuple[int, ...]
    stage: str
    n_tw: int
    i: int | None = None
    dropped: tuple[CrossingCircle, ...] = field(default=())

    @property
    def reduced(self) -> bool:
        return self.i is not None

    def to_json(self) -> dict:
        from .diagram import to_json
        return {"stage": self.stage, "i": self.i, "n_tw": self.n_tw,
                "base": to_json(self.base, self.col) if self.base.n else {"crossings": [], "free_loops": self.base.free_loops},
                "circles": [c.to_json() for c in self.circles],
                "dropped": [c.to_json() for c in self.dropped],
                "provenance": list(self.provenance)}


def augment(d: PlanarDiagram, col: Coloring | None, n_tw: int, color_filter: str = "all") -> AugmentedDiagram:
    if n_tw < 1:
        raise ValueError("N_tw must be at least 1")
    if color_filter not in ("all", BLUE):
        raise ValueError("color_filter must be 'all' or 'blue'")
    col = col or checkerboard(d)
    if not is_alternating(d):
        raise NotAlternating("diagram is not alternating")
    p = is_prime(d)
    if not p:
        raise NotPrime(p)
    w = is_twist_reduced(d, col)
    if not w:
        raise NotTwistReduced(w)
    circles = []
    for reg in twist_regions(d, col):
        # a lone crossing has no bigon colour and nothing to untwist
        if reg.c < max(n_tw, 2) or reg.color is None:
            continue
        punctured = other_color(reg.color)
        if color_filter == BLUE and punctured != BLUE:
            continue
        circles.append(CrossingCircle(len(circles), reg, punctured))
    stage = "L" if color_filter == "all" else "L_B"
    return AugmentedDiagram(d, d, col, tuple(circles), tuple(range(d.n)), stage, n_tw)


def remove_crossings(d: PlanarDiagram, removed: set[int]):
    """Delete crossings and splice strands straight through them.

    Returns the new diagram and, for each new edge label, the set of removed
    crossings its strand passed through.  New labels are assigned 1..2m in
    the order of the smallest original label at either end.
    """
    keep = [x for x in range(d.n) if x not in removed]
    index = {x: k for k, x in enumerate(keep)}
    ends: dict[int, int] = {}
    via: dict[int, frozenset[int]] = {}
    spent: set[int] = set()
    for x in keep:
        for k in range(4):
            h = 4 * x + k
            if h in ends:
                continue
            p, path = d.partner[h], set()
            while p // 4 in removed:
                path.add(p // 4)
                spent.add(p)
                q = d.through(p)
                spent.add(q)
                p = d.partner[q]
            ends[h], ends[p] = p, h
            via[h] = via[p] = frozenset(path)
    loose = {4 * x + k for x in removed for k in range(4)} - spent
    loops = 0
    while loose:
        h = g = loose.pop()
        loops += 1
        while True:
            q = d.through(g)
            loose.discard(q)
            g = d.partner[q]
            if g == h:
                break
            loose.discard(g)
    if keep and loops:
        raise SplitBase(f"removing crossings leaves {loops} split unknotted component(s)")
    pairs = sorted({(min(h, p), max(h, p)) for h, p in ends.items()},
                   key=lambda hp: min(d.label_at(hp[0]), d.label_at(hp[1])))
    new_label: dict[int, int] = {}
    paths: dict[int, frozenset[int]] = {}
    for lab, (h, p) in enumerate(pairs, start=1):
        new_label[h] = new_label[p] = lab
        paths[lab] = via[h]
    xs = tuple(tuple(new_label[4 * x + k] for k in range(4)) for x in keep)
    prov = tuple(d.provenance[x] if d.provenance else x for x in keep)
    base = PlanarDiagram(xs, free_loops=loops if not keep else 0, provenance=prov)
    return base, paths, index


def _aligned_coloring(source: PlanarDiagram, scol: Coloring, base: PlanarDiagram, keep: list[int]) -> Coloring:
    if base.n == 0:
        return Coloring(())
    bcol = checkerboard(base)
    x0 = keep[0]
    if bcol[base.corner_face(0, 0)] != scol[source.corner_face(x0, 0)]:
        bcol = Coloring(tuple(other_color(c) for c in bcol.colors))
    return bcol


def reduce_twists(aug: AugmentedDiagram, i: int) -> AugmentedDiagram:
    if i not in (0, 2):
        raise ValueError(f"i must be 0 or 2, got {i}")
    if aug.reduced:
        if aug.i != i:
            raise ValueError(f"already reduced with i={aug.i}")
        return aug
    d, col = aug.source, aug.col
    plan, removed = [], set()
    for circ in aug.circles:
        r = 1 if circ.c % 2 else i
        gone = set(circ.region.crossings[r:])
        plan.append((circ, r, gone))
        removed |= gone
    base, paths, index = remove_crossings(d, removed)
    keep = sorted(index, key=index.get)
    bcol = _aligned_coloring(d, col, base, keep)
    kept, dropped = [], []
    for circ, r, gone in plan:
        assoc = tuple(index[x] for x in circ.region.crossings[:r])
        faces = _punctured_faces(base, bcol, circ.punctured, assoc, paths, gone)
        new = replace(circ, r=r, associated=assoc, faces=faces,
                      triangle=(r == 1), bigon_threading=(r == 2))
        (kept if new.n_j >= 1 else dropped).append(new)
    kept = [replace(c, id=k) for k, c in enumerate(kept)]
    stage = {"L": f"L_{i}", "L_B": f"L_B,{i}"}[aug.stage]
    return AugmentedDiagram(d, base, bcol, tuple(kept), base.provenance or (), stage,
                            aug.n_tw, i, tuple(dropped))


def _punctured_faces(base, bcol, color, assoc, paths, gone) -> tuple[int, ...]:
    """The two faces of the punctured colour the circle passes through."""
    if base.n == 0:
        return ()
    if assoc:
        x = assoc[0]
        return tuple(sorted({base.corner_face(x, j) for j in range(4)
                             if bcol[base.corner_face(x, j)] == color}))
    found = set()
    for lab, path in paths.items():
        if path & gone:
            h1, h2 = base.slots_of[lab]
            for f in (base.face_of[h1], base.face_of[h2]):
                if bcol[f] == color:
                    found.add(f)
    return tuple(sorted(found))


def strip_circles(aug: AugmentedDiagram) -> PlanarDiagram:
    if not aug.reduced:
        raise ValueError("strip_circles needs a reduced stage")
    return aug.base


def r_tw(aug: AugmentedDiagram) -> int:
    if not aug.reduced:
        raise ValueError("r_tw needs a reduced stage")
    if not aug.circles:
        raise NoCircles("no crossing circles")
    value = min(2 * c.n_j for c in aug.circles)
    bound = rtw_lower_bound(aug.n_tw, aug.i)
    assert value >= bound, (value, bound)
    return value


@dataclass(frozen=True)
class StructureReport:
    items: tuple[tuple[str, bool, object], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.items)

    def failures(self) -> list[tuple[str, object]]:
        return [(name, w) for name, passed, w in self.items if not passed]

    def to_json(self) -> dict:
        def enc(w):
            return w.to_json() if isinstance(w, CurveWitness) else w
        return {"ok": self.ok, "items": [{"name": n, "pass": p, "witness": enc(w)} for n, p, w in self.items]}


def _opposite_distinct(base: PlanarDiagram, col: Coloring, color: str):
    for x in range(base.n):
        fs = [base.corner_face(x, j) for j in range(4) if col[base.corner_face(x, j)] == color]
        if len(fs) == 2 and fs[0] == fs[1]:
            return {"crossing": x, "face": fs[0]}
    return None


def is_22_torus(base: PlanarDiagram) -> bool:
    return (base.n == 2 and len(base.components) == 2
            and all(len(w) == 2 for w in base._faces[0]))


def validate_augmented(aug: AugmentedDiagram) -> StructureReport:
    """Structural checks on a reduced stage.

    The region items (opposite regions distinct, circles meeting two
    distinct regions, shared crossings associated, blue twist reduction)
    are statements about the blue stages L_B,i and only run there.  The
    association caps and the (2,2)-torus exclusion run on every stage.
    """
    if not aug.reduced:
        raise ValueError("validate_augmented needs a reduced stage")
    base, col, i = aug.base, aug.col, aug.i
    blue = aug.stage.startswith("L_B")
    items: list[tuple[str, bool, object]] = []

    if blue:
        items.extend(_region_items(aug))

    cap_lo, cap_hi = (0, 1) if i == 0 else (1, 2)
    bad = [c.id for c in aug.circles if not cap_lo <= len(c.associated) <= cap_hi]
    items.append(("association-cap", not bad, {"circles": bad} if bad else None))

    w = None
    if is_22_torus(base):
        for c in aug.circles:
            if len(set(c.associated)) == 2:
                w = {"circle": c.id, "associated": list(c.associated)}
    items.append(("no-22-torus-encircled", w is None, w))

    if i == 2 and base.n:
        p = is_prime(base)
        items.append(("base-prime", bool(p), None if p else p))
    if blue and base.n:
        t = is_color_twist_reduced(base, col, BLUE)
        items.append(("blue-twist-reduced", bool(t), None if t else t))
    return StructureReport(tuple(items))


def _region_items(aug: AugmentedDiagram):
    base, col, i = aug.base, aug.col, aug.i
    items = []
    w = _opposite_distinct(base, col, BLUE)
    items.append(("blue-opposite-distinct", w is None, w))
    if i == 2:
        w = _opposite_distinct(base, col, RED)
        items.append(("red-opposite-distinct", w is None, w))

    w = None
    for c in aug.circles:
        if base.n and len(set(c.faces)) != 2:
            w = {"circle": c.id, "faces": list(c.faces)}
            break
    items.append(("circle-faces-distinct", w is None, w))

    w = None
    for c in aug.circles:
        if len(set(c.faces)) != 2:
            continue
        t, b = c.faces
        for x in range(base.n):
            at = {base.corner_face(x, j) for j in range(4)}
            if t in at and b in at and x not in c.associated:
                w = {"circle": c.id, "crossing": x, "faces": [t, b]}
                break
        if w:
            break
    items.append(("shared-crossing-associated", w is None, w))
    return items
