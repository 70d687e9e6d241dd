"""Euler characteristic bookkeeping for checkerboard, punctured and
twisted surfaces.

A checkerboard surface is presented as one disk per face of its colour and
one half-twisted band per crossing.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .augment import AugmentedDiagram
from .diagram import Coloring, PlanarDiagram
from .twist import TwistRegion, twist_regions


class RegionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceReport:
    kind: str
    color: str
    chi: int
    orientable: bool
    boundary: int
    embedded: bool = True
    ledger: tuple[dict, ...] = field(default=())
    note: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "color": self.color, "chi": self.chi,
                "orientable": self.orientable, "boundary": self.boundary,
                "embedded": self.embedded, "ledger": list(self.ledger), "note": self.note}


def _bands(d: PlanarDiagram, col: Coloring, color: str):
    """One band per crossing, joining the two corners of the colour."""
    out = []
    for x in range(d.n):
        js = [j for j in range(4) if col[d.corner_face(x, j)] == color]
        out.append((x, js[0], js[1]))
    return out


def _orientable(d: PlanarDiagram, col: Coloring, color: str) -> bool:
    # every band is half twisted, so orientability means the band graph
    # on the faces of this colour is bipartite
    side: dict[int, int] = {}
    adj: dict[int, list[int]] = {f: [] for f in col.faces_of(color)}
    for x, j1, j2 in _bands(d, col, color):
        f1, f2 = d.corner_face(x, j1), d.corner_face(x, j2)
        if f1 == f2:
            return False
        adj[f1].append(f2)
        adj[f2].append(f1)
    for s in adj:
        if s in side:
            continue
        side[s] = 0
        todo = [s]
        while todo:
            f = todo.pop()
            for g in adj[f]:
                if g not in side:
                    side[g] = 1 - side[f]
                    todo.append(g)
                elif side[g] == side[f]:
                    return False
    return True


def boundary_components(d: PlanarDiagram, col: Coloring, color: str) -> int:
    """Trace the boundary of the disk-and-band surface as a twisted ribbon
    graph.

    Each disk boundary alternates between free arcs (diagram edges) and
    band attachments (corners).  Walking a free arc forward we reach a
    corner; crossing a half-twisted band we land on the same-named end of
    the opposite corner and continue in reverse.
    """
    walks = d._faces[0]
    pos: dict[tuple[int, int], tuple[int, int]] = {}
    for f in col.faces_of(color):
        for k, h in enumerate(walks[f]):
            pos[(h // 4, (h - 1) % 4)] = (f, k)
    opposite = {}
    for x, j1, j2 in _bands(d, col, color):
        opposite[(x, j1)] = (x, j2)
        opposite[(x, j2)] = (x, j1)
    # states: (face, arc index, direction); arc k runs from corner k to
    # k+1, and each arc is used once in one direction or the other
    seen = set()
    count = 0
    for f in col.faces_of(color):
        for k in range(len(walks[f])):
            if (f, k, 1) in seen or (f, k, -1) in seen:
                continue
            count += 1
            state = (f, k, 1)
            while state not in seen:
                seen.add(state)
                g, a, dr = state
                ci = (a + 1) % len(walks[g]) if dr == 1 else a
                h = walks[g][ci]
                g2, c2 = pos[opposite[(h // 4, (h - 1) % 4)]]
                # the strand through the band exits next to the opposite
                # corner on the arc of the same slot parity
                if dr == 1:
                    state = (g2, (c2 - 1) % len(walks[g2]), -1)
                else:
                    state = (g2, c2, 1)
    return count


def checkerboard_surface_report(d: PlanarDiagram, col: Coloring, color: str) -> SurfaceReport:
    if d.n == 0:
        loops = max(d.free_loops, 1)
        return SurfaceReport("checkerboard", color, loops, True, loops)
    chi = col.count(color) - d.n
    return SurfaceReport("checkerboard", color, chi, _orientable(d, col, color),
                         boundary_components(d, col, color))


def punctured_surface_report(aug: AugmentedDiagram, color: str) -> SurfaceReport:
    if not aug.reduced:
        raise ValueError("punctured surfaces need a reduced stage")
    base = checkerboard_surface_report(aug.base, aug.col, color)
    k = sum(1 for c in aug.circles if c.punctured == color)
    return replace(base, kind="punctured", chi=base.chi - 2 * k, boundary=base.boundary + 2 * k)


def twisted_surface_report(aug: AugmentedDiagram, color: str) -> SurfaceReport:
    punct = punctured_surface_report(aug, color)
    mine = [c for c in aug.circles if c.punctured == color]
    ledger = tuple({"circle": c.id, "n_j": c.n_j,
                    "attachment": "annulus" if c.n_j % 2 else "two-Möbius-bands"} for c in mine)
    k = len(mine)
    orientable = punct.orientable and all(e["attachment"] == "annulus" for e in ledger)
    return replace(punct, kind="twisted", boundary=punct.boundary - 2 * k,
                   orientable=orientable, embedded=(k == 0), ledger=ledger,
                   note="boundary count by gluing rule: each attachment closes both puncture circles")


def twist_region_subsurface(d: PlanarDiagram, col: Coloring, region: TwistRegion, color: str) -> int:
    """Euler characteristic of one colour's surface inside a ball around the
    region: a disk on the side of the region's bigons, 2 - c on the other."""
    if set(region.crossings) not in [set(r.crossings) for r in twist_regions(d, col)]:
        raise RegionMismatch(f"{region.crossings} is not a twist region of this diagram")
    if region.color is None or color == region.color:
        return 1
    return 2 - region.c
