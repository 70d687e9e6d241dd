import json
from pathlib import Path

import pytest

from twistlink.augment import augment, reduce_twists
from twistlink.diagram import BLUE, RED, checkerboard, parse_pd
from twistlink.maps.graph import EmbeddedGraph
from twistlink.surfaces import (RegionMismatch, checkerboard_surface_report,
                                punctured_surface_report, twist_region_subsurface,
                                twisted_surface_report)
from twistlink.twist import TwistRegion, twist_regions

from conftest import CORPUS, FIG8, HOPF, TREFOIL

FAMILY = [json.loads(line) for line in
          (Path(__file__).parent / "data/pretzel_family.jsonl").read_text().splitlines()]


def tangle_counts(c):
    """Disk-and-band count for a row of c crossings inside a ball.

    The tangle is drawn as a plane graph: crossings joined left to right by
    pairs of strands, four endpoints on a boundary circle.  Returns the
    Euler characteristic of each colour (bigon side first).
    """
    rot, e = [], [0]

    def edge():
        e[0] += 2
        return e[0] - 2, e[0] - 1

    top = [edge() for _ in range(c - 1)]
    bot = [edge() for _ in range(c - 1)]
    lt, lb, rt, rb = edge(), edge(), edge(), edge()
    a_top, a_left, a_bot, a_right = edge(), edge(), edge(), edge()
    for k in range(c):
        ne = top[k][0] if k < c - 1 else rt[0]
        nw = top[k - 1][1] if k else lt[1]
        sw = bot[k - 1][1] if k else lb[1]
        se = bot[k][0] if k < c - 1 else rb[0]
        rot.append([ne, nw, sw, se])
    # endpoints, counterclockwise: NW, SW, NE, SE
    rot.append([a_top[1], a_left[0], lt[0]])
    rot.append([lb[0], a_left[1], a_bot[0]])
    rot.append([a_top[0], rt[1], a_right[1]])
    rot.append([a_right[0], rb[1], a_bot[1]])
    g = EmbeddedGraph.from_rotations(rot)
    arcs = {d for p in (a_top, a_left, a_bot, a_right) for d in p}
    walks = [w for w in g.face_walks]
    assert len(g.degrees) - g.n_edges + len(walks) == 2
    inner = [w for w in walks if not all(d in arcs for d in w)]
    assert len(inner) == len(walks) - 1
    # 2-colour across strand edges
    face_of = {d: i for i, w in enumerate(inner) for d in w}
    colour = {0: 0}
    todo = [0]
    while todo:
        i = todo.pop()
        for d in inner[i]:
            if d in arcs:
                continue
            j = face_of[d ^ 1]
            if j not in colour:
                colour[j] = 1 - colour[i]
                todo.append(j)
            assert colour[j] != colour[i]
    left = face_of[a_left[1]] if a_left[1] in face_of else face_of[a_left[0]]
    side = colour[left]
    n_side = sum(1 for i in colour if colour[i] == side)
    return n_side - c, len(inner) - n_side - c


def local_count(d, col, region, colour):
    """The same count read off a whole diagram: corners of the region that
    are joined through edges of its bigon chain form one disk."""
    xs = set(region.crossings)
    chain = set()
    for w in d._faces[0]:
        if len(w) == 2 and {h // 4 for h in w} <= xs and w[0] // 4 != w[1] // 4:
            chain |= {d.label_at(h) for h in w}
    parent = {}

    def find(u):
        while parent[u] != u:
            u = parent[u]
        return u

    for w in d._faces[0]:
        for k, h in enumerate(w):
            if h // 4 in xs and col[d.face_of[h]] == colour:
                parent.setdefault(h, h)
        for k, h in enumerate(w):
            nxt = w[(k + 1) % len(w)]
            if h in parent and nxt in parent and d.label_at(h) in chain:
                parent[find(h)] = find(nxt)
    return len({find(u) for u in parent}) - len(xs)


@pytest.mark.parametrize("c", range(1, 11))
def test_subsurface_tangle(c):
    side, other = tangle_counts(c)
    assert side == 1
    assert other == 2 - c


@pytest.mark.parametrize("row", FAMILY, ids=lambda r: r["name"])
def test_subsurface_in_diagram(row):
    d = parse_pd(row["pd"])
    col = checkerboard(d)
    reg = next(r for r in twist_regions(d, col) if r.c == row["c"])
    side = reg.color or col[d.corner_face(reg.crossings[0], 0)]
    for colour in (BLUE, RED):
        got = twist_region_subsurface(d, col, reg, colour)
        assert got == local_count(d, col, reg, colour)
        assert got == (1 if colour == side else 2 - reg.c)


def test_subsurface_rejects_foreign_region():
    d = parse_pd(FIG8)
    with pytest.raises(RegionMismatch):
        twist_region_subsurface(d, checkerboard(d), TwistRegion((0, 2), BLUE), BLUE)


def test_trefoil_surfaces():
    d = parse_pd(TREFOIL)
    col = checkerboard(d)
    reps = {c: checkerboard_surface_report(d, col, c) for c in (BLUE, RED)}
    by_chi = sorted(reps.values(), key=lambda r: r.chi)
    assert (by_chi[0].chi, by_chi[0].orientable) == (-1, True)
    assert (by_chi[1].chi, by_chi[1].orientable) == (0, False)
    assert all(r.boundary == 1 for r in reps.values())


def test_hopf_annuli():
    d = parse_pd(HOPF)
    col = checkerboard(d)
    for c in (BLUE, RED):
        r = checkerboard_surface_report(d, col, c)
        assert (r.chi, r.orientable, r.boundary) == (0, True, 2)


@pytest.mark.parametrize("row", CORPUS, ids=lambda r: r["name"])
def test_checkerboard_ledger(row):
    d = parse_pd(row["pd"])
    col = checkerboard(d)
    b = checkerboard_surface_report(d, col, BLUE)
    r = checkerboard_surface_report(d, col, RED)
    assert b.chi + r.chi == len(col.colors) - 2 * d.n
    # the boundary of a spanning surface is the link
    assert b.boundary == r.boundary == len(d.components)


@pytest.mark.parametrize("row", CORPUS, ids=lambda r: r["name"])
@pytest.mark.parametrize("i", [0, 2])
def test_puncture_and_twist_ledger(row, i):
    d = parse_pd(row["pd"])
    red = reduce_twists(augment(d, None, 3), i)
    if red.base.n == 0:
        return
    for colour in (BLUE, RED):
        base = checkerboard_surface_report(red.base, red.col, colour)
        k = sum(1 for c in red.circles if c.punctured == colour)
        p = punctured_surface_report(red, colour)
        t = twisted_surface_report(red, colour)
        assert p.chi == base.chi - 2 * k
        assert t.chi == p.chi
        assert t.embedded == (k == 0)
        for entry, circ in zip(t.ledger, [c for c in red.circles if c.punctured == colour]):
            assert entry["n_j"] == circ.n_j
            assert entry["attachment"] == ("annulus" if circ.n_j % 2 else "two-Möbius-bands")
