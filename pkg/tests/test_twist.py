import pytest

from twistlink.diagram import checkerboard, parse_pd
from twistlink.twist import (CurveWitness, NotPrime, NotTwistReduced, is_prime,
                             is_twist_reduced, twist_number, twist_regions)

from conftest import CORPUS, FIG8, GRANNY, HOPF, K5_2, P1213, P1313, TREFOIL


def bigon_components(d):
    parent = list(range(d.n))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for walk in d._faces[0]:
        if len(walk) == 2:
            parent[find(walk[0] // 4)] = find(walk[1] // 4)
    return [find(x) for x in range(d.n)]


def oracle_twist_reduced(d):
    """Any two crossings that share a pair of opposite regions belong to one
    chain of bigons.  Good enough for diagrams without closed chains."""
    comp = bigon_components(d)
    pairs = {}
    for x in range(d.n):
        for a in range(2):
            f1, f2 = d.corner_face(x, a), d.corner_face(x, a + 2)
            if f1 != f2:
                pairs.setdefault(frozenset((f1, f2)), set()).add(x)
    return all(len({comp[x] for x in xs}) == 1 for xs in pairs.values())


def oracle_prime(d):
    """Brute force over edge pairs: cutting two edges of a common region
    pair never separates crossings."""
    labels = list(d.labels)
    for i, e1 in enumerate(labels):
        for e2 in labels[i:]:
            fs1 = {d.face_of[h] for h in d.slots_of[e1]}
            fs2 = {d.face_of[h] for h in d.slots_of[e2]}
            if fs1 != fs2:
                continue
            adj = {x: set() for x in range(d.n)}
            for a, (h1, h2) in d.slots_of.items():
                if a not in (e1, e2):
                    adj[h1 // 4].add(h2 // 4)
                    adj[h2 // 4].add(h1 // 4)
            seen, todo = {0}, [0]
            while todo:
                for y in adj[todo.pop()] - seen:
                    seen.add(y)
                    todo.append(y)
            if len(seen) < d.n:
                return False
    return True


def test_trefoil_closed_region():
    d = parse_pd(TREFOIL)
    (r,) = twist_regions(d, checkerboard(d))
    assert r.c == 3 and r.closed


def test_hopf_closed_region():
    d = parse_pd(HOPF)
    (r,) = twist_regions(d, checkerboard(d))
    assert r.c == 2 and r.closed


def test_fig8_and_5_2():
    d = parse_pd(FIG8)
    col = checkerboard(d)
    assert sorted(r.c for r in twist_regions(d, col)) == [2, 2]
    assert twist_number(d, col) == 2
    d = parse_pd(K5_2)
    col = checkerboard(d)
    assert sorted(r.c for r in twist_regions(d, col)) == [2, 3]
    assert twist_number(d, col) == 2


@pytest.mark.parametrize("text", [P1313, P1213])
def test_not_twist_reduced_witness(text):
    d = parse_pd(text)
    col = checkerboard(d)
    w = is_twist_reduced(d, col)
    assert isinstance(w, CurveWitness) and not w
    x, y = w.through
    assert x != y
    s1, s2 = w.sides
    assert not (s1 & s2) and len(s1 | s2) == d.n - 2
    assert not oracle_twist_reduced(d)
    with pytest.raises(NotTwistReduced):
        twist_number(d, col)


def test_composite_witness():
    d = parse_pd(GRANNY)
    w = is_prime(d)
    assert not w and w.kind == "prime-violation"
    assert sorted(len(s) for s in w.sides) == [3, 3]
    assert not oracle_prime(d)
    with pytest.raises(NotPrime):
        twist_number(d, checkerboard(d))


@pytest.mark.parametrize("row", CORPUS, ids=lambda r: r["name"])
def test_corpus_against_oracles(row):
    d = parse_pd(row["pd"])
    col = checkerboard(d)
    assert (is_prime(d) is True) == oracle_prime(d)
    assert (is_twist_reduced(d, col) is True) == oracle_twist_reduced(d)
    regions = twist_regions(d, col)
    comp = bigon_components(d)
    assert len(regions) == len(set(comp))
    assert sum(r.c for r in regions) == d.n
    for r in regions:
        assert len({comp[x] for x in r.crossings}) == 1


@pytest.mark.parametrize("row", CORPUS, ids=lambda r: r["name"])
def test_region_order_follows_bigons(row):
    d = parse_pd(row["pd"])
    col = checkerboard(d)
    bigon_pairs = {frozenset((w[0] // 4, w[1] // 4)) for w in d._faces[0] if len(w) == 2}
    for r in twist_regions(d, col):
        for x, y in zip(r.crossings, r.crossings[1:]):
            assert frozenset((x, y)) in bigon_pairs
