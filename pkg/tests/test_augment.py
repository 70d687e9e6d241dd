from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from twistlink.augment import (ARC_N_TW, INJ_N_TW, AugmentedDiagram, CrossingCircle, NoCircles, NotAlternating, SplitBase, augment,
                               r_tw, reduce_twists, rtw_lower_bound, strip_circles, validate_augmented)
from twistlink.diagram import BLUE, checkerboard, parse_pd, validate
from twistlink.twist import NotPrime, NotTwistReduced, twist_regions

from conftest import CORPUS, FIG8, GRANNY, HOPF, K5_2, K8_19, P1313


def kept(c, i):
    return 1 if c % 2 else i


def oracle_bound(n_tw, i):
    # worst region is the shortest admissible one; parity decides what stays
    return min(c - kept(c, i) for c in range(n_tw, n_tw + 4))


@given(st.integers(2, 400), st.sampled_from([0, 2]))
def test_bound_matches_oracle(n, i):
    assert rtw_lower_bound(n, i) == oracle_bound(n, i)


def test_threshold_table():
    assert INJ_N_TW == {0: 54, 2: 91} and ARC_N_TW == {0: 72, 2: 121}
    assert [rtw_lower_bound(INJ_N_TW[0], 0), rtw_lower_bound(INJ_N_TW[2], 2),
            rtw_lower_bound(ARC_N_TW[0], 0), rtw_lower_bound(ARC_N_TW[2], 2)] == [54, 90, 72, 120]


def test_bound_rejects_other_i():
    with pytest.raises(ValueError):
        rtw_lower_bound(10, 1)


def test_fig8_stages():
    d = parse_pd(FIG8)
    aug = augment(d, None, 2)
    assert aug.stage == "L" and len(aug.circles) == 2
    red = reduce_twists(aug, 0)
    assert red.stage == "L_0"
    assert all(c.r == 0 and c.n_j == 1 for c in red.circles)
    assert validate_augmented(red).ok
    assert r_tw(red) == 2
    assert strip_circles(red).n == 0
    blue = reduce_twists(augment(d, None, 2, BLUE), 0)
    assert blue.stage == "L_B,0" and len(blue.circles) == 1


def test_large_threshold_leaves_nothing():
    red = reduce_twists(augment(parse_pd(FIG8), None, 91), 2)
    assert not red.circles
    with pytest.raises(NoCircles):
        r_tw(red)


def test_5_2_odd_region():
    red = reduce_twists(augment(parse_pd(K5_2), None, 3), 2)
    (c,) = red.circles
    assert (c.c, c.r, c.n_j) == (3, 1, 1)
    assert c.triangle and len(c.associated) == 1
    assert red.base.n == 3


def test_reduce_is_idempotent():
    red = reduce_twists(augment(parse_pd(K5_2), None, 2), 0)
    assert reduce_twists(red, 0) is red
    with pytest.raises(ValueError):
        reduce_twists(red, 2)


@pytest.mark.parametrize("text,exc", [(K8_19, NotAlternating), (GRANNY, NotPrime),
                                      (P1313, NotTwistReduced)])
def test_inadmissible_inputs(text, exc):
    with pytest.raises(exc):
        augment(parse_pd(text), None, 2)


SPLIT = {("L6a1", 2, 0)}


@pytest.mark.parametrize("row", CORPUS, ids=lambda r: r["name"])
@pytest.mark.parametrize("n_tw", [2, 3, 5])
@pytest.mark.parametrize("i", [0, 2])
def test_corpus_structure(row, n_tw, i):
    d = parse_pd(row["pd"])
    col = checkerboard(d)
    aug = augment(d, col, n_tw, BLUE)
    if (row["name"], n_tw, i) in SPLIT:
        with pytest.raises(SplitBase):
            reduce_twists(aug, i)
        return
    red = reduce_twists(aug, i)
    rep = validate_augmented(red)
    assert rep.ok, rep.failures()
    gone = sum(c.c - kept(c.c, i) for c in aug.circles)
    assert red.base.n == d.n - gone
    if red.base.n:
        assert validate(red.base).ok
    for c in red.circles:
        assert c.c == c.r + 2 * c.n_j
        assert 2 * c.n_j >= rtw_lower_bound(n_tw, i)
    if red.circles:
        assert r_tw(red) >= rtw_lower_bound(n_tw, i)


@pytest.mark.parametrize("row", CORPUS, ids=lambda r: r["name"])
@pytest.mark.parametrize("i", [0, 2])
def test_all_colours_caps(row, i):
    # the region items concern the blue stage only
    red = reduce_twists(augment(parse_pd(row["pd"]), None, 2), i)
    rep = validate_augmented(red)
    assert rep.ok, rep.failures()
    assert "blue-opposite-distinct" not in [n for n, _, _ in rep.items]
    lo, hi = (0, 1) if i == 0 else (1, 2)
    assert all(lo <= len(c.associated) <= hi for c in red.circles)
    assert all(c.n_j >= 1 for c in red.circles)


@pytest.mark.parametrize("row", CORPUS, ids=lambda r: r["name"])
def test_circles_cover_long_regions(row):
    d = parse_pd(row["pd"])
    col = checkerboard(d)
    aug = augment(d, col, 3)
    assert {c.region.crossings for c in aug.circles} == {
        r.crossings for r in twist_regions(d, col) if r.c >= 3}


def test_negative_control_one_face():
    red = reduce_twists(augment(parse_pd(FIG8), None, 2, BLUE), 0)
    c = red.circles[0]
    f = c.faces[0]
    broken = replace(red, circles=(replace(c, faces=(f, f)),))
    rep = validate_augmented(broken)
    names = [n for n, _ in rep.failures()]
    assert "circle-faces-distinct" in names
    assert {"circle": 0, "faces": [f, f]} in [w for _, w in rep.failures()]


def test_negative_control_hopf_circle():
    hopf = parse_pd(HOPF)
    col = checkerboard(hopf)
    (reg,) = twist_regions(hopf, col)
    circ = CrossingCircle(0, reg, BLUE, r=2, associated=(0, 1), faces=(0, 1))
    aug = AugmentedDiagram(hopf, hopf, col, (circ,), (0, 1), "L_B,2", 2, 2)
    rep = validate_augmented(aug)
    assert "no-22-torus-encircled" in [n for n, _ in rep.failures()]
