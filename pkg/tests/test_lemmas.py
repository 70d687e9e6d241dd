from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from twistlink.maps import checks as C
from twistlink.maps import kernels as K
from twistlink.maps.enumerate import Constraints, batches
from twistlink.maps.graph import ContextMismatch, EmbeddedGraph, cycle, octahedron, wheel
from twistlink.maps.lemmas import (COUNTEREXAMPLE, HOLDS, VACUOUS, ComplexityTuple,
                                   HypothesisViolated, bigon_threshold, check_bigon_bound,
                                   check_disk_lemma, check_sphere_lemma, check_torus_lemma,
                                   complexity, disk_lemma_via_double, lemma_class,
                                   search_counterexamples)

from test_maps_graph import hub_graph, square


def graphs(context, E, cons):
    for rows, outer in batches(context, E, cons):
        for rho in rows:
            if rho.shape[0]:
                yield rho, outer, EmbeddedGraph.from_arrays(
                    rho, context, outer if context == "disk" else None)


def low_count(G, below):
    return sum(1 for d in G.degrees if d < below)


def test_sphere_paths_agree():
    n = 0
    for rho, _, G in graphs("sphere", 7, Constraints(1)):
        batch = bool(C.sphere_rows(rho.reshape(1, -1))[0])
        assert batch == (low_count(G, 6) >= 3)
        v = check_sphere_lemma(G)
        assert v.status in (HOLDS, VACUOUS)
        if v.status == HOLDS:
            assert batch
        n += 1
    assert n > 1000


def test_sphere_vacuous_reasons():
    assert check_sphere_lemma(EmbeddedGraph((), isolated_vertex=True)).status == VACUOUS
    loop = EmbeddedGraph((1, 0))
    assert check_sphere_lemma(loop).reason == "has a monogon"
    assert check_sphere_lemma(octahedron()).status == HOLDS
    with pytest.raises(ContextMismatch):
        check_sphere_lemma(cycle(3))


def test_disk_paths_agree():
    n = 0
    for rho, outer, G in graphs("disk", 7, Constraints(3)):
        row = rho.reshape(1, -1)
        direct = check_disk_lemma(G)
        doubled = disk_lemma_via_double(G)
        verdict, sane = C.doubled_disk_rows(row, outer)
        assert direct.status == doubled.status == HOLDS
        assert bool(C.disk_rows(row, outer)[0]) and bool(verdict[0]) and bool(sane[0])
        n += 1
    assert n > 2000


def test_disk_lemma_cases():
    assert check_disk_lemma(wheel(5)).reason == "interior vertex"
    assert check_disk_lemma(cycle(4)).reason == "boundary vertices"
    two = cycle(2)
    assert check_disk_lemma(two).status == VACUOUS


def test_torus_paths_agree():
    for rho, _, G in graphs("torus", 6, Constraints(3)):
        v = check_torus_lemma(G)
        assert v.status == HOLDS
        assert bool(C.torus_rows(rho.reshape(1, -1))[0])
        assert v.witness["valence"] == min(G.degrees)


def with_exceptions(G, rtw):
    bdy = G.boundary_vertices
    fails = [v for v, d in enumerate(G.degrees) if d < (rtw // 2 + 1 if v in bdy else rtw)]
    return replace(G, exceptional=frozenset(fails))


@pytest.mark.parametrize("rtw", [6, 12])
def test_bigon_paths_agree(rtw):
    ctx, cons = lemma_class("bigon-bound", rtw)
    for rho, outer, G in graphs(ctx, 9, cons):
        ok, lengths = C.bigon_rows(rho.reshape(1, -1), outer, rtw)
        v = check_bigon_bound(with_exceptions(G, rtw), rtw)
        fam = v.witness["family"]
        assert (fam["length"] if fam else 0) == lengths[0]
        assert (v.status == HOLDS) == bool(ok[0])


def leaf_in_loop():
    G = EmbeddedGraph.from_arrays(K.add_leaf(cycle(1).arr, 1), "disk",
                                  list(cycle(1).outer) + [False, False])
    return with_exceptions(G, 6)


def test_bigon_bound_fails_on_leaf_in_loop():
    G = leaf_in_loop()
    assert len(G.exceptional) == 2
    v = check_bigon_bound(G, 6)
    assert v.status == COUNTEREXAMPLE and v.witness["family"] is None
    assert v.witness["bound"] == "0"


def test_bigon_bound_c2_at_12():
    G = with_exceptions(cycle(2), 12)
    assert len(G.exceptional) == 2
    assert check_bigon_bound(G, 12).status == COUNTEREXAMPLE
    assert check_bigon_bound(with_exceptions(cycle(2), 6), 6).status == HOLDS


def test_bigon_bound_hub():
    v = check_bigon_bound(hub_graph(), 12)
    assert v.status == HOLDS
    assert v.witness["family"]["length"] == 5


def test_bigon_hypothesis_clauses():
    with pytest.raises(HypothesisViolated) as info:
        check_bigon_bound(wheel(5), 12)
    assert any("miss the valence schedule" in c for c in info.value.clauses)
    with pytest.raises(HypothesisViolated) as info:
        check_bigon_bound(replace(hub_graph(), exceptional=frozenset({0, 1, 2})), 12)
    assert any("at most 2" in c for c in info.value.clauses)
    with pytest.raises(HypothesisViolated, match="context"):
        check_bigon_bound(octahedron(), 6)
    with pytest.raises(ValueError):
        check_bigon_bound(hub_graph(), 7)


def test_bigon_square_variant():
    v = check_bigon_bound(square(True), 2, "square")
    assert v.status == HOLDS
    assert bigon_threshold(16, "square") == Fraction(1)


@given(st.integers(1, 60).map(lambda k: 2 * k))
def test_threshold_formula(rtw):
    t = bigon_threshold(rtw)
    assert t == Fraction(rtw, 6) - 1
    # the integer test used by the batch checker
    assert all((k > t) == (6 * k > rtw - 6) for k in range(0, 30))


def test_campaign_reports():
    rep = search_counterexamples("disk", 7)
    assert rep.ok and rep.extra["cross_disagree"] == 0 and rep.extra["double_not_clean"] == 0
    assert rep.instances_checked == sum(rep.counts.values())
    bad = search_counterexamples("bigon-bound", 8, 6)
    assert not bad.ok and bad.n_counterexamples > 0
    assert set(bad.extra["counterexample_split"]) <= {"interior_exception",
                                                      "boundary_exceptions_only"}
    assert len(bad.counterexamples) <= 20


def test_campaign_workers_do_not_change_result():
    one = search_counterexamples("bigon-bound", 8, 6, workers=1)
    two = search_counterexamples("bigon-bound", 8, 6, workers=2, split_edges=4)
    assert one.digest() == two.digest()


def test_lemma_class_errors():
    with pytest.raises(ValueError):
        lemma_class("bigon-bound")
    with pytest.raises(ValueError):
        lemma_class("bigon-bound", 7)
    with pytest.raises(ValueError):
        lemma_class("klein")


def test_complexity_order():
    a = ComplexityTuple(1, 2, 3, 4)
    assert complexity(a, ComplexityTuple(1, 2, 3, 5)) == "less"
    assert complexity(a, ComplexityTuple(0, 9, 9, 9)) == "greater"
    assert complexity(a, ComplexityTuple(1, 2, 3, 4)) == "equal"
    with pytest.raises(ValueError):
        ComplexityTuple(3, 2, 3, 0)
    with pytest.raises(ValueError):
        ComplexityTuple(-1, 0, 0, 0)
