"""Linking gadget: weight formulas, admissibility refusals, arrangement
geometry, planarity of the drawing, and the faithfulness certificate."""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from paramenv.exact import AffineForm
from paramenv.gadget import (
    Arrangement,
    GadgetSpec,
    arrangement_geometry,
    check_planar_embedding,
    link_weights,
    main_link_spec,
    planarize,
    verify_faithful,
    zero_base,
)
from paramenv.graph import dist_from_at, path_cost_form


def test_link_weights_quadratic_charge_form():
    spec = GadgetSpec(1, 3, zero_base(1, 3), F(9), F(1))
    w = link_weights(spec)
    assert w[(0, 0)] == AffineForm(0, 0)
    assert w[(0, 1)] == AffineForm(9, 1)
    assert w[(0, 2)] == AffineForm(27, 2)
    assert w[(0, 3)] == AffineForm(54, 3)
    assert set(w) == {(0, 0), (0, 1), (0, 2), (0, 3)}


def test_gadget_spec_refuses_weak_gap():
    with pytest.raises(ValueError):
        GadgetSpec(1, 3, zero_base(1, 3), F(1), F(1))  # threshold is 9
    with pytest.raises(ValueError):
        # a base charge of max modulus 2 raises the threshold to 9*(1+4)
        GadgetSpec(1, 3, ((0, 2, -2, 0),), F(44), F(1))
    GadgetSpec(1, 3, ((0, 2, -2, 0),), F(45), F(1))  # exactly admissible


def test_main_link_spec_frozen():
    spec = main_link_spec(3, 1, 0)
    w = link_weights(spec)
    assert w[(0, 1)] == AffineForm(14580, -1620)
    assert spec.gap == 14580
    assert spec.rate == F(-14580, 9)
    with pytest.raises(ValueError):
        main_link_spec(3, 1, 2)  # |drift| > 1


def test_main_link_spec_base_charges_scale_with_drift():
    spec = main_link_spec(3, 2, F(1, 2))
    # charge N*D*r*b with N=9: row b=1, rise r=2 gives 9
    assert spec.base[1][2] == 9
    assert spec.base[0] == (0, 0, 0, 0)
    w = link_weights(spec)
    assert w[(1, 3)] == AffineForm(9 + spec.gap * 3, spec.rate * 2)


def test_arrangement_crossing_frozen():
    geo = arrangement_geometry(4, 3)
    # segment (0,0)->(1,3) meets the flat segment (0,1)->(1,1) at (1/3, 1)
    assert (F(1, 3), F(1)) in geo.points
    assert geo.points == tuple(sorted(geo.points))
    assert [geo.points[i] for i in geo.left_ids] == [(F(0), F(b)) for b in range(4)]
    assert [geo.points[i] for i in geo.right_ids] == [(F(1), F(j)) for j in range(7)]


def test_arrangement_chains_cover_segments():
    geo = arrangement_geometry(4, 3)
    for (b, j), chain in geo.chains.items():
        pts = [geo.points[i] for i in chain]
        assert pts[0] == (F(0), F(b))
        assert pts[-1] == (F(1), F(j))
        r = j - b
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            assert x1 < x2
            assert y1 == b + r * x1 and y2 == b + r * x2  # stays on the segment
    spans = [frag[3] for frag in geo.fragments]
    assert sum(spans) == len(geo.chains)  # each segment's spans telescope to 1


def test_span_denominator_bound():
    for width, n in [(1, 3), (4, 3), (3, 4), (2, 5)]:
        arr = planarize(GadgetSpec(width, n, zero_base(width, n), F(n * n), F(1)))
        assert max(s.denominator for s in arr.spans) <= n * n


def test_planarize_is_planar_and_telescopes():
    arr = planarize(GadgetSpec(4, 3, zero_base(4, 3), F(9), F(1)))
    assert check_planar_embedding(arr.graph) is None
    w = link_weights(arr.spec)
    for seg, chain in arr.geometry.chains.items():
        assert path_cost_form(arr.graph, chain) == w[seg]


def test_check_planar_embedding_detects_crossing():
    from paramenv.graph import Edge, ParametricGraph

    g = ParametricGraph(
        4,
        0,
        3,
        [Edge(0, 3, AffineForm(0, 0)), Edge(1, 2, AffineForm(0, 0))],
        embedding=[(F(0), F(0)), (F(0), F(1)), (F(1), F(0)), (F(1), F(1))],
    )
    assert check_planar_embedding(g) == (0, 1)


def test_verify_faithful_accepts_zero_base_gadget():
    arr = planarize(GadgetSpec(4, 3, zero_base(4, 3), F(9), F(1)))
    report = verify_faithful(arr, lambdas=(0, 1, F(-7, 3)))
    assert report.ok, report.failures
    assert report.slope_decomposition_ok
    assert report.pair_count == 4 * 7
    assert report.max_span_denominator <= 9


def test_verify_faithful_exhaustive_small():
    arr = planarize(GadgetSpec(2, 2, zero_base(2, 2), F(4), F(3)))
    report = verify_faithful(arr, lambdas=(F(1, 2),), exhaustive=True)
    assert report.ok, report.failures


def test_verify_faithful_flags_tampering():
    arr = planarize(GadgetSpec(2, 2, zero_base(2, 2), F(4), F(3)))
    bad_edges = list(arr.graph.edges)
    # halve one nonzero fragment weight: telescoping and optimality break
    idx = next(i for i, e in enumerate(bad_edges) if e.weight.a != 0)
    victim = bad_edges[idx]
    bad_edges[idx] = type(victim)(victim.tail, victim.head, victim.weight.scaled(F(1, 2)))
    bad_graph = type(arr.graph)(
        arr.graph.vertex_count,
        arr.graph.source,
        arr.graph.sink,
        bad_edges,
        embedding=arr.graph.embedding,
    )
    report = verify_faithful(
        Arrangement(arr.spec, arr.geometry, bad_graph, arr.spans, arr.segment_of)
    )
    assert not report.ok


def test_verify_faithful_unreachable_pairs():
    arr = planarize(GadgetSpec(3, 2, zero_base(3, 2), F(4), F(1)))
    g, geo = arr.graph, arr.geometry
    # pair (2, 0) has negative rise: no route may exist
    assert dist_from_at(g, 0, geo.left_ids[2])[geo.right_ids[0]] is None
    report = verify_faithful(arr)
    assert report.ok
