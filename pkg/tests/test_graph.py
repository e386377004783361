"""Envelope DP against the brute-force path-enumeration oracle, plus the
surrounding fixed-parameter machinery and the alternation scanner."""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from helpers import random_dag
from paramenv.exact import AffineForm, PwlFunction, is_concave
from paramenv.graph import (
    Edge,
    ParametricGraph,
    check_alternation_free_paths,
    dist_from_at,
    dist_to_at,
    enumerate_paths,
    envelope_bruteforce,
    envelope_dp,
    fixed_lambda_shortest,
    path_cost_form,
    second_best_at,
    topo_order,
    _alternation_general,
)


def diamond() -> ParametricGraph:
    # two length-2 routes: cost x via vertex 1, cost 1 via vertex 2
    return ParametricGraph(
        4,
        0,
        3,
        [
            Edge(0, 1, AffineForm(0, 1)),
            Edge(1, 3, AffineForm(0, 0)),
            Edge(0, 2, AffineForm(1, 0)),
            Edge(2, 3, AffineForm(0, 0)),
        ],
    )


def test_topo_order_is_topological():
    g = diamond()
    order = topo_order(g)
    rank = {v: i for i, v in enumerate(order)}
    assert sorted(order) == list(range(4))
    assert all(rank[e.tail] < rank[e.head] for e in g.edges)


def test_topo_order_rejects_cycle():
    g = ParametricGraph(2, 0, 1, [Edge(0, 1, AffineForm(0, 0)), Edge(1, 0, AffineForm(0, 0))])
    with pytest.raises(ValueError):
        topo_order(g)


def test_validate_flags():
    g = diamond()
    assert g.validate() == []
    g2 = ParametricGraph(3, 0, 2, [Edge(1, 0, AffineForm(0, 0))])
    warns = g2.validate()
    assert any("incoming" in w for w in warns)
    assert any("not reachable" in w for w in warns)
    with pytest.raises(ValueError):
        ParametricGraph(2, 0, 5, []).validate()


def test_envelope_dp_frozen_diamond():
    env = envelope_dp(diamond())
    assert env.function == PwlFunction((F(1),), (AffineForm(0, 1), AffineForm(1, 0)))
    assert env.witnesses == ((0, 1, 3), (0, 2, 3))


def test_envelope_dp_domain_restriction():
    env = envelope_dp(diamond(), domain=(F(2), F(5)))
    # on [2, 5] the constant route always wins: a single piece
    assert env.function == PwlFunction((), (AffineForm(1, 0),), (F(2), F(5)))
    assert env.witnesses == ((0, 2, 3),)


def test_envelope_dp_unreachable_sink():
    g = ParametricGraph(3, 0, 2, [Edge(0, 1, AffineForm(0, 0))])
    with pytest.raises(ValueError):
        envelope_dp(g)


def test_fixed_lambda_tie_break_smallest_vertex():
    g = ParametricGraph(
        4,
        0,
        3,
        [
            Edge(0, 2, AffineForm(1, 0)),
            Edge(2, 3, AffineForm(0, 0)),
            Edge(0, 1, AffineForm(1, 0)),
            Edge(1, 3, AffineForm(0, 0)),
        ],
    )
    path, cost = fixed_lambda_shortest(g, 0)
    assert path == (0, 1, 3)
    assert cost == 1


def test_path_cost_form_missing_edge():
    with pytest.raises(ValueError):
        path_cost_form(diamond(), (0, 3))


def test_dist_consistency_random():
    rng = random.Random(7)
    for _ in range(40):
        g = random_dag(rng)
        x = F(rng.randint(-50, 50), rng.randint(1, 9))
        path, cost = fixed_lambda_shortest(g, x)
        assert dist_from_at(g, x, g.source)[g.sink] == cost
        assert dist_to_at(g, x, g.sink)[g.source] == cost
        assert path[0] == g.source and path[-1] == g.sink
        assert path_cost_form(g, path, at=x)(x) == cost


def test_envelope_dp_equals_bruteforce_random():
    rng = random.Random(11)
    for _ in range(120):
        g = random_dag(rng, max_vertices=10)
        lhs = envelope_dp(g)
        rhs = envelope_bruteforce(g)
        assert lhs.function == rhs.function
        assert is_concave(lhs.function)
        for i, (wit, seg) in enumerate(zip(lhs.witnesses, lhs.function.segments)):
            lo, hi = lhs.function.segment_bounds(i)
            if lo is None and hi is None:
                x = F(0)
            elif lo is None:
                x = hi - 1
            elif hi is None:
                x = lo + 1
            else:
                x = (lo + hi) / 2
            # parallel-edge choice must be made inside the piece
            assert path_cost_form(g, wit, at=x) == seg


def test_second_best_matches_enumeration():
    rng = random.Random(23)
    with_alternatives = 0
    draws = 0
    while with_alternatives < 60 and draws < 300:
        draws += 1
        g = random_dag(rng, max_vertices=9)
        x = F(rng.randint(-20, 20), rng.randint(1, 5))
        best_path, best = fixed_lambda_shortest(g, x)
        second = second_best_at(g, x, best_path)
        others = [
            path_cost_form(g, p, at=x)(x)
            for p in enumerate_paths(g)
            if p != best_path
        ]
        if second is None:
            assert not others
        else:
            assert second == min(others)
            assert second >= best
            with_alternatives += 1
    assert with_alternatives >= 60


def test_enumerate_paths_lex_order_and_limit():
    g = diamond()
    paths = enumerate_paths(g)
    assert paths == [(0, 1, 3), (0, 2, 3)]
    with pytest.raises(ValueError):
        enumerate_paths(g, limit=1)


def test_alternation_frozen_positive():
    paths = [(0, 1, 3), (0, 2, 3), (0, 1, 3)]
    assert check_alternation_free_paths(paths) == (0, 1, 2, 0, 3)


def test_alternation_frozen_negative():
    paths = [(0, 1, 3), (0, 2, 3), (0, 4, 3)]
    assert check_alternation_free_paths(paths) is None
    assert check_alternation_free_paths(paths[:2]) is None


def test_alternation_unaligned_lengths():
    paths = [(0, 1, 2, 5), (0, 3, 5), (0, 1, 2, 5)]
    assert check_alternation_free_paths(paths) == (0, 1, 2, 0, 5)


def test_alternation_rejects_nonsimple():
    with pytest.raises(ValueError):
        check_alternation_free_paths([(0, 1, 0)])


def _witness_is_valid(paths, wit) -> bool:
    i, j, k, u, v = wit
    if not i < j < k:
        return False
    cuts = []
    for idx in (i, j, k):
        p = paths[idx]
        if u not in p or v not in p:
            return False
        pu, pv = p.index(u), p.index(v)
        if pu >= pv:
            return False
        cuts.append(p[pu : pv + 1])
    return cuts[0] == cuts[2] != cuts[1]


def test_alternation_aligned_vs_general_random():
    rng = random.Random(5)
    for _ in range(200):
        length = rng.randint(3, 7)
        count = rng.randint(3, 6)
        # per-position alphabets are disjoint, so positions are consistent
        paths = [
            tuple(10 * p + (0 if p in (0, length - 1) else rng.randint(0, 2)) for p in range(length))
            for _ in range(count)
        ]
        fast = check_alternation_free_paths(paths)
        slow = _alternation_general([tuple(p) for p in paths])
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert _witness_is_valid(paths, fast)
            assert _witness_is_valid(paths, slow)
            assert fast[:3] == slow[:3]  # both report the lex-first triple
