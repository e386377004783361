"""Tests for grid generation and piece-count experiments."""

from fractions import Fraction as F

import pytest

from paramenv.exact import AffineForm, piece_count
from paramenv.graph import enumerate_paths, envelope_dp
from paramenv.grids import (
    GridSpec,
    assign_random_weights,
    gen_grid,
    grid_piece_experiment,
    middle_row_changes,
)


def test_shape_frozen():
    g = gen_grid(3, 4)
    assert g.vertex_count == 12
    assert len(g.edges) == 17
    assert g.source == 0 and g.sink == 11
    assert g.validate() == []
    spec = GridSpec(3, 4)
    assert spec.vertex_id(2, 1) == 4
    assert spec.vertex_id(3, 4) == 11
    with pytest.raises(ValueError):
        spec.vertex_id(4, 1)
    with pytest.raises(ValueError):
        GridSpec(0, 3)


def test_tiny_grids():
    assert len(enumerate_paths(gen_grid(1, 5))) == 1
    assert len(enumerate_paths(gen_grid(2, 2))) == 2
    # a single-row grid has exactly one path, hence one piece, any weights
    g = assign_random_weights(gen_grid(1, 6), seed=5, bit_length=8)
    assert piece_count(envelope_dp(g, None).function) == 1


def test_weight_assignment_deterministic():
    g = gen_grid(3, 4)
    a = assign_random_weights(g, seed=11, bit_length=8)
    b = assign_random_weights(g, seed=11, bit_length=8)
    c = assign_random_weights(g, seed=12, bit_length=8)
    assert [e.weight for e in a.edges] == [e.weight for e in b.edges]
    assert [e.weight for e in a.edges] != [e.weight for e in c.edges]
    tiny = assign_random_weights(g, seed=3, bit_length=0)
    assert all(
        e.weight.a in (-1, 0, 1) and e.weight.b in (-1, 0, 1) for e in tiny.edges
    )


def test_two_row_piece_bound():
    # any weights: a 2 x q grid never exceeds q pieces
    for seed in range(30):
        g = assign_random_weights(gen_grid(2, 6), seed=seed, bit_length=10)
        assert piece_count(envelope_dp(g, None).function) <= 6


def test_middle_row_change_counting():
    # hand case: two witnesses entering vertex 5 from different sides
    witnesses = (
        (0, 1, 5, 6, 10, 11),
        (0, 4, 5, 6, 10, 11),
        (0, 4, 5, 9, 10, 11),
    )
    counts = middle_row_changes(witnesses, 4)
    assert counts[5] == (1, 1)
    # vertex 6 is entered from 5 and left to 10 in both visits
    assert counts[6] == (0, 0)
    assert counts[7] == (0, 0)
    assert counts[4] == (0, 0)


def test_experiment_report():
    report = grid_piece_experiment(3, 5, trials=40, bit_length=8, seed=99)
    assert report.ok
    assert report.piece_bound == 25
    assert report.max_pieces <= 25
    assert sum(report.histogram.values()) == 40
    assert len(report.trial_results) == 40
    # histogram aggregates the per-trial counts
    assert report.histogram[report.max_pieces] >= 1


def test_experiment_parallel_matches_serial():
    serial = grid_piece_experiment(3, 4, trials=12, bit_length=6, seed=7)
    parallel = grid_piece_experiment(3, 4, trials=12, bit_length=6, seed=7, jobs=2)
    assert serial == parallel


def test_experiment_rejects_empty():
    with pytest.raises(ValueError):
        grid_piece_experiment(3, 4, trials=0, bit_length=4, seed=1)
