"""Directed grid graphs and envelope piece-count experiments.

A rows x cols grid has vertex (i, j) at id (i-1)*cols + (j-1) for 1-based
row i and column j, with edges rightward (i, j) -> (i, j+1) and upward
(i, j) -> (i+1, j).  The source is the bottom-left corner (1, 1) and the
sink the top-right corner (rows, cols), so every path in a 3-row grid
crosses the middle row.

Experiments draw integer edge coefficients uniformly from [-2^beta, 2^beta]
and count envelope pieces.  For 3-row grids the piece count never exceeds
5*cols, every witness sequence is alternation-free, and for each middle-row
vertex the incoming and the outgoing edge along the ordered witnesses each
change at most twice.
"""

from __future__ import annotations

import multiprocessing
import random
from dataclasses import dataclass

from .exact import AffineForm, piece_count
from .graph import (
    Edge,
    ParametricGraph,
    check_alternation_free_paths,
    envelope_dp,
)


@dataclass(frozen=True)
class GridSpec:
    """Shape of a grid instance; source and sink sit at opposite corners."""

    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid needs at least one row and one column")

    def vertex_id(self, row: int, col: int) -> int:
        if not (1 <= row <= self.rows and 1 <= col <= self.cols):
            raise ValueError(f"({row}, {col}) outside {self.rows} x {self.cols}")
        return (row - 1) * self.cols + (col - 1)

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return self.rows * self.cols - 1


def gen_grid(rows: int, cols: int) -> ParametricGraph:
    """The grid with zero weights; edges rightward first, then upward,
    per vertex in id order."""
    spec = GridSpec(rows, cols)
    edges = []
    for row in range(1, rows + 1):
        for col in range(1, cols + 1):
            v = spec.vertex_id(row, col)
            if col < cols:
                edges.append(Edge(v, v + 1, AffineForm(0, 0)))
            if row < rows:
                edges.append(Edge(v, v + cols, AffineForm(0, 0)))
    return ParametricGraph(rows * cols, spec.source, spec.sink, edges)


def assign_random_weights(
    g: ParametricGraph, seed: int, bit_length: int
) -> ParametricGraph:
    """Draw a then b per edge, in edge order, from [-2^beta, 2^beta]."""
    rng = random.Random(seed)
    top = 2**bit_length
    edges = [
        Edge(e.tail, e.head, AffineForm(rng.randint(-top, top), rng.randint(-top, top)))
        for e in g.edges
    ]
    return ParametricGraph(g.vertex_count, g.source, g.sink, edges)


def middle_row_changes(
    witnesses: tuple[tuple[int, ...], ...], cols: int
) -> dict[int, tuple[int, int]]:
    """Per middle-row vertex of a 3-row grid: how often the incoming and
    outgoing edge change along the ordered witness sequence (skipping
    witnesses that avoid the vertex)."""
    counts = {}
    for v in range(cols, 2 * cols):
        ins = []
        outs = []
        for path in witnesses:
            if v in path:
                k = path.index(v)
                ins.append(path[k - 1])
                outs.append(path[k + 1])
        counts[v] = (_changes(ins), _changes(outs))
    return counts


def _changes(seq: list[int]) -> int:
    return sum(1 for a, b in zip(seq, seq[1:]) if a != b)


def _trial(args: tuple[int, int, int, int]) -> tuple[int, int, bool, int]:
    rows, cols, bit_length, seed = args
    g = assign_random_weights(gen_grid(rows, cols), seed, bit_length)
    env = envelope_dp(g, None)
    pieces = piece_count(env.function)
    alternation = check_alternation_free_paths(list(env.witnesses))
    mid_max = 0
    if rows == 3:
        per_vertex = middle_row_changes(env.witnesses, cols)
        mid_max = max(max(pair) for pair in per_vertex.values())
    return (seed, pieces, alternation is not None, mid_max)


@dataclass(frozen=True)
class GridExperimentReport:
    rows: int
    cols: int
    trials: int
    bit_length: int
    seed: int
    max_pieces: int
    histogram: dict[int, int]
    piece_bound: int | None
    bound_violations: int
    alternation_violations: int
    middle_row_violations: int
    trial_results: tuple[tuple[int, int, bool, int], ...]

    @property
    def ok(self) -> bool:
        return (
            self.bound_violations == 0
            and self.alternation_violations == 0
            and self.middle_row_violations == 0
        )


def grid_piece_experiment(
    rows: int,
    cols: int,
    trials: int,
    bit_length: int,
    seed: int,
    jobs: int | None = None,
) -> GridExperimentReport:
    """Run independent weight draws and aggregate piece counts.

    Trial seeds come from one master generator, so the report is the same
    for any job count; workers only reorder the computation.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    master = random.Random(seed)
    args = [(rows, cols, bit_length, master.randrange(2**63)) for _ in range(trials)]
    if jobs is not None and jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(_trial, args)
    else:
        results = [_trial(a) for a in args]

    histogram: dict[int, int] = {}
    for _, pieces, _, _ in results:
        histogram[pieces] = histogram.get(pieces, 0) + 1
    bound = 5 * cols if rows == 3 else None
    return GridExperimentReport(
        rows=rows,
        cols=cols,
        trials=trials,
        bit_length=bit_length,
        seed=seed,
        max_pieces=max(p for _, p, _, _ in results),
        histogram=histogram,
        piece_bound=bound,
        bound_violations=(
            0 if bound is None else sum(1 for _, p, _, _ in results if p > bound)
        ),
        alternation_violations=sum(1 for _, _, alt, _ in results if alt),
        middle_row_violations=sum(1 for _, _, _, mid in results if mid > 2),
        trial_results=tuple(results),
    )
