"""Shared generators for randomized graph tests (seeded, reproducible)."""

from __future__ import annotations

import random
from fractions import Fraction

from paramenv.exact import AffineForm
from paramenv.graph import Edge, ParametricGraph, dist_to_at


def random_trigraph(rng, *, max_vertices=9, bits=5):
    """Random DAG with integer coefficient triples; no parallel edges."""
    from paramenv.polytope import TriEdge, TriGraph

    g = random_dag(rng, max_vertices=max_vertices, bits=bits)
    top = 2**bits
    seen = set()
    edges = []
    for e in g.edges:
        if (e.tail, e.head) in seen:
            continue
        seen.add((e.tail, e.head))
        edges.append(
            TriEdge(
                e.tail,
                e.head,
                tuple(Fraction(rng.randint(-top, top)) for _ in range(3)),
            )
        )
    return TriGraph(g.vertex_count, g.source, g.sink, tuple(edges))


def random_dag(
    rng: random.Random,
    *,
    max_vertices: int = 12,
    bits: int = 8,
    edge_prob: float = 0.45,
    parallel_prob: float = 0.08,
    nonnegative: bool = False,
) -> ParametricGraph:
    """Random DAG on vertices 0..n-1 (edges go up) with an s-t path."""
    n = rng.randint(4, max_vertices)
    low = 0 if nonnegative else -(2**bits)
    high = 2**bits

    def coeff() -> Fraction:
        return Fraction(rng.randint(low, high))

    edges = []
    for u in range(n - 1):
        for v in range(u + 1, n):
            if rng.random() < edge_prob:
                edges.append(Edge(u, v, AffineForm(coeff(), coeff())))
                if rng.random() < parallel_prob:
                    edges.append(Edge(u, v, AffineForm(coeff(), coeff())))
    g = ParametricGraph(n, 0, n - 1, edges)
    if dist_to_at(g, 0, g.sink)[g.source] is None:
        # repair with a random increasing spine so the fallback is multi-hop
        mids = sorted(rng.sample(range(1, n - 1), k=min(n - 2, rng.randint(1, 3))))
        chain = [0, *mids, n - 1]
        have = {(e.tail, e.head) for e in edges}
        for u, v in zip(chain, chain[1:]):
            if (u, v) not in have:
                g.edges.append(Edge(u, v, AffineForm(coeff(), coeff())))
    return g
