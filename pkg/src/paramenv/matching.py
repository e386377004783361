"""Reduction from fixed-parameter shortest path to bipartite matching.

Each internal vertex v (on some source-to-sink path) is split into v_in and
v_out joined by a zero-weight edge; a graph edge (u, v) becomes a bipartite
edge from u_out (or the source) to v_in (or the sink).  A minimum-weight
perfect matching then picks a set of graph edges forming one source-to-sink
path, and matches every unused vertex to itself through its split edge, so
the matching weight equals the shortest-path cost.

Weights must be non-negative at the chosen parameter value; vertices on no
source-to-sink path are pruned first, since they would have no partner.
The assignment solver is exact over rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import RationalLike, _frac
from .graph import ParametricGraph, out_adjacency, topo_order


@dataclass(frozen=True)
class SplitEdge:
    left: int
    right: int
    weight: Fraction
    origin: tuple[int, int] | None  # graph edge (tail, head); None for split edges


@dataclass(frozen=True)
class SplitGraph:
    """Bipartite instance: left side is source + v_out, right side t + v_in."""

    internal: tuple[int, ...]
    edges: tuple[SplitEdge, ...]

    @property
    def size(self) -> int:
        return len(self.internal) + 1


def _path_vertices(g: ParametricGraph) -> set[int]:
    """Vertices lying on at least one source-to-sink path."""
    adj = out_adjacency(g)
    order = topo_order(g)
    forward = {g.source}
    for v in order:
        if v in forward:
            forward.update(e.head for e in adj[v])
    backward = {g.sink}
    for v in reversed(order):
        if any(e.head in backward for e in adj[v]):
            backward.add(v)
    return forward & backward


def split_transform(g: ParametricGraph, x: RationalLike) -> SplitGraph:
    x = _frac(x)
    keep = _path_vertices(g)
    internal = tuple(sorted(keep - {g.source, g.sink}))
    index = {v: i + 1 for i, v in enumerate(internal)}

    best: dict[tuple[int, int], SplitEdge] = {}
    for e in g.edges:
        w = e.weight(x)
        if w < 0:
            raise ValueError(f"edge ({e.tail}, {e.head}) has weight {w} < 0 at {x}")
        if e.tail not in keep or e.head not in keep:
            continue
        if e.head == g.source or e.tail == g.sink:
            continue  # never on a source-to-sink path
        left = 0 if e.tail == g.source else index[e.tail]
        right = 0 if e.head == g.sink else index[e.head]
        key = (left, right)
        if key not in best or w < best[key].weight:
            best[key] = SplitEdge(left, right, w, (e.tail, e.head))

    edges = [best[k] for k in sorted(best)]
    edges.extend(
        SplitEdge(i + 1, i + 1, Fraction(0), None) for i in range(len(internal))
    )
    return SplitGraph(internal, tuple(edges))


def _assignment(cost: list[list[Fraction]]) -> tuple[list[int], Fraction]:
    """Exact minimum-cost assignment; returns (column matched to each row, total)."""
    n = len(cost)
    inf = (sum(sum(abs(c) for c in row) for row in cost) + 1) * (n + 2)
    u = [Fraction(0)] * (n + 1)
    v = [Fraction(0)] * (n + 1)
    p = [0] * (n + 1)  # p[j]: row matched to column j (1-based, 0 = none)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = inf
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    row_to_col = [0] * n
    for j in range(1, n + 1):
        if p[j]:
            row_to_col[p[j] - 1] = j - 1
    total = sum(cost[i][row_to_col[i]] for i in range(n))
    return row_to_col, total


@dataclass(frozen=True)
class MatchingResult:
    pairs: tuple[SplitEdge, ...]
    weight: Fraction


def min_weight_perfect_matching(sg: SplitGraph) -> MatchingResult:
    n = sg.size
    lookup = {(e.left, e.right): e for e in sg.edges}
    # strictly dominated even with negative weights: cells shared by two
    # assignments cancel in any cost comparison, so one forbidden cell
    # outweighs every real cell combined
    forbidden = sum(abs(e.weight) for e in sg.edges) + 1
    cost = [
        [
            lookup[(i, j)].weight if (i, j) in lookup else forbidden
            for j in range(n)
        ]
        for i in range(n)
    ]
    row_to_col, total = _assignment(cost)
    pairs = []
    for i, j in enumerate(row_to_col):
        if (i, j) not in lookup:
            raise ValueError("no perfect matching")
        pairs.append(lookup[(i, j)])
    return MatchingResult(tuple(pairs), total)


def recover_path(result: MatchingResult, sg: SplitGraph) -> tuple[int, ...]:
    """Follow the partner chain from the source until the sink."""
    partner = {e.left: e for e in result.pairs}
    path = []
    left = 0
    for _ in range(sg.size + 1):
        e = partner[left]
        if e.origin is None:
            raise RuntimeError(f"chain stalled on split edge of {sg.internal[e.left - 1]}")
        path.append(e.origin[0])
        if e.right == 0:
            path.append(e.origin[1])
            return tuple(path)
        left = e.right
    raise RuntimeError("chain does not reach the sink")
