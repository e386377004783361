"""Directed acyclic graphs with one-parameter affine edge weights.

The cost of the cheapest source-to-sink path, as a function of the parameter,
is the concave piecewise-linear envelope computed by `envelope_dp`.  A slow
reference (`envelope_bruteforce`) enumerates paths and takes the envelope of
their cost forms; the two must agree exactly and tests hold them to that.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import (
    AffineForm,
    Domain,
    PwlFunction,
    RationalLike,
    _frac,
    affine_pwl,
    constant_pwl,
    lower_envelope_lines,
    pwl_add,
    pwl_min,
)


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    weight: AffineForm


@dataclass
class ParametricGraph:
    vertex_count: int
    source: int
    sink: int
    edges: list[Edge] = field(default_factory=list)
    layers: list[int] | None = None
    embedding: list[tuple[Fraction, Fraction]] | None = None

    def validate(self) -> list[str]:
        """Raise on malformed structure; return soft warnings."""
        if self.vertex_count <= 0:
            raise ValueError("vertex_count must be positive")
        for name, v in (("source", self.source), ("sink", self.sink)):
            if not 0 <= v < self.vertex_count:
                raise ValueError(f"{name} {v} out of range")
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        for e in self.edges:
            if not (0 <= e.tail < self.vertex_count and 0 <= e.head < self.vertex_count):
                raise ValueError(f"edge ({e.tail}, {e.head}) out of range")
        if self.layers is not None and len(self.layers) != self.vertex_count:
            raise ValueError("layers length mismatch")
        if self.embedding is not None and len(self.embedding) != self.vertex_count:
            raise ValueError("embedding length mismatch")
        warnings = []
        if any(e.head == self.source for e in self.edges):
            warnings.append("source has incoming edges")
        try:
            dist = dist_to_at(self, Fraction(0), self.sink)
        except ValueError:
            warnings.append("graph contains a cycle")
        else:
            if dist[self.source] is None:
                warnings.append("sink not reachable from source")
        return warnings


def out_adjacency(g: ParametricGraph) -> list[list[Edge]]:
    adj: list[list[Edge]] = [[] for _ in range(g.vertex_count)]
    for e in g.edges:
        adj[e.tail].append(e)
    return adj


def topo_order(g: ParametricGraph) -> list[int]:
    """Kahn's algorithm; raises on cycles."""
    indeg = [0] * g.vertex_count
    adj = out_adjacency(g)
    for e in g.edges:
        indeg[e.head] += 1
    queue = deque(v for v in range(g.vertex_count) if indeg[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for e in adj[v]:
            indeg[e.head] -= 1
            if indeg[e.head] == 0:
                queue.append(e.head)
    if len(order) != g.vertex_count:
        raise ValueError("graph contains a cycle")
    return order


@dataclass(frozen=True)
class Envelope:
    """Shortest-path cost function plus one witness path per piece."""

    function: PwlFunction
    witnesses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.witnesses) != len(self.function.segments):
            raise ValueError("one witness per segment required")


def dist_from_at(g: ParametricGraph, x: RationalLike, start: int) -> list[Fraction | None]:
    """Exact distances from `start` to every vertex at parameter x."""
    x = _frac(x)
    dist: list[Fraction | None] = [None] * g.vertex_count
    dist[start] = Fraction(0)
    adj = out_adjacency(g)
    for v in topo_order(g):
        dv = dist[v]
        if dv is None:
            continue
        for e in adj[v]:
            cand = dv + e.weight(x)
            if dist[e.head] is None or cand < dist[e.head]:
                dist[e.head] = cand
    return dist


def dist_to_at(g: ParametricGraph, x: RationalLike, target: int) -> list[Fraction | None]:
    """Exact distances from every vertex to `target` at parameter x."""
    x = _frac(x)
    dist: list[Fraction | None] = [None] * g.vertex_count
    dist[target] = Fraction(0)
    adj = out_adjacency(g)
    for v in reversed(topo_order(g)):
        if v == target:
            continue
        best = None
        for e in adj[v]:
            dh = dist[e.head]
            if dh is None:
                continue
            cand = e.weight(x) + dh
            if best is None or cand < best:
                best = cand
        dist[v] = best
    return dist


def fixed_lambda_shortest(g: ParametricGraph, x: RationalLike) -> tuple[tuple[int, ...], Fraction]:
    """Shortest source-to-sink path at a fixed parameter value.

    Ties are broken toward the smallest next vertex id, so the returned
    path is deterministic.
    """
    x = _frac(x)
    dist = dist_to_at(g, x, g.sink)
    if dist[g.source] is None:
        raise ValueError("no path from source to sink")
    adj = out_adjacency(g)
    path = [g.source]
    v = g.source
    while v != g.sink:
        best: tuple[Fraction, int] | None = None
        for e in adj[v]:
            dh = dist[e.head]
            if dh is None:
                continue
            key = (e.weight(x) + dh, e.head)
            if best is None or key < best:
                best = key
        assert best is not None and best[0] == dist[v]
        v = best[1]
        path.append(v)
    return tuple(path), dist[g.source]


def path_cost_form(g: ParametricGraph, path, at: RationalLike = 0) -> AffineForm:
    """Total weight of a vertex path as an affine form.

    Between parallel edges the one cheapest at `at` is charged (ties toward
    the lexicographically smallest coefficient pair).  Missing hops raise.
    """
    at = _frac(at)
    by_pair: dict[tuple[int, int], list[AffineForm]] = {}
    for e in g.edges:
        by_pair.setdefault((e.tail, e.head), []).append(e.weight)
    total = AffineForm(0, 0)
    for u, v in zip(path, path[1:]):
        weights = by_pair.get((u, v))
        if not weights:
            raise ValueError(f"no edge ({u}, {v}) on the claimed path")
        total = total + min(weights, key=lambda w: (w(at), w.a, w.b))
    return total


def consecutive_pairs(path) -> set[tuple[int, int]]:
    return set(zip(path, path[1:]))


def second_best_at(g: ParametricGraph, x: RationalLike, path) -> Fraction | None:
    """Cheapest cost at x over paths other than `path` (same endpoints).

    Every differing path must use some vertex pair off the given one, and in
    a DAG every such detour combination is realized, so scanning edges whose
    endpoint pair is off the path gives the exact runner-up value.  Returns
    None when no alternative path exists.
    """
    x = _frac(x)
    path = tuple(path)
    on_path = consecutive_pairs(path)
    for u, v in on_path:
        path_cost_form(g, (u, v), at=x)  # raises if the hop is missing
    ds = dist_from_at(g, x, path[0])
    dt = dist_to_at(g, x, path[-1])
    best: Fraction | None = None
    for e in g.edges:
        if (e.tail, e.head) in on_path:
            continue
        if ds[e.tail] is None or dt[e.head] is None:
            continue
        cand = ds[e.tail] + e.weight(x) + dt[e.head]
        if best is None or cand < best:
            best = cand
    return best


def envelope_dp(g: ParametricGraph, domain: Domain = None) -> Envelope:
    """Exact shortest-path envelope by PWL dynamic programming in topo order.

    Witness paths are recovered by re-solving at one interior point of each
    piece; any minimizer at an interior point must carry exactly the piece's
    affine form, which is asserted.
    """
    dist: list[PwlFunction | None] = [None] * g.vertex_count
    dist[g.source] = constant_pwl(0, domain)
    adj = out_adjacency(g)
    for v in topo_order(g):
        dv = dist[v]
        if dv is None:
            continue
        for e in adj[v]:
            cand = pwl_add(dv, affine_pwl(e.weight, domain))
            old = dist[e.head]
            dist[e.head] = cand if old is None else pwl_min(old, cand)
    cost = dist[g.sink]
    if cost is None:
        raise ValueError("no path from source to sink")

    witnesses = []
    for i, seg in enumerate(cost.segments):
        lo, hi = cost.segment_bounds(i)
        x = _piece_interior_point(lo, hi)
        path, value = fixed_lambda_shortest(g, x)
        if path_cost_form(g, path, at=x) != seg:
            raise RuntimeError(f"witness form mismatch on piece {i}")
        assert value == seg(x)
        witnesses.append(path)
    return Envelope(cost, tuple(witnesses))


def _piece_interior_point(lo: Fraction | None, hi: Fraction | None) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def enumerate_paths(g: ParametricGraph, limit: int = 1_000_000) -> list[tuple[int, ...]]:
    """All source-to-sink vertex paths in lexicographic order."""
    heads: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for e in g.edges:
        heads[e.tail].append(e.head)
    heads = [sorted(set(hs)) for hs in heads]
    topo_order(g)  # reject cyclic inputs before walking
    out: list[tuple[int, ...]] = []
    stack: list[int] = [g.source]

    def walk(v: int) -> None:
        if v == g.sink:
            if len(out) >= limit:
                raise ValueError(f"more than {limit} paths")
            out.append(tuple(stack))
            return
        for h in heads[v]:
            stack.append(h)
            walk(h)
            stack.pop()

    walk(g.source)
    return out


def envelope_bruteforce(
    g: ParametricGraph, domain: Domain = None, limit: int = 1_000_000
) -> Envelope:
    """Reference envelope: enumerate edge paths, take the envelope of forms."""
    adj = out_adjacency(g)
    topo_order(g)
    forms: list[AffineForm] = []
    paths: list[tuple[int, ...]] = []
    stack = [g.source]

    def walk(v: int, acc: AffineForm) -> None:
        if v == g.sink:
            if len(forms) >= limit:
                raise ValueError(f"more than {limit} paths")
            forms.append(acc)
            paths.append(tuple(stack))
            return
        for e in sorted(adj[v], key=lambda e: (e.head, e.weight.a, e.weight.b)):
            stack.append(e.head)
            walk(e.head, acc + e.weight)
            stack.pop()

    walk(g.source, AffineForm(0, 0))
    if not forms:
        raise ValueError("no path from source to sink")
    env, tags = lower_envelope_lines(forms, domain)
    return Envelope(env, tuple(paths[t] for t in tags))


def check_alternation_free_paths(paths) -> tuple[int, int, int, int, int] | None:
    """Scan an ordered path family for an alternation.

    An alternation is a triple of indices i < j < k and vertices u, v lying
    on all three paths with u strictly before v on each, where the u..v
    stretch of path i equals that of path k but differs from path j.
    Returns (i, j, k, u, v) for the lexicographically first such triple
    (the window within that triple is strategy-dependent but deterministic),
    or None when the family is alternation-free.

    When every shared vertex sits at one consistent position across all
    paths (true for layered graphs and grids), a bitmask scan over aligned
    positions is used; otherwise a general triple scan runs.
    """
    paths = [tuple(p) for p in paths]
    for p in paths:
        if len(set(p)) != len(p):
            raise ValueError("paths must be simple")
    if len(paths) < 3:
        return None
    aligned = len({len(p) for p in paths}) == 1
    if aligned:
        position: dict[int, int] = {}
        for p in paths:
            for idx, v in enumerate(p):
                if position.setdefault(v, idx) != idx:
                    aligned = False
                    break
            if not aligned:
                break
    if aligned:
        return _alternation_aligned(paths)
    return _alternation_general(paths)


def _maximal_runs(mask: int) -> list[tuple[int, int, int]]:
    """Maximal runs of set bits as (low, high, run_mask)."""
    runs = []
    while mask:
        low = (mask & -mask).bit_length() - 1
        shifted = mask >> low
        length = ((shifted + 1) & -(shifted + 1)).bit_length() - 1
        run_mask = ((1 << length) - 1) << low
        runs.append((low, low + length - 1, run_mask))
        mask &= ~run_mask
    return runs


def _alternation_aligned(paths) -> tuple[int, int, int, int, int] | None:
    count = len(paths)
    length = len(paths[0])
    eq: list[list[int]] = [[0] * count for _ in range(count)]
    runs: list[list[list[tuple[int, int, int]]]] = [[[] for _ in range(count)] for _ in range(count)]
    for i in range(count):
        for k in range(i + 1, count):
            m = 0
            pi, pk = paths[i], paths[k]
            for p in range(length):
                if pi[p] == pk[p]:
                    m |= 1 << p
            eq[i][k] = m
            runs[i][k] = _maximal_runs(m)
    full = (1 << length) - 1
    for i in range(count):
        for j in range(i + 1, count):
            eq_ij = eq[i][j]
            diff_ij = full ^ eq_ij
            if not diff_ij:
                continue
            for k in range(j + 1, count):
                common3 = eq_ij & eq[i][k] & eq[j][k]
                if common3 & (common3 - 1) == 0:
                    continue  # fewer than two three-way shared positions
                for _, _, run_mask in runs[i][k]:
                    shared = common3 & run_mask
                    if shared & (shared - 1) == 0:
                        continue
                    c_lo = (shared & -shared).bit_length() - 1
                    c_hi = shared.bit_length() - 1
                    between = (1 << c_hi) - (1 << (c_lo + 1))
                    hits = diff_ij & between
                    if not hits:
                        continue
                    d = (hits & -hits).bit_length() - 1
                    below = shared & ((1 << d) - 1)
                    above = shared & ~((1 << (d + 1)) - 1)
                    u = below.bit_length() - 1
                    v = (above & -above).bit_length() - 1
                    return (i, j, k, paths[i][u], paths[i][v])
    return None


def _alternation_general(paths) -> tuple[int, int, int, int, int] | None:
    count = len(paths)
    positions = [{v: idx for idx, v in enumerate(p)} for p in paths]
    for i in range(count):
        pos_i = positions[i]
        for j in range(i + 1, count):
            pos_j = positions[j]
            for k in range(j + 1, count):
                pos_k = positions[k]
                common = [v for v in paths[i] if v in pos_j and v in pos_k]
                for a in range(len(common)):
                    u = common[a]
                    for b in range(a + 1, len(common)):
                        v = common[b]
                        if pos_j[u] >= pos_j[v] or pos_k[u] >= pos_k[v]:
                            continue
                        cut_i = paths[i][pos_i[u] : pos_i[v] + 1]
                        cut_k = paths[k][pos_k[u] : pos_k[v] + 1]
                        if cut_i != cut_k:
                            continue
                        cut_j = paths[j][pos_j[u] : pos_j[v] + 1]
                        if cut_i != cut_j:
                            return (i, j, k, u, v)
    return None
