"""Crossing-free linking gadget between two vertex columns.

The abstract gadget joins a left column u_0..u_{B-1} to a right column
v_0..v_{B+n-1} with an edge (u_b, v_{b+r}) for every rise r in 0..n, weighted

    w(b, b+r) = J[b][r] + K*r*(r+1)/2 + L*r*lambda.

Admissibility requires K >= n^2 * (1 + 2*max|J|); the constructor refuses
anything weaker.  `planarize` draws every edge as the straight segment from
(0, b) to (1, b+r), splits all segments at their pairwise crossings, and
charges each fragment the parent weight times its x-extent.  Because a
fragment's parameter slope is proportional to its rise, every left-to-right
path with the same endpoints carries the same total slope, so cost gaps
between paths are constant in the parameter; `verify_faithful` checks that
slope decomposition edge by edge and then certifies, per endpoint pair, that
the straight chain is the unique shortest route with a gap of at least 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import AffineForm, RationalLike, _frac
from .graph import (
    Edge,
    ParametricGraph,
    dist_from_at,
    enumerate_paths,
    path_cost_form,
    second_best_at,
)

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class GadgetSpec:
    """Width B, rise range n, base charges J[b][r], gap constant K, slope rate L."""

    width: int
    n: int
    base: tuple[tuple[Fraction, ...], ...]
    gap: Fraction
    rate: Fraction

    def __post_init__(self) -> None:
        if self.width < 1 or self.n < 1:
            raise ValueError("need width >= 1 and n >= 1")
        base = tuple(tuple(_frac(x) for x in row) for row in self.base)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "gap", _frac(self.gap))
        object.__setattr__(self, "rate", _frac(self.rate))
        if len(base) != self.width or any(len(row) != self.n + 1 for row in base):
            raise ValueError("base charge table must be width x (n+1)")
        biggest = max((abs(x) for row in base for x in row), default=Fraction(0))
        needed = self.n * self.n * (1 + 2 * biggest)
        if self.gap < needed:
            raise ValueError(
                f"gap constant {self.gap} below admissible threshold {needed}"
            )


def zero_base(width: int, n: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple((Fraction(0),) * (n + 1) for _ in range(width))


def link_weights(spec: GadgetSpec) -> dict[tuple[int, int], AffineForm]:
    """Edge weights keyed by (left index b, right index b+r)."""
    out = {}
    for b in range(spec.width):
        for r in range(spec.n + 1):
            const = spec.base[b][r] + spec.gap * r * (r + 1) / 2
            out[(b, b + r)] = AffineForm(const, spec.rate * r)
    return out


def main_link_spec(n: int, width: int, drift: RationalLike) -> GadgetSpec:
    """The instantiation used inside the lower-bound construction.

    Base charge N*D*r*b, gap constant 20*N^3*B, slope rate -(gap)/N with
    N = n^2.  Admissibility holds for every |drift| <= 1.
    """
    drift = _frac(drift)
    if abs(drift) > 1:
        raise ValueError("|drift| must be at most 1")
    big_n = n * n
    gap = Fraction(20 * big_n**3 * width)
    base = tuple(
        tuple(big_n * drift * r * b for r in range(n + 1)) for b in range(width)
    )
    return GadgetSpec(width, n, base, gap, -gap / big_n)


@dataclass(frozen=True)
class GadgetGeometry:
    """The planar arrangement of the gadget's straight segments.

    Vertex ids are positions in `points`, which is sorted by (x, y).
    `chains[(b, j)]` walks segment (0,b)->(1,j) left to right; `fragments`
    lists (tail, head, (b, j), x_span) for every piece of every segment.
    """

    width: int
    n: int
    points: tuple[Point, ...]
    left_ids: tuple[int, ...]
    right_ids: tuple[int, ...]
    chains: dict[tuple[int, int], tuple[int, ...]]
    fragments: tuple[tuple[int, int, tuple[int, int], Fraction], ...]


def arrangement_geometry(width: int, n: int) -> GadgetGeometry:
    if width < 1 or n < 1:
        raise ValueError("need width >= 1 and n >= 1")
    zero, one = Fraction(0), Fraction(1)
    segments = [(b, b + r) for b in range(width) for r in range(n + 1)]
    cuts: dict[tuple[int, int], set[Point]] = {
        seg: {(zero, Fraction(seg[0])), (one, Fraction(seg[1]))} for seg in segments
    }
    for i, (b1, j1) in enumerate(segments):
        r1 = j1 - b1
        for b2, j2 in segments[i + 1 :]:
            r2 = j2 - b2
            if r1 == r2:
                continue  # distinct parallels never meet
            x = Fraction(b2 - b1, r1 - r2)
            if 0 <= x <= 1:
                point = (x, b1 + r1 * x)
                cuts[(b1, j1)].add(point)
                cuts[(b2, j2)].add(point)

    points = sorted({p for ps in cuts.values() for p in ps})
    index = {p: i for i, p in enumerate(points)}
    chains = {}
    fragments = []
    for seg in segments:
        walk = sorted(cuts[seg])
        chains[seg] = tuple(index[p] for p in walk)
        for p, q in zip(walk, walk[1:]):
            fragments.append((index[p], index[q], seg, q[0] - p[0]))
    left_ids = tuple(index[(zero, Fraction(b))] for b in range(width))
    right_ids = tuple(index[(one, Fraction(j))] for j in range(width + n))
    return GadgetGeometry(
        width, n, tuple(points), left_ids, right_ids, chains, tuple(fragments)
    )


@dataclass(frozen=True)
class Arrangement:
    spec: GadgetSpec
    geometry: GadgetGeometry
    graph: ParametricGraph
    spans: tuple[Fraction, ...]
    segment_of: tuple[tuple[int, int], ...]


def planarize(spec: GadgetSpec) -> Arrangement:
    """Planar drawing of the gadget; fragment weight = parent weight * span."""
    geo = arrangement_geometry(spec.width, spec.n)
    weights = link_weights(spec)
    edges = []
    spans = []
    segment_of = []
    for tail, head, seg, span in geo.fragments:
        edges.append(Edge(tail, head, weights[seg].scaled(span)))
        spans.append(span)
        segment_of.append(seg)
    graph = ParametricGraph(
        len(geo.points),
        geo.left_ids[0],
        geo.right_ids[-1],
        edges,
        embedding=list(geo.points),
    )
    return Arrangement(spec, geo, graph, tuple(spans), tuple(segment_of))


def check_planar_embedding(g: ParametricGraph) -> tuple[int, int] | None:
    """Exact pairwise test that embedded edges meet only at shared endpoints.

    Returns an offending edge index pair, or None when the drawing is clean.
    """
    if g.embedding is None:
        raise ValueError("graph has no embedding")
    segs = [(g.embedding[e.tail], g.embedding[e.head]) for e in g.edges]
    for i in range(len(segs)):
        for k in range(i + 1, len(segs)):
            if not _meet_only_at_shared_endpoints(segs[i], segs[k]):
                return (i, k)
    return None


def _meet_only_at_shared_endpoints(s1: tuple[Point, Point], s2: tuple[Point, Point]) -> bool:
    (p1, p2), (q1, q2) = s1, s2
    shared = {p1, p2} & {q1, q2}
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if denom == 0:
        cross = d1[0] * (q1[1] - p1[1]) - d1[1] * (q1[0] - p1[0])
        if cross != 0:
            return True  # parallel, different lines
        # same supporting line: 1-d overlap must be at most a shared endpoint
        axis = 0 if d1[0] != 0 else 1
        lo1, hi1 = sorted((p1[axis], p2[axis]))
        lo2, hi2 = sorted((q1[axis], q2[axis]))
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            return True
        if lo < hi:
            return False
        meet = p1 if p1[axis] == lo else p2
        return meet in shared
    t = ((q1[0] - p1[0]) * d2[1] - (q1[1] - p1[1]) * d2[0]) / denom
    u = ((q1[0] - p1[0]) * d1[1] - (q1[1] - p1[1]) * d1[0]) / denom
    if not (0 <= t <= 1 and 0 <= u <= 1):
        return True
    meet = (p1[0] + t * d1[0], p1[1] + t * d1[1])
    return meet in shared


@dataclass(frozen=True)
class FaithfulReport:
    ok: bool
    pair_count: int
    slope_decomposition_ok: bool
    max_span_denominator: int
    lambdas: tuple[Fraction, ...]
    failures: tuple[str, ...]


def verify_faithful(
    arr: Arrangement,
    lambdas: tuple[RationalLike, ...] = (0,),
    exhaustive: bool = False,
) -> FaithfulReport:
    """Certify that the planar drawing behaves exactly like the gadget.

    Per left/right pair: the straight chain's cost telescopes to the gadget
    weight, it is the unique shortest route with every alternative at least
    1 dearer, and pairs outside the rise range are unreachable.  Slope
    uniformity (fragment slope == rate * rise of the fragment) is checked
    edge by edge first; it makes the gap independent of the parameter, so
    the sampled lambdas are a re-confirmation rather than the argument.
    """
    lambdas = tuple(_frac(x) for x in lambdas)
    spec, geo, g = arr.spec, arr.geometry, arr.graph
    failures: list[str] = []

    slope_ok = True
    emb = g.embedding
    assert emb is not None
    for e in g.edges:
        rise = emb[e.head][1] - emb[e.tail][1]
        if e.weight.b != spec.rate * rise:
            slope_ok = False
            failures.append(f"fragment ({e.tail},{e.head}) breaks slope uniformity")

    weights = link_weights(spec)
    pair_count = 0
    for b in range(spec.width):
        reach_cache = {x: dist_from_at(g, x, geo.left_ids[b]) for x in lambdas}
        for j in range(spec.width + spec.n):
            pair_count += 1
            target = geo.right_ids[j]
            if not b <= j <= b + spec.n:
                if any(reach_cache[x][target] is not None for x in lambdas):
                    failures.append(f"pair ({b},{j}) outside rise range is reachable")
                continue
            chain = geo.chains[(b, j)]
            straight = path_cost_form(g, chain)
            if straight != weights[(b, j)]:
                failures.append(f"chain ({b},{j}) cost {straight} != gadget weight")
                continue
            for x in lambdas:
                best = reach_cache[x][target]
                if best != straight(x):
                    failures.append(f"chain ({b},{j}) not optimal at {x}")
                    continue
                second = second_best_at(g, x, chain)
                if second is not None and second - best < 1:
                    failures.append(f"pair ({b},{j}) gap below 1 at {x}")
            if exhaustive:
                sub = ParametricGraph(
                    g.vertex_count, geo.left_ids[b], target, g.edges
                )
                for p in enumerate_paths(sub, limit=200_000):
                    cost = path_cost_form(g, p)
                    if p == chain:
                        continue
                    if cost(lambdas[0]) - straight(lambdas[0]) < 1:
                        failures.append(f"path {p} undercuts the gap for ({b},{j})")
    max_den = max((s.denominator for s in arr.spans), default=1)
    return FaithfulReport(
        ok=not failures,
        pair_count=pair_count,
        slope_decomposition_ok=slope_ok,
        max_span_denominator=max_den,
        lambdas=lambdas,
        failures=tuple(failures),
    )
