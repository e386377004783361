"""Three-parameter path analysis: hulls, covers, Minkowski decomposition.

With weights w_e(lam) = a_e*lam1 + b_e*lam2 + c_e*lam3 a path is just its
coefficient vector (a_P, b_P, c_P), and for every parameter choice some
vertex of the convex hull of these vectors is a minimizer.  Everything here
is exact: a point is reported as a hull vertex iff it is not a convex
combination of the remaining points, decided by a phase-one simplex over
rationals (Bland's rule, so it terminates).  Degenerate point sets (all
points coincident, collinear or coplanar) need no special casing under
this definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .exact import AffineForm, RationalLike, _frac, piece_count
from .graph import Edge, Envelope, ParametricGraph, envelope_dp, enumerate_paths, topo_order

Point3 = tuple[Fraction, Fraction, Fraction]


def _point(p) -> Point3:
    if len(p) != 3:
        raise ValueError(f"expected a coefficient triple, got {p!r}")
    return (_frac(p[0]), _frac(p[1]), _frac(p[2]))


@dataclass(frozen=True)
class TriEdge:
    tail: int
    head: int
    coeffs: Point3

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _point(self.coeffs))

    def cost(self, lam: Point3) -> Fraction:
        return sum(c * l for c, l in zip(self.coeffs, lam))


@dataclass(frozen=True)
class TriGraph:
    """DAG whose edge weights are linear in three parameters."""

    vertex_count: int
    source: int
    sink: int
    edges: tuple[TriEdge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(self.edges))
        seen = set()
        for e in self.edges:
            if (e.tail, e.head) in seen:
                raise ValueError(
                    f"parallel edge ({e.tail}, {e.head}) makes path vectors ambiguous"
                )
            seen.add((e.tail, e.head))
        topo_order(self.skeleton())  # validates ranges and acyclicity

    def skeleton(self) -> ParametricGraph:
        return ParametricGraph(
            self.vertex_count,
            self.source,
            self.sink,
            [Edge(e.tail, e.head, AffineForm(0, 0)) for e in self.edges],
        )


@dataclass(frozen=True)
class PathVector3:
    vector: Point3
    witness: tuple[int, ...]


def path_vectors(g: TriGraph, limit: int = 100_000) -> list[PathVector3]:
    """Coefficient vectors of all source-to-sink paths."""
    lookup = {(e.tail, e.head): e.coeffs for e in g.edges}
    out = []
    for path in enumerate_paths(g.skeleton(), limit=limit):
        total = (Fraction(0), Fraction(0), Fraction(0))
        for hop in zip(path, path[1:]):
            total = tuple(t + c for t, c in zip(total, lookup[hop]))
        out.append(PathVector3(total, path))
    return out


def _phase1(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Feasible x >= 0 with rows*x = rhs, or None.  Exact simplex, Bland's rule."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    tab = []
    for r in range(m):
        row = list(rows[r])
        b = rhs[r]
        if b < 0:
            row = [-x for x in row]
            b = -b
        art = [Fraction(0)] * m
        art[r] = Fraction(1)
        tab.append(row + art + [b])
    basis = [n + r for r in range(m)]

    while True:
        lam = [Fraction(0)] * (n + m)
        for r in range(m):
            if basis[r] >= n:
                for j in range(n + m):
                    lam[j] += tab[r][j]
        entering = next(
            (
                j
                for j in range(n + m)
                if (Fraction(1) if j >= n else Fraction(0)) - lam[j] < 0
            ),
            None,
        )
        if entering is None:
            break
        pivot_row = None
        best = None
        for r in range(m):
            coef = tab[r][entering]
            if coef > 0:
                ratio = tab[r][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[r] < basis[pivot_row]):
                    best = ratio
                    pivot_row = r
        assert pivot_row is not None, "phase-one objective is bounded"
        piv = tab[pivot_row][entering]
        tab[pivot_row] = [x / piv for x in tab[pivot_row]]
        for r in range(m):
            if r != pivot_row and tab[r][entering] != 0:
                f = tab[r][entering]
                tab[r] = [x - f * y for x, y in zip(tab[r], tab[pivot_row])]
        basis[pivot_row] = entering

    if any(basis[r] >= n and tab[r][-1] != 0 for r in range(m)):
        return None
    x = [Fraction(0)] * n
    for r in range(m):
        if basis[r] < n:
            x[basis[r]] = tab[r][-1]
    return x


def in_convex_hull(p, points) -> bool:
    """Exact membership of p in the convex hull of `points`."""
    p = _point(p)
    pts = [_point(q) for q in points]
    if not pts:
        return False
    rows = [[q[k] for q in pts] for k in range(3)]
    rows.append([Fraction(1)] * len(pts))
    return _phase1(rows, [p[0], p[1], p[2], Fraction(1)]) is not None


def hull3_vertices(points) -> tuple[Point3, ...]:
    """The 0-dimensional faces of conv(points), any degeneracy allowed."""
    pts = sorted({_point(p) for p in points})
    if not pts:
        raise ValueError("need at least one point")
    return tuple(
        p for p in pts if not in_convex_hull(p, [q for q in pts if q != p])
    )


def affine_rank(points) -> int:
    """Dimension of the affine hull of the points (0 to 3)."""
    pts = [_point(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    base = pts[0]
    rows = [[c - b for c, b in zip(p, base)] for p in pts[1:]]
    rank = 0
    for col in range(3):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / lead
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _cross(u: Point3, v: Point3) -> Point3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _plane_key(normal: Point3, offset: Fraction):
    nums = [normal[0], normal[1], normal[2], offset]
    scale = 1
    for x in nums:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [int(x * scale) for x in nums]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


@dataclass(frozen=True)
class FaceCounts:
    vertices: int
    edges: int
    facets: int


def face_counts(points) -> FaceCounts:
    """Count faces of a full-dimensional hull with at most 200 vertices."""
    verts = hull3_vertices(points)
    if len(verts) > 200:
        raise ValueError("face lattice computed only up to 200 vertices")
    if affine_rank(verts) < 3:
        raise ValueError("face lattice needs a full-dimensional hull")
    planes: dict[tuple, set[Point3]] = {}
    k = len(verts)
    for i in range(k):
        for j in range(i + 1, k):
            for l in range(j + 1, k):
                a, b, c = verts[i], verts[j], verts[l]
                normal = _cross(
                    tuple(x - y for x, y in zip(b, a)),
                    tuple(x - y for x, y in zip(c, a)),
                )
                if normal == (0, 0, 0):
                    continue
                offset = sum(x * y for x, y in zip(normal, a))
                key = _plane_key(normal, offset)
                if key in planes:
                    continue
                dots = [
                    sum(x * y for x, y in zip(normal, v)) - offset for v in verts
                ]
                if all(d <= 0 for d in dots) or all(d >= 0 for d in dots):
                    planes[key] = {v for v, d in zip(verts, dots) if d == 0}
    edge_ends = sum(len(vs) for vs in planes.values())
    assert edge_ends % 2 == 0, "every facet edge is shared by exactly two facets"
    return FaceCounts(len(verts), edge_ends // 2, len(planes))


def minkowski_vertices(a_points, b_points) -> tuple[Point3, ...]:
    """Vertices of conv(A + B) from all pairwise sums."""
    a_pts = [_point(p) for p in a_points]
    b_pts = [_point(p) for p in b_points]
    if len(a_pts) * len(b_pts) > 10**6:
        raise ValueError("pairwise sum set too large")
    sums = {tuple(x + y for x, y in zip(p, q)) for p in a_pts for q in b_pts}
    return hull3_vertices(sums)


def _exposing_direction(v: Point3, others: list[Point3]) -> Point3:
    """A direction d with d.(q - v) >= 1 for every other point q."""
    m = len(others)
    rows = []
    for i, q in enumerate(others):
        diff = [x - y for x, y in zip(q, v)]
        surplus = [Fraction(0)] * m
        surplus[i] = Fraction(-1)
        rows.append(diff + [-x for x in diff] + surplus)
    x = _phase1(rows, [Fraction(1)] * m)
    assert x is not None, "a hull vertex always has an exposing direction"
    return (x[0] - x[3], x[1] - x[4], x[2] - x[5])


def decompose_vertex(v, a_points, b_points) -> tuple[Point3, Point3]:
    """Split a vertex of conv(A + B) into its unique summand pair."""
    v = _point(v)
    a_pts = sorted({_point(p) for p in a_points})
    b_pts = sorted({_point(p) for p in b_points})
    sums = sorted({tuple(x + y for x, y in zip(p, q)) for p in a_pts for q in b_pts})
    if v not in sums or in_convex_hull(v, [q for q in sums if q != v]):
        raise ValueError(f"{v} is not a vertex of the sum hull")
    if len(sums) == 1:
        return a_pts[0], b_pts[0]
    d = _exposing_direction(v, [q for q in sums if q != v])

    def argmin(points):
        scores = [sum(x * y for x, y in zip(d, p)) for p in points]
        best = min(scores)
        hits = [p for p, s in zip(points, scores) if s == best]
        assert len(hits) == 1, "the exposing direction is generic on each summand"
        return hits[0]

    va, vb = argmin(a_pts), argmin(b_pts)
    assert tuple(x + y for x, y in zip(va, vb)) == v
    return va, vb


@dataclass(frozen=True)
class CoverReport:
    cover_size: int
    checked: int
    violations: tuple[Point3, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def cover_check(g: TriGraph, samples, limit: int = 100_000) -> CoverReport:
    """At every sampled parameter triple, some hull vertex must minimize."""
    vectors = path_vectors(g, limit=limit)
    verts = set(hull3_vertices([pv.vector for pv in vectors]))
    lams = [_point(raw) for raw in samples]
    violations = []
    for lam in lams:
        costs = [sum(x * y for x, y in zip(pv.vector, lam)) for pv in vectors]
        best = min(costs)
        if not any(
            pv.vector in verts for pv, c in zip(vectors, costs) if c == best
        ):
            violations.append(lam)
    return CoverReport(len(verts), len(lams), tuple(violations))


@dataclass(frozen=True)
class TwoParamReport:
    pieces_positive: int
    pieces_negative: int
    witnesses: tuple[tuple[int, ...], ...]

    @property
    def cover_size(self) -> int:
        return len(self.witnesses)


def two_param_pieces(g: TriGraph) -> TwoParamReport:
    """Reduce a two-parameter graph to the envelopes at lam2 = 1 and -1.

    Any (lam1, lam2) minimizer is covered: for lam2 > 0 costs scale to the
    lam2 = 1 envelope at lam1/lam2, for lam2 < 0 likewise, and at lam2 = 0
    the end pieces of either envelope minimize lam1's coefficient alone.
    """
    if any(e.coeffs[2] != 0 for e in g.edges):
        raise ValueError("two-parameter reduction needs every third coefficient zero")

    def at(sign: int) -> Envelope:
        edges = [
            Edge(e.tail, e.head, AffineForm(sign * e.coeffs[1], e.coeffs[0]))
            for e in g.edges
        ]
        return envelope_dp(
            ParametricGraph(g.vertex_count, g.source, g.sink, edges), None
        )

    plus, minus = at(1), at(-1)
    witnesses = sorted(set(plus.witnesses) | set(minus.witnesses))
    return TwoParamReport(
        piece_count(plus.function), piece_count(minus.function), tuple(witnesses)
    )
