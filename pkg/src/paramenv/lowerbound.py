"""Recursive family of planar instances whose envelopes have many pieces.

An instance is parameterized by (n, width B, drift D, depth m) and built by
composing, left to right: a depth m-1 instance, its mirror image (same
weights, edges reversed, sharing the last layer), a planarized linking
gadget, and a width B+n depth m-1 instance.  The left copy is scaled by
K_L = 400*N^(m+4)*B^2 and the link and right copy by K_R = 20*N^3*B, with
N = n*n; scaling a copy by K multiplies constants by K and slopes by K/N
(the parameter axis stretches by N per level).  The left copy is built for
drift (N/(2*K_L))*(D - K_R/N) and the right copy for drift 1.

Edge coefficients depend affinely on the instance drift, so weights are
carried symbolically as `DriftCoeff` and the whole recursion is drift-free;
the numeric drift enters only when the final graph is materialized.

For track b and index j (written j = n*d + r), the declared path runs
through the left copy's path for (b, d), back through the mirror, across
the link with rise r+1, and through the right copy's path for (b+r+1, d).
On the j-th parameter interval that path is the unique shortest one by a
margin of 1, which only needs endpoint checks: the distance-to-last-layer
function and the best-alternative function are concave, so an affine lower
bound attained (or cleared by 1) at both interval endpoints holds across
the whole interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import AffineForm, PwlFunction, RationalLike, _frac, piece_count
from .gadget import arrangement_geometry
from .graph import (
    Edge,
    Envelope,
    ParametricGraph,
    dist_from_at,
    envelope_dp,
    path_cost_form,
    second_best_at,
)


@dataclass(frozen=True)
class DriftCoeff:
    """Edge weight a + b*lam whose a and b are affine in the instance drift."""

    const_base: Fraction
    const_drift: Fraction
    slope_base: Fraction
    slope_drift: Fraction

    def __post_init__(self) -> None:
        for name in ("const_base", "const_drift", "slope_base", "slope_drift"):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    def at_drift(self, drift: RationalLike) -> AffineForm:
        d = _frac(drift)
        return AffineForm(
            self.const_base + self.const_drift * d,
            self.slope_base + self.slope_drift * d,
        )

    def substituted_scaled(
        self,
        offset: Fraction,
        gain: Fraction,
        const_scale: Fraction,
        slope_scale: Fraction,
    ) -> DriftCoeff:
        """Re-express for a parent whose drift maps to offset + gain*drift,
        then scale constants by const_scale and slopes by slope_scale."""
        return DriftCoeff(
            const_scale * (self.const_base + self.const_drift * offset),
            const_scale * self.const_drift * gain,
            slope_scale * (self.slope_base + self.slope_drift * offset),
            slope_scale * self.slope_drift * gain,
        )


ZERO_COEFF = DriftCoeff(Fraction(0), Fraction(0), Fraction(0), Fraction(0))


@dataclass(frozen=True)
class LevelConstants:
    """Numeric composition constants of one recursion level."""

    scale_left: Fraction
    scale_right: Fraction
    drift_left: Fraction
    drift_right: Fraction


def level_constants(n: int, width: int, depth: int, drift: RationalLike) -> LevelConstants:
    if depth < 1:
        raise ValueError("level constants exist for depth >= 1")
    big_n = n * n
    scale_left = Fraction(400 * big_n ** (depth + 4) * width * width)
    scale_right = Fraction(20 * big_n**3 * width)
    drift_left = Fraction(big_n, 2 * scale_left) * (_frac(drift) - scale_right / big_n)
    return LevelConstants(scale_left, scale_right, drift_left, Fraction(1))


def interval_anchor(j: int, depth: int, n: int) -> int:
    """Anchor point of the j-th parameter interval at the given depth."""
    if not 0 <= j < n**depth:
        raise ValueError(f"index {j} out of range for depth {depth}")
    big_n = n * n
    if depth == 0:
        return 0
    d, r = divmod(j, n)
    return big_n * interval_anchor(d, depth - 1, n) + big_n * (r + 1)


def level_interval(j: int, depth: int, n: int) -> tuple[int, int]:
    """Closed parameter interval on which declared path j is optimal."""
    a = interval_anchor(j, depth, n)
    return (a + 1, a + n * n - 1)


@dataclass
class _Component:
    vertex_count: int
    edges: list[tuple[int, int, DriftCoeff]]
    inputs: list[int]
    outputs: list[int]
    paths: dict[tuple[int, int], tuple[int, ...]]


def _build(n: int, width: int, depth: int) -> _Component:
    if depth == 0:
        edges = [(b, width + b, ZERO_COEFF) for b in range(width)]
        return _Component(
            2 * width,
            edges,
            list(range(width)),
            list(range(width, 2 * width)),
            {(b, 0): (b, width + b) for b in range(width)},
        )

    big_n = n * n
    scale_left = Fraction(400 * big_n ** (depth + 4) * width * width)
    scale_right = Fraction(20 * big_n**3 * width)
    offset_left = -scale_right / (2 * scale_left)
    gain_left = Fraction(big_n, 2 * scale_left)

    left = _build(n, width, depth - 1)
    lift_left = lambda c: c.substituted_scaled(
        offset_left, gain_left, scale_left, scale_left / big_n
    )
    lift_right = lambda c: c.substituted_scaled(
        Fraction(1), Fraction(0), scale_right, scale_right / big_n
    )

    edges = [(u, v, lift_left(c)) for u, v, c in left.edges]
    next_id = left.vertex_count

    # mirror: same lifted weights, reversed, sharing the left copy's outputs
    mirror_map: dict[int, int] = {v: v for v in left.outputs}
    for v in range(left.vertex_count):
        if v not in mirror_map:
            mirror_map[v] = next_id
            next_id += 1
    for u, v, c in left.edges:
        edges.append((mirror_map[v], mirror_map[u], lift_left(c)))
    mirror_outputs = [mirror_map[v] for v in left.inputs]

    geo = arrangement_geometry(width, n)
    link_map: dict[int, int] = {}
    for b, vid in enumerate(geo.left_ids):
        link_map[vid] = mirror_outputs[b]
    for vid in range(len(geo.points)):
        if vid not in link_map:
            link_map[vid] = next_id
            next_id += 1
    for tail, head, (b, j), span in geo.fragments:
        rise = j - b
        coeff = DriftCoeff(
            Fraction(10 * rise * (rise + 1) * big_n**3 * width),
            Fraction(big_n * rise * b),
            Fraction(-20 * rise * big_n**2 * width),
            Fraction(0),
        ).substituted_scaled(Fraction(0), Fraction(1), span, span)
        edges.append((link_map[tail], link_map[head], coeff))

    right = _build(n, width + n, depth - 1)
    right_map: dict[int, int] = {}
    for j, vid in enumerate(right.inputs):
        right_map[vid] = link_map[geo.right_ids[j]]
    for v in range(right.vertex_count):
        if v not in right_map:
            right_map[v] = next_id
            next_id += 1
    for u, v, c in right.edges:
        edges.append((right_map[u], right_map[v], lift_right(c)))

    paths = {}
    for b in range(width):
        for j in range(n**depth):
            d, r = divmod(j, n)
            through = left.paths[(b, d)]
            back = tuple(mirror_map[v] for v in reversed(through))
            across = tuple(link_map[v] for v in geo.chains[(b, b + r + 1)])
            onward = tuple(right_map[v] for v in right.paths[(b + r + 1, d)])
            assert back[0] == through[-1] and across[0] == back[-1] and onward[0] == across[-1]
            paths[(b, j)] = through + back[1:] + across[1:] + onward[1:]

    return _Component(
        next_id,
        edges,
        list(left.inputs),
        [right_map[v] for v in right.outputs],
        paths,
    )


@dataclass
class LowerBoundInstance:
    """A built instance: graph, symbolic coefficients, declared paths."""

    n: int
    width: int
    drift: Fraction
    depth: int
    graph: ParametricGraph
    coeffs: tuple[DriftCoeff, ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    declared_paths: dict[tuple[int, int], tuple[int, ...]]
    anchors: tuple[int, ...]
    sink_attached: bool


def build_instance(
    n: int, width: int, drift: RationalLike, depth: int
) -> LowerBoundInstance:
    """Build the (n, width, drift, depth) instance with exact weights.

    When the instance has one input track, a sink is attached behind the
    last layer with zero-weight edges so source-to-sink envelopes are
    well-defined; the core vertex and coefficient bounds ignore it.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if width < 1 or depth < 0:
        raise ValueError("need width >= 1 and depth >= 0")
    drift = _frac(drift)
    if abs(drift) > 1:
        raise ValueError("|drift| must be at most 1")

    comp = _build(n, width, depth)
    edges = [Edge(u, v, c.at_drift(drift)) for u, v, c in comp.edges]
    coeffs = [c for _, _, c in comp.edges]
    vertex_count = comp.vertex_count
    sink_attached = False
    if width == 1 and len(comp.outputs) > 1:
        sink = vertex_count
        vertex_count += 1
        for out in comp.outputs:
            edges.append(Edge(out, sink, AffineForm(0, 0)))
            coeffs.append(ZERO_COEFF)
        sink_attached = True
    elif width == 1:
        sink = comp.outputs[0]
    else:
        sink = comp.paths[(0, 0)][-1]

    graph = ParametricGraph(vertex_count, comp.inputs[0], sink, edges)
    graph.validate()
    return LowerBoundInstance(
        n=n,
        width=width,
        drift=drift,
        depth=depth,
        graph=graph,
        coeffs=tuple(coeffs),
        inputs=tuple(comp.inputs),
        outputs=tuple(comp.outputs),
        declared_paths=comp.paths,
        anchors=tuple(interval_anchor(j, depth, n) for j in range(n**depth)),
        sink_attached=sink_attached,
    )


def coeff_numerator_bound(n: int, width: int, depth: int) -> int:
    return (400 * n * n * width) ** (5 * depth * depth)


def coeff_denominator_bound(n: int, depth: int) -> int:
    return 2**depth * n * n


def core_vertex_bound(n: int, width: int, depth: int) -> int:
    return (3 ** (depth + 1) - 1) * (width + depth * n) ** 4


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class InstanceReport:
    ok: bool
    checks: tuple[CheckResult, ...]

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _scaffold(inst: LowerBoundInstance) -> tuple[ParametricGraph, int]:
    """The instance graph with a guaranteed behind-the-last-layer sink."""
    if inst.sink_attached:
        return inst.graph, inst.graph.sink
    g = inst.graph
    t = g.vertex_count
    edges = list(g.edges) + [Edge(out, t, AffineForm(0, 0)) for out in inst.outputs]
    return ParametricGraph(g.vertex_count + 1, g.source, t, edges), t


def verify_instance(inst: LowerBoundInstance) -> InstanceReport:
    """Check the six construction properties on a built instance.

    Interval optimality is certified at interval endpoints only, which is
    complete: both the shortest-cost function and the best-alternative
    function are concave in the parameter, so matching an affine form at
    both ends (or clearing it by 1 there) pins down the whole interval.
    """
    checks: list[CheckResult] = []
    n, width, depth = inst.n, inst.width, inst.depth
    big_n = n * n

    core = inst.graph.vertex_count - (1 if inst.sink_attached else 0)
    bound = core_vertex_bound(n, width, depth)
    checks.append(
        CheckResult("vertex_bound", core <= bound, f"core {core} vs bound {bound}")
    )

    num_bound = coeff_numerator_bound(n, width, depth)
    den_bound = coeff_denominator_bound(n, depth)
    worst_num = 0
    worst_den = 1
    coeffs_ok = True
    for edge, coeff in zip(inst.graph.edges, inst.coeffs):
        if coeff.at_drift(inst.drift) != edge.weight:
            coeffs_ok = False
        for part in (
            coeff.const_base,
            coeff.const_drift,
            coeff.slope_base,
            coeff.slope_drift,
        ):
            worst_num = max(worst_num, abs(part.numerator))
            worst_den = max(worst_den, part.denominator)
    coeffs_ok = coeffs_ok and worst_num <= num_bound and worst_den <= den_bound
    checks.append(
        CheckResult(
            "coefficient_bounds",
            coeffs_ok,
            f"max |numerator| {worst_num} vs {num_bound}, max denominator {worst_den} vs {den_bound}",
        )
    )

    aug, t = _scaffold(inst)
    opt_failures = []
    for b in range(width):
        start = inst.inputs[b]
        for j in range(n**depth):
            declared = inst.declared_paths[(b, j)] + (t,)
            form = path_cost_form(aug, declared)
            lo, hi = level_interval(j, depth, n)
            for x in (Fraction(lo), Fraction(hi)):
                best = dist_from_at(aug, x, start)[t]
                if best != form(x):
                    opt_failures.append(f"(b={b}, j={j}) not optimal at {x}")
                    continue
                second = second_best_at(aug, x, declared)
                if second is not None and second - best < 1:
                    opt_failures.append(f"(b={b}, j={j}) margin below 1 at {x}")
    checks.append(
        CheckResult(
            "interval_optimality",
            not opt_failures,
            "; ".join(opt_failures[:4]) or f"{width * n**depth} declared paths certified",
        )
    )

    drift_failures = []
    for j in range(n**depth):
        base_form = path_cost_form(inst.graph, inst.declared_paths[(0, j)])
        for b in range(1, width):
            delta = path_cost_form(inst.graph, inst.declared_paths[(b, j)]) - base_form
            expected = AffineForm(b * inst.drift * inst.anchors[j], 0)
            if delta != expected:
                drift_failures.append(f"(b={b}, j={j}) drift gap {delta} != {expected}")
    checks.append(
        CheckResult(
            "drift_identity",
            not drift_failures,
            "; ".join(drift_failures[:4]) or "cost gaps scale with track * drift * anchor",
        )
    )

    overlap_failures = []
    for j in range(n**depth):
        seen: dict[int, int] = {}
        for b in range(width):
            for v in inst.declared_paths[(b, j)]:
                if v in seen and seen[v] != b:
                    overlap_failures.append(f"j={j}: tracks {seen[v]} and {b} share vertex {v}")
                    break
                seen[v] = b
    checks.append(
        CheckResult(
            "track_disjointness",
            not overlap_failures,
            "; ".join(overlap_failures[:4]) or "declared paths of distinct tracks are disjoint",
        )
    )

    distinct_ok = all(
        len({inst.declared_paths[(b, j)] for j in range(n**depth)}) == n**depth
        for b in range(width)
    )
    checks.append(
        CheckResult(
            "index_distinctness",
            distinct_ok,
            "declared paths are pairwise distinct per track",
        )
    )

    return InstanceReport(all(c.ok for c in checks), tuple(checks))


def final_envelope(inst: LowerBoundInstance) -> Envelope:
    """Envelope of the single-track instance over its working domain."""
    if inst.width != 1:
        raise ValueError("envelope is defined for single-track instances")
    big_n = inst.n * inst.n
    return envelope_dp(inst.graph, (Fraction(0), Fraction(big_n ** (inst.depth + 1))))


def count_final_pieces(inst: LowerBoundInstance) -> int:
    return piece_count(final_envelope(inst).function)


def log2_lower_bound(x: int, precision: int = 256) -> Fraction:
    """A rational p/q <= log2(x), exact to within 1/precision."""
    if x < 1:
        raise ValueError("x must be positive")
    return Fraction((x**precision).bit_length() - 1, precision)


def formula_bit_length_check(n: int) -> tuple[bool, int, Fraction]:
    """At depth floor(log2 n), single track: coefficient numerators stay
    within 35*log2(n)^3 bits.  Exact: uses a rational lower bound on log2."""
    depth = n.bit_length() - 1
    bits = coeff_numerator_bound(n, 1, depth).bit_length()
    lg = log2_lower_bound(n)
    allowed = 35 * lg**3
    return (Fraction(bits) <= allowed, bits, allowed)
