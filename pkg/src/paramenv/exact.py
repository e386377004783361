"""Exact rational arithmetic for affine forms and piecewise-linear functions.

Everything here works over `fractions.Fraction`; floats are never introduced.
An affine form is a + b*x.  A piecewise-linear function is a list of affine
segments over a closed interval (or the whole line), stored in a canonical
shape so that structural equality coincides with pointwise equality.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

RationalLike = Fraction | int


def _frac(value: RationalLike) -> Fraction:
    # A float smuggled in would silently trade exactness for binary rounding.
    if isinstance(value, float):
        raise TypeError("floats are not allowed here; use Fraction or int")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q" (ASCII or U+2212 minus) into a reduced Fraction."""
    s = text.strip().replace("−", "-")
    if "/" in s:
        num, _, den = s.partition("/")
        if not num or not den:
            raise ValueError(f"malformed rational: {text!r}")
        try:
            return Fraction(int(num), int(den))
        except ZeroDivisionError:
            raise ValueError(f"zero denominator: {text!r}") from None
    return Fraction(int(s))


def format_rational(value: RationalLike) -> str:
    """Canonical string form: "p" for integers, "p/q" with q > 1 otherwise."""
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class AffineForm:
    """The function x -> a + b*x with exact rational coefficients."""

    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))

    def __call__(self, x: RationalLike) -> Fraction:
        return self.a + self.b * _frac(x)

    def __add__(self, other: AffineForm) -> AffineForm:
        return AffineForm(self.a + other.a, self.b + other.b)

    def __sub__(self, other: AffineForm) -> AffineForm:
        return AffineForm(self.a - other.a, self.b - other.b)

    def scaled(self, factor: RationalLike) -> AffineForm:
        k = _frac(factor)
        return AffineForm(self.a * k, self.b * k)


ZERO_FORM = AffineForm(Fraction(0), Fraction(0))

Domain = tuple[Fraction, Fraction] | None


def _check_domain(domain: Domain) -> Domain:
    if domain is None:
        return None
    lo, hi = _frac(domain[0]), _frac(domain[1])
    if lo > hi:
        raise ValueError(f"empty domain [{lo}, {hi}]")
    return (lo, hi)


@dataclass(frozen=True)
class PwlFunction:
    """Continuous piecewise-linear function in canonical form.

    segments[i] applies between breakpoints[i-1] and breakpoints[i] (the
    outer segments extend to the domain ends).  Canonical means breakpoints
    are strictly increasing, strictly inside the domain, adjacent segments
    are distinct forms, and the function is continuous at every breakpoint.
    Structural equality is therefore pointwise equality on a fixed domain.
    """

    breakpoints: tuple[Fraction, ...]
    segments: tuple[AffineForm, ...]
    domain: Domain = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "breakpoints", tuple(_frac(x) for x in self.breakpoints))
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "domain", _check_domain(self.domain))
        if len(self.segments) != len(self.breakpoints) + 1:
            raise ValueError("segment/breakpoint count mismatch")
        for left, right in zip(self.breakpoints, self.breakpoints[1:]):
            if left >= right:
                raise ValueError("breakpoints must be strictly increasing")
        if self.domain is not None and self.breakpoints:
            lo, hi = self.domain
            if self.breakpoints[0] <= lo or self.breakpoints[-1] >= hi:
                raise ValueError("breakpoints must lie strictly inside the domain")
        for x, left_seg, right_seg in zip(self.breakpoints, self.segments, self.segments[1:]):
            if left_seg == right_seg:
                raise ValueError("adjacent segments must differ (not canonical)")
            if left_seg(x) != right_seg(x):
                raise ValueError(f"discontinuity at {x}")

    def __call__(self, x: RationalLike) -> Fraction:
        x = _frac(x)
        if self.domain is not None:
            lo, hi = self.domain
            if x < lo or x > hi:
                raise ValueError(f"{x} outside domain [{lo}, {hi}]")
        return self.segments[bisect_right(self.breakpoints, x)](x)

    def segment_bounds(self, index: int) -> tuple[Fraction | None, Fraction | None]:
        """Closed bounds of segment `index`; None marks an unbounded end."""
        lo: Fraction | None
        hi: Fraction | None
        lo = self.breakpoints[index - 1] if index > 0 else None
        hi = self.breakpoints[index] if index < len(self.breakpoints) else None
        if self.domain is not None:
            if lo is None:
                lo = self.domain[0]
            if hi is None:
                hi = self.domain[1]
        return lo, hi


def piece_count(f: PwlFunction) -> int:
    return len(f.segments)


def is_concave(f: PwlFunction) -> bool:
    """Canonical continuous PWL is concave iff slopes strictly decrease."""
    return all(s1.b > s2.b for s1, s2 in zip(f.segments, f.segments[1:]))


def affine_pwl(form: AffineForm, domain: Domain = None) -> PwlFunction:
    return PwlFunction((), (form,), domain)


def constant_pwl(value: RationalLike, domain: Domain = None) -> PwlFunction:
    return affine_pwl(AffineForm(_frac(value), Fraction(0)), domain)


def _merge_pieces(
    forms: list[AffineForm],
    tags: list[int],
    cuts: list[Fraction],
    domain: Domain,
) -> tuple[PwlFunction, tuple[int, ...]]:
    out_forms = [forms[0]]
    out_tags = [tags[0]]
    out_cuts: list[Fraction] = []
    for cut, form, tag in zip(cuts, forms[1:], tags[1:]):
        if form == out_forms[-1]:
            continue
        out_cuts.append(cut)
        out_forms.append(form)
        out_tags.append(tag)
    return PwlFunction(tuple(out_cuts), tuple(out_forms), domain), tuple(out_tags)


def _pwl_min_tagged(
    f: PwlFunction,
    f_tags: tuple[int, ...],
    g: PwlFunction,
    g_tags: tuple[int, ...],
) -> tuple[PwlFunction, tuple[int, ...]]:
    """Pointwise min with per-piece winner tags.

    Invariant carried by tags: the tagged line equals its piece's form as a
    whole affine function, so tags stay valid when equal pieces are merged.
    """
    if f.domain != g.domain:
        raise ValueError("domain mismatch")
    cuts = sorted(set(f.breakpoints) | set(g.breakpoints))
    f_cut = set(f.breakpoints)
    g_cut = set(g.breakpoints)

    forms: list[AffineForm] = []
    tags: list[int] = []
    all_cuts: list[Fraction] = []
    fi = gi = 0
    for i in range(len(cuts) + 1):
        left: Fraction | None = cuts[i - 1] if i > 0 else None
        right: Fraction | None = cuts[i] if i < len(cuts) else None
        if f.domain is not None:
            if left is None:
                left = f.domain[0]
            if right is None:
                right = f.domain[1]
        ff, tf = f.segments[fi], f_tags[fi]
        gg, tg = g.segments[gi], g_tags[gi]

        db = ff.b - gg.b
        da = ff.a - gg.a
        if i > 0:
            all_cuts.append(cuts[i - 1])
        if db == 0:
            if da < 0 or (da == 0 and tf <= tg):
                forms.append(ff)
                tags.append(tf)
            else:
                forms.append(gg)
                tags.append(tg)
        else:
            # f - g = da + db*x vanishes at star; db > 0 means f wins leftward
            star = -da / db
            low = (ff, tf) if db > 0 else (gg, tg)
            high = (gg, tg) if db > 0 else (ff, tf)
            inside = (left is None or star > left) and (right is None or star < right)
            if inside:
                forms.append(low[0])
                tags.append(low[1])
                all_cuts.append(star)
                forms.append(high[0])
                tags.append(high[1])
            elif left is not None and star <= left:
                forms.append(high[0])
                tags.append(high[1])
            else:
                forms.append(low[0])
                tags.append(low[1])

        if i < len(cuts):
            if cuts[i] in f_cut:
                fi += 1
            if cuts[i] in g_cut:
                gi += 1

    return _merge_pieces(forms, tags, all_cuts, f.domain)


def pwl_min(f: PwlFunction, g: PwlFunction) -> PwlFunction:
    """Pointwise minimum of two PWL functions on the same domain."""
    zeros_f = (0,) * len(f.segments)
    zeros_g = (0,) * len(g.segments)
    result, _ = _pwl_min_tagged(f, zeros_f, g, zeros_g)
    return result


def pwl_add(f: PwlFunction, g: PwlFunction) -> PwlFunction:
    """Pointwise sum of two PWL functions on the same domain."""
    if f.domain != g.domain:
        raise ValueError("domain mismatch")
    cuts = sorted(set(f.breakpoints) | set(g.breakpoints))
    f_cut = set(f.breakpoints)
    g_cut = set(g.breakpoints)
    forms: list[AffineForm] = []
    fi = gi = 0
    for i in range(len(cuts) + 1):
        forms.append(f.segments[fi] + g.segments[gi])
        if i < len(cuts):
            if cuts[i] in f_cut:
                fi += 1
            if cuts[i] in g_cut:
                gi += 1
    result, _ = _merge_pieces(forms, [0] * len(forms), cuts, f.domain)
    return result


def pwl_restrict(f: PwlFunction, lo: RationalLike, hi: RationalLike) -> PwlFunction:
    """Restrict to [lo, hi] intersected with the current domain.

    Errors when the intersection is empty.  A single-point restriction is
    allowed and keeps one segment.
    """
    lo, hi = _frac(lo), _frac(hi)
    if f.domain is not None:
        lo = max(lo, f.domain[0])
        hi = min(hi, f.domain[1])
    if lo > hi:
        raise ValueError("empty restriction")
    if lo == hi:
        seg = f.segments[bisect_right(f.breakpoints, lo)]
        return PwlFunction((), (seg,), (lo, hi))
    first = bisect_right(f.breakpoints, lo)
    last = bisect_left(f.breakpoints, hi)
    return PwlFunction(
        tuple(f.breakpoints[first:last]),
        tuple(f.segments[first : last + 1]),
        (lo, hi),
    )


def lower_envelope_lines(
    lines: list[AffineForm] | tuple[AffineForm, ...],
    domain: Domain = None,
) -> tuple[PwlFunction, list[int]]:
    """Concave lower envelope of affine forms, with per-piece witness indices.

    Divide-and-conquer over the line list, merging with the tagged min.  Ties
    resolve to the smallest input index, so output is deterministic.
    """
    if not lines:
        raise ValueError("need at least one line")
    domain = _check_domain(domain)

    def rec(low: int, high: int) -> tuple[PwlFunction, tuple[int, ...]]:
        if high - low == 1:
            return affine_pwl(lines[low], domain), (low,)
        mid = (low + high) // 2
        left_f, left_t = rec(low, mid)
        right_f, right_t = rec(mid, high)
        return _pwl_min_tagged(left_f, left_t, right_f, right_t)

    env, tags = rec(0, len(lines))
    return env, list(tags)
