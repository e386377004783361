"""Deterministic SVG rendering of piecewise-linear functions.

The emitter does pure string assembly over exact rationals, so a fixed
input yields byte-identical output.  Coordinates are rounded to three
decimals with round-half-even, the only place precision is dropped.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import Domain, format_rational
from .graph import Envelope

MARGIN = 40


def _fmt(value: Fraction) -> str:
    """Fixed-point decimal with at most three places, no exponent."""
    r = round(Fraction(value), 3)
    scaled = r.numerator * (1000 // r.denominator)
    sign = "-" if scaled < 0 else ""
    whole, part = divmod(abs(scaled), 1000)
    text = f"{sign}{whole}.{part:03d}".rstrip("0").rstrip(".")
    return text or "0"


def emit_plot(
    env: Envelope,
    width: int = 640,
    height: int = 400,
    lam_range: Domain = None,
) -> str:
    """Render an envelope as an SVG polyline with breakpoint markers.

    The parameter range is the function's domain unless `lam_range` is
    given; a function with no domain needs an explicit range.
    """
    f = env.function
    span = lam_range if lam_range is not None else f.domain
    if span is None:
        raise ValueError("function has no bounded domain: pass an explicit range")
    lo, hi = Fraction(span[0]), Fraction(span[1])
    if lo >= hi:
        raise ValueError("range must have positive width")

    breaks = [x for x in f.breakpoints if lo < x < hi]
    xs = [lo, *breaks, hi]
    ys = [f(x) for x in xs]
    y_lo, y_hi = min(ys), max(ys)
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 1, y_hi + 1

    inner_w = Fraction(width - 2 * MARGIN)
    inner_h = Fraction(height - 2 * MARGIN)

    def px(x: Fraction) -> Fraction:
        return MARGIN + (x - lo) / (hi - lo) * inner_w

    def py(y: Fraction) -> Fraction:
        return height - MARGIN - (y - y_lo) / (y_hi - y_lo) * inner_h

    points = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{height - MARGIN}" x2="{width - MARGIN}" '
        f'y2="{height - MARGIN}" stroke="#888888" stroke-width="1"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" '
        f'y2="{height - MARGIN}" stroke="#888888" stroke-width="1"/>',
        f'<polyline fill="none" stroke="#1f77b4" stroke-width="2" points="{points}"/>',
    ]
    for x in breaks:
        parts.append(
            f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(f(x)))}" r="4" '
            f'fill="none" stroke="#d62728" stroke-width="2"/>'
        )
    parts.append(
        f'<text x="{MARGIN}" y="{height - MARGIN + 16}" font-size="12" '
        f'fill="#444444">{format_rational(lo)}</text>'
    )
    parts.append(
        f'<text x="{width - MARGIN}" y="{height - MARGIN + 16}" font-size="12" '
        f'text-anchor="end" fill="#444444">{format_rational(hi)}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
