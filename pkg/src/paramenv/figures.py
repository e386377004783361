"""PNG figure rendering for report-producing commands.

Figures are presentational: exact rationals are cast to floats here and
nowhere else.  The Agg backend keeps rendering headless.
"""

from __future__ import annotations

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .exact import Domain
from .graph import Envelope


def envelope_figure(env: Envelope, path: str, lam_range: Domain = None) -> None:
    """Plot an envelope with its breakpoints marked."""
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

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot([float(x) for x in xs], [float(y) for y in ys], color="#1f77b4")
    if breaks:
        ax.plot(
            [float(x) for x in breaks],
            [float(f(x)) for x in breaks],
            "o",
            color="#d62728",
            mfc="none",
        )
    ax.set_xlabel("parameter")
    ax.set_ylabel("cheapest path cost")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def histogram_figure(
    histogram: dict[int, int], path: str, bound: int | None = None
) -> None:
    """Bar chart of envelope piece counts over experiment trials."""
    keys = sorted(histogram)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(keys, [histogram[k] for k in keys], color="#1f77b4")
    if bound is not None:
        ax.axvline(bound, color="#d62728", linestyle="--", label=f"bound {bound}")
        ax.legend()
    ax.set_xlabel("envelope pieces")
    ax.set_ylabel("trials")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
