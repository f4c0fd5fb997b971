"""Segment grid and piecewise approximations of the Laplacian density.

Two approximants are supported on an equidistant grid over [0, x_max]:

* ``linear``  -- the chord of the density across each segment,
* ``uniform`` -- the segment-average density (same mass per segment).

Both are stored as the approximant's values at the left and right end of
each segment, so every segment is the line between those two values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError
from .source import LaplacianSource

Kind = Literal["linear", "uniform"]

# Absolute tolerance per quadrature panel in the approximation error.
PANEL_TOL = 1e-10


@dataclass(frozen=True)
class SegmentGrid:
    x_max: float
    L: int

    def __post_init__(self):
        if not self.x_max > 0:
            raise DomainError(f"x_max must be positive, got {self.x_max}")
        if int(self.L) != self.L or self.L < 1:
            raise DomainError(f"segment count L must be an integer >= 1, got {self.L}")

    @property
    def width(self) -> float:
        return self.x_max / self.L

    @property
    def boundaries(self) -> np.ndarray:
        return np.array([i * self.x_max / self.L for i in range(self.L + 1)])

    def segment_of(self, x):
        """Zero-based segment index of |x|; boundaries belong to the segment on their right."""
        idx = np.searchsorted(self.boundaries, np.abs(np.asarray(x, dtype=float)), side="right") - 1
        return np.clip(idx, 0, self.L - 1)


def make_grid(x_max: float, L: int) -> SegmentGrid:
    return SegmentGrid(float(x_max), int(L))


@dataclass(frozen=True, eq=False)
class ApproxPdf:
    """Piecewise approximant given by its end values on each segment.

    ``left[i]`` and ``right[i]`` are the approximant at the start and end of
    segment ``i`` (zero-based).  For the uniform kind they coincide.
    """

    grid: SegmentGrid
    kind: Kind
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        if self.kind not in ("linear", "uniform"):
            raise DomainError(f"unknown approximation kind {self.kind!r}")
        for arr in (self.left, self.right):
            if np.shape(arr) != (self.grid.L,):
                raise DomainError("approximant needs one value pair per segment")

    @property
    def slopes(self) -> np.ndarray:
        return (self.right - self.left) / self.grid.width

    @property
    def intercepts(self) -> np.ndarray:
        return self.left - self.slopes * self.grid.boundaries[:-1]

    @property
    def levels(self) -> np.ndarray:
        """Per-segment constant densities (uniform kind)."""
        return self.left.copy()

    def value(self, i: int, x):
        """Approximant of segment ``i`` at amplitude(s) ``x`` (no range check)."""
        b = self.grid.boundaries
        t = (np.asarray(x, dtype=float) - b[i]) / (b[i + 1] - b[i])
        # lerp form: exact at both segment ends
        return (1.0 - t) * self.left[i] + t * self.right[i]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        seg = self.grid.segment_of(x)
        b = self.grid.boundaries
        t = (np.abs(x) - b[seg]) / (b[seg + 1] - b[seg])
        out = (1.0 - t) * self.left[seg] + t * self.right[seg]
        return out if out.ndim else float(out)

    def is_positive(self) -> bool:
        # a line segment is positive iff both its ends are
        return bool(np.all(self.left > 0) and np.all(self.right > 0))


def linear_approx(source: LaplacianSource, grid: SegmentGrid) -> ApproxPdf:
    """Chord approximation: interpolates the density at every grid boundary."""
    p = source.pdf(grid.boundaries)
    return ApproxPdf(grid, "linear", p[:-1].copy(), p[1:].copy())


def uniform_approx(source: LaplacianSource, grid: SegmentGrid) -> ApproxPdf:
    """Segment-average approximation preserving each segment's probability mass."""
    b = grid.boundaries
    lam = source.rate
    width = grid.width
    vals = np.array([
        -math.exp(-lam * b[i]) * math.expm1(-lam * width) / (2.0 * width)
        for i in range(grid.L)
    ])
    return ApproxPdf(grid, "uniform", vals, vals.copy())


def _cbrt_chord_integral(width, u, v):
    """Integral of the cube root of a line over an interval of length ``width``.

    ``u`` and ``v`` are the line's values at the interval ends.  Equal to
    3/(4a) (v^{4/3} - u^{4/3}) with a the slope, rearranged so that it has no
    1/a factor and reduces to width * u^{1/3} when u == v.
    """
    U = np.cbrt(u)
    V = np.cbrt(v)
    return 0.75 * width * (U + V) * (U * U + V * V) / (U * U + U * V + V * V)


def cbrt_integral(approx: ApproxPdf, i: int, a: float, b: float) -> float:
    """Integral of the approximant's cube root over [a, b] inside segment ``i`` (zero-based)."""
    lo, hi = approx.grid.boundaries[i], approx.grid.boundaries[i + 1]
    slack = 1e-12 * approx.grid.x_max
    if a > b or a < lo - slack or b > hi + slack:
        raise DomainError(f"[{a}, {b}] is not inside segment {i} = [{lo}, {hi}]")
    if a == b:
        return 0.0
    if approx.kind == "uniform":
        return (b - a) * float(np.cbrt(approx.left[i]))
    return float(_cbrt_chord_integral(b - a, approx.value(i, a), approx.value(i, b)))


def segment_cbrt_integrals(approx: ApproxPdf) -> np.ndarray:
    """Full-segment cube-root integrals, one per segment."""
    if approx.kind == "uniform":
        return approx.grid.width * np.cbrt(approx.left)
    return _cbrt_chord_integral(approx.grid.width, approx.left, approx.right)


def _kinks(f, lo, hi, probes=64):
    """Interior sign changes of ``f`` on [lo, hi], located by bracketing root search."""
    xs = np.linspace(lo, hi, probes + 1)
    fs = np.array([f(x) for x in xs])
    roots = []
    for x0, x1, f0, f1 in zip(xs[:-1], xs[1:], fs[:-1], fs[1:]):
        if f0 == 0.0 and lo < x0 < hi:
            roots.append(x0)
        elif f0 * f1 < 0:
            roots.append(optimize.brentq(f, x0, x1, xtol=1e-15, rtol=1e-15))
    return roots


def approx_error(source, approx: ApproxPdf):
    """Per-segment L1 distance between cube roots of density and approximant.

    ``source`` needs only a vectorisable ``pdf`` method.  Returns the array of
    segment errors and their sum.
    """
    b = approx.grid.boundaries
    errors = np.empty(approx.grid.L)
    for i in range(approx.grid.L):
        def diff(x, i=i):
            return float(source.pdf(x) - approx.value(i, x))

        def integrand(x, i=i):
            return abs(float(np.cbrt(source.pdf(x))) - float(np.cbrt(approx.value(i, x))))

        panels = [b[i], *_kinks(diff, b[i], b[i + 1]), b[i + 1]]
        errors[i] = sum(
            integrate.quad(integrand, p0, p1, epsabs=PANEL_TOL, epsrel=1e-12, limit=200)[0]
            for p0, p1 in zip(panels[:-1], panels[1:])
        )
    return errors, float(errors.sum())
