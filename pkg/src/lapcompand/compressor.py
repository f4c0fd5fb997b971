"""Piecewise compressor built from a cube-root density approximant.

The compressor maps [0, x_max] onto itself in proportion to the running
integral of the approximant's cube root and is extended to negative
amplitudes as an odd function.  Both approximant kinds have closed-form
inverses, so no iterative solver is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidDesign
from .pdf_approx import ApproxPdf, _cbrt_chord_integral, segment_cbrt_integrals


def _scalar_or_array(out):
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class CompressorMap:
    """Compressor c(x) with cumulative cube-root integrals at the segment boundaries.

    ``cumulative[i]`` is the cube-root integral of the approximant from 0 to
    the i-th boundary; ``total`` equals ``cumulative[-1]``.
    """

    approx: ApproxPdf
    cumulative: np.ndarray

    @property
    def x_max(self) -> float:
        return self.approx.grid.x_max

    @property
    def total(self) -> float:
        return float(self.cumulative[-1])

    @property
    def boundary_images(self) -> np.ndarray:
        """c(x) at each segment boundary."""
        return self.x_max * (self.cumulative / self.total)

    def _check(self, v, what):
        if np.any(np.abs(v) > self.x_max):
            raise DomainError(f"{what} outside [-{self.x_max}, {self.x_max}]")

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        self._check(x, "compressor input")
        ap = self.approx
        b = ap.grid.boundaries
        seg = ap.grid.segment_of(x)
        ax = np.abs(x)
        partial = _cbrt_chord_integral(ax - b[seg], ap.left[seg], ap.value(seg, ax))
        partial = np.where(ax == b[seg], 0.0, partial)
        ratio = np.where(ax == self.x_max, 1.0, (self.cumulative[seg] + partial) / self.total)
        out = np.sign(x) * self.x_max * ratio
        return _scalar_or_array(out)

    __call__ = evaluate

    def segment_inverse(self, i, J):
        """Offset from boundary ``i`` at which the cube-root integral reaches ``J``."""
        ap = self.approx
        b = ap.grid.boundaries
        v = ap.left[i]
        J = np.asarray(J, dtype=float)
        if ap.kind == "uniform":
            return J / np.cbrt(v)
        a = (ap.right[i] - v) / (b[i + 1] - b[i])
        a = np.broadcast_to(a, J.shape)
        v = np.broadcast_to(v, J.shape)
        flat = a == 0
        safe_a = np.where(flat, 1.0, a)
        r = (4.0 / 3.0) * safe_a * J / (v * np.cbrt(v))
        # (v^{4/3} + 4aJ/3)^{3/4} - v, over a, without cancellation
        curved = v * np.expm1(0.75 * np.log1p(r)) / safe_a
        return np.where(flat, J / np.cbrt(v), curved)

    def invert(self, y):
        y = np.asarray(y, dtype=float)
        self._check(y, "compressed value")
        shape = y.shape
        y = y.reshape(-1)
        ap = self.approx
        b = ap.grid.boundaries
        L = ap.grid.L
        u = (np.abs(y) / self.x_max) * self.total
        seg = np.clip(np.searchsorted(self.cumulative, u, side="right") - 1, 0, L - 1)
        J = u - self.cumulative[seg]
        x = np.empty_like(u)
        for i in np.unique(seg):
            m = seg == i
            x[m] = np.clip(b[i] + self.segment_inverse(i, J[m]), b[i], b[i + 1])
        x = np.where(u >= self.total, self.x_max, x)
        return _scalar_or_array((np.sign(y) * x).reshape(shape))

    def derivative(self, x):
        """Slope c'(x); at a segment boundary the right-hand limit is returned."""
        x = np.asarray(x, dtype=float)
        self._check(x, "compressor input")
        ap = self.approx
        b = ap.grid.boundaries
        ax = np.abs(x)
        # moving right from a negative boundary goes toward zero in |x|
        seg_pos = np.searchsorted(b, ax, side="right") - 1
        seg_neg = np.searchsorted(b, ax, side="left") - 1
        seg = np.clip(np.where(x < 0, seg_neg, seg_pos), 0, ap.grid.L - 1)
        dens = ap.value(seg, ax)
        return _scalar_or_array(self.x_max * np.cbrt(dens) / self.total)


def build(approx: ApproxPdf) -> CompressorMap:
    if not approx.is_positive():
        raise InvalidDesign("approximating density must be strictly positive on [0, x_max]")
    seg = segment_cbrt_integrals(approx)
    cumulative = np.concatenate([[0.0], np.cumsum(seg)])
    if not np.all(np.diff(cumulative) > 0):
        raise InvalidDesign("compressor is not strictly increasing")
    return CompressorMap(approx, cumulative)
