"""Codebook design: support bound, cell allocation, thresholds and levels.

Two threshold layouts are available:

``segmented``
    Every segment receives an integer number of cells, spaced uniformly in
    the compressed domain between that segment's end images.  Segment
    boundaries are always thresholds.
``companded``
    A single uniform quantizer with step ``k = 2 x_max / (N - 2)`` over
    the compressed range, expanded through the inverse compressor.  Cells
    may straddle segment boundaries.

``companded`` is the default.  Both layouts coincide when L = 1, and
whenever the per-segment shares of cells happen to be integers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .compressor import CompressorMap, build
from .errors import DomainError, InfeasibleDesign
from .pdf_approx import ApproxPdf, SegmentGrid, linear_approx, make_grid, uniform_approx
from .source import SQRT2, LaplacianSource

Layout = Literal["segmented", "companded"]
LAYOUTS = ("segmented", "companded")
MODELS = {"plsq": "linear", "pusq": "uniform"}
SCHEMA = "lapcompand.codebook/1"


def check_levels(N: int) -> int:
    if int(N) != N or N < 4 or N % 2:
        raise DomainError(f"level count N must be an even integer >= 4, got {N}")
    return int(N)


def support_bound(N: int, sigma: float = 1.0) -> float:
    """Support region x_max = (3 sigma / sqrt 2) ln((N + 1) / 3)."""
    N = check_levels(N)
    return 3.0 * sigma / SQRT2 * math.log((N + 1) / 3.0)


@dataclass(frozen=True)
class CellAllocation:
    counts: tuple[int, ...]
    shares: tuple[float, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


def allocate_cells(cmap: CompressorMap, N: int) -> CellAllocation:
    """Split the (N-2)/2 granular cells of one quadrant among the segments.

    Shares are proportional to each segment's compressed width; they are
    rounded by largest remainder, then any empty segment takes a cell from
    the segment with the most cells.
    """
    N = check_levels(N)
    M = (N - 2) // 2
    L = cmap.approx.grid.L
    if M < L:
        raise InfeasibleDesign(f"(N-2)/2 = {M} cells cannot cover L = {L} segments")
    shares = M * np.diff(cmap.cumulative) / cmap.total
    counts = np.floor(shares).astype(int)
    short = M - counts.sum()
    # stable sort keeps the lower segment first on equal remainders
    order = np.argsort(-(shares - counts), kind="stable")
    counts[order[:short]] += 1
    while np.any(counts == 0):
        counts[np.argmax(counts)] -= 1
        counts[np.argmin(counts)] += 1
    return CellAllocation(tuple(int(c) for c in counts), tuple(float(s) for s in shares))


@dataclass(frozen=True, eq=False)
class Codebook:
    """Full symmetric quantizer.

    ``thresholds`` holds the positive-quadrant cell edges 0 = t_0 < ... <
    t_M = x_max and ``levels`` the M granular reproduction levels; the
    overload cells reproduce at +-``y_max``.

    Indices use a sign-magnitude layout: 0 .. M-1 for positive granular
    cells, M for positive overload, and the same plus N/2 for negatives.
    """

    model: str
    N: int
    sigma: float
    layout: str
    cmap: CompressorMap
    allocation: CellAllocation
    thresholds: np.ndarray
    levels: np.ndarray
    y_max: float
    step: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "step", 2.0 * self.x_max / (self.N - 2))

    @property
    def approx(self) -> ApproxPdf:
        return self.cmap.approx

    @property
    def grid(self) -> SegmentGrid:
        return self.cmap.approx.grid

    @property
    def L(self) -> int:
        return self.grid.L

    @property
    def x_max(self) -> float:
        return self.grid.x_max

    @property
    def cells(self) -> int:
        return len(self.levels)

    @property
    def source(self) -> LaplacianSource:
        return LaplacianSource(self.sigma)

    def encode(self, x):
        """Cell index of each amplitude.

        Cells are half-open [t_{j-1}, t_j) except the last granular cell,
        which includes x_max.
        """
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        mag = np.searchsorted(self.thresholds[1:-1], ax, side="right")
        mag = np.where(ax > self.x_max, self.cells, mag)
        idx = np.where(np.signbit(x) & (x != 0), mag + self.N // 2, mag)
        return idx if idx.ndim else int(idx)

    def decode(self, index):
        index = np.asarray(index)
        if index.dtype.kind not in "iu" or np.any((index < 0) | (index >= self.N)):
            raise DomainError(f"index outside 0..{self.N - 1}")
        half = self.N // 2
        mag = index % half
        table = np.append(self.levels, self.y_max)
        out = np.where(index >= half, -table[mag], table[mag])
        return out if out.ndim else float(out)

    def quantize(self, x):
        return self.decode(self.encode(x))

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        ap = self.approx
        segments = []
        b = self.grid.boundaries
        for i in range(self.L):
            seg = {"index": i + 1, "lo": float(b[i]), "hi": float(b[i + 1])}
            if ap.kind == "linear":
                seg["a_i"] = float(ap.slopes[i])
                seg["b_i"] = float(ap.intercepts[i])
                seg["p_lo"] = float(ap.left[i])
                seg["p_hi"] = float(ap.right[i])
            else:
                seg["p_i_u"] = float(ap.left[i])
            seg["N_i"] = self.allocation.counts[i]
            seg["share"] = self.allocation.shares[i]
            segments.append(seg)
        return {
            "schema": SCHEMA,
            "model": self.model,
            "layout": self.layout,
            "N": self.N,
            "L": self.L,
            "sigma": self.sigma,
            "x_max": self.x_max,
            "k": self.step,
            "segments": segments,
            "thresholds": [float(t) for t in self.thresholds],
            "levels": [float(v) for v in self.levels],
            "y_max": self.y_max,
        }

    def to_json(self) -> str:
        # float repr is the shortest string that round-trips (<= 17 significant digits)
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, doc: dict) -> "Codebook":
        if doc.get("schema") != SCHEMA:
            raise DomainError(f"not a codebook document (schema {doc.get('schema')!r})")
        model = doc["model"]
        grid = make_grid(doc["x_max"], doc["L"])
        segs = doc["segments"]
        if MODELS[model] == "linear":
            left = np.array([s["p_lo"] for s in segs])
            right = np.array([s["p_hi"] for s in segs])
        else:
            left = np.array([s["p_i_u"] for s in segs])
            right = left.copy()
        approx = ApproxPdf(grid, MODELS[model], left, right)
        alloc = CellAllocation(tuple(s["N_i"] for s in segs), tuple(s["share"] for s in segs))
        return cls(
            model=model,
            N=int(doc["N"]),
            sigma=float(doc["sigma"]),
            layout=doc["layout"],
            cmap=build(approx),
            allocation=alloc,
            thresholds=np.array(doc["thresholds"], dtype=float),
            levels=np.array(doc["levels"], dtype=float),
            y_max=float(doc["y_max"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "Codebook":
        return cls.from_dict(json.loads(text))


def _segmented(cmap: CompressorMap, alloc: CellAllocation):
    b = cmap.approx.grid.boundaries
    widths = np.diff(cmap.cumulative)
    thresholds = [0.0]
    levels = []
    for i, n in enumerate(alloc.counts):
        s = widths[i] / n
        j = np.arange(1, n + 1)
        edges = b[i] + cmap.segment_inverse(i, j[:-1] * s)
        mids = b[i] + cmap.segment_inverse(i, (j - 0.5) * s)
        thresholds.extend(np.clip(edges, b[i], b[i + 1]))
        thresholds.append(b[i + 1])
        levels.extend(mids)
    return np.array(thresholds), np.array(levels)


def _companded(cmap: CompressorMap, M: int):
    k = cmap.x_max / M
    j = np.arange(M + 1)
    thresholds = cmap.invert(np.minimum(j * k, cmap.x_max))
    thresholds[0], thresholds[-1] = 0.0, cmap.x_max
    levels = cmap.invert((j[1:] - 0.5) * k)
    return np.asarray(thresholds), np.asarray(levels)


def build_codebook(cmap: CompressorMap, N: int, sigma: float = 1.0,
                   layout: Layout = "companded") -> Codebook:
    N = check_levels(N)
    if layout not in LAYOUTS:
        raise DomainError(f"unknown layout {layout!r}; expected one of {LAYOUTS}")
    alloc = allocate_cells(cmap, N)
    if layout == "segmented":
        thresholds, levels = _segmented(cmap, alloc)
    else:
        thresholds, levels = _companded(cmap, (N - 2) // 2)
    model = {v: k for k, v in MODELS.items()}[cmap.approx.kind]
    return Codebook(
        model=model,
        N=N,
        sigma=float(sigma),
        layout=layout,
        cmap=cmap,
        allocation=alloc,
        thresholds=thresholds,
        levels=levels,
        y_max=LaplacianSource(sigma).tail_centroid(cmap.x_max),
    )


def design(model: str, N: int, L: int, sigma: float = 1.0,
           layout: Layout = "companded") -> Codebook:
    """Design a PLSQ or PUSQ codebook from scratch."""
    if model not in MODELS:
        raise DomainError(f"unknown model {model!r}; expected plsq or pusq")
    source = LaplacianSource(sigma)
    grid = make_grid(support_bound(N, sigma), L)
    approx = linear_approx(source, grid) if model == "plsq" else uniform_approx(source, grid)
    return build_codebook(build(approx), N, sigma, layout)
