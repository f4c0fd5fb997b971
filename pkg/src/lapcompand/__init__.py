"""Companding scalar quantizers for Laplacian sources built from piecewise density approximations."""

__version__ = "0.1.0"

from .compressor import CompressorMap, build
from .design import CellAllocation, Codebook, allocate_cells, build_codebook, design, support_bound
from .errors import DomainError, InfeasibleDesign, InvalidDesign
from .evaluation import (EvaluationReport, bennett_closed_form, bennett_numeric, evaluate_codebook,
                         evaluate_design, exact_granular, monte_carlo_sqnr, sqnr)
from .pdf_approx import (ApproxPdf, SegmentGrid, approx_error, cbrt_integral, linear_approx,
                         make_grid, uniform_approx)
from .source import LaplacianSource

__all__ = [
    "ApproxPdf", "CellAllocation", "Codebook", "CompressorMap", "DomainError", "EvaluationReport",
    "InfeasibleDesign", "InvalidDesign", "LaplacianSource", "SegmentGrid", "allocate_cells",
    "approx_error", "bennett_closed_form", "bennett_numeric", "build", "build_codebook",
    "cbrt_integral", "design", "evaluate_codebook", "evaluate_design", "exact_granular",
    "linear_approx", "make_grid", "monte_carlo_sqnr", "sqnr", "support_bound", "uniform_approx",
]
