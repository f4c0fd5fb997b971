import pytest

from lapcompand.design import support_bound
from lapcompand.pdf_approx import linear_approx, make_grid, uniform_approx
from lapcompand.source import LaplacianSource
from lapcompand.compressor import build

# Reference values computed with 30-digit mpmath quadrature, independent of the package.
XMAX = {16: 3.67964450675481644, 32: 5.08670402391268225}


@pytest.fixture
def unit():
    return LaplacianSource(1.0)


def paper_map(kind, N, L=2, sigma=1.0):
    src = LaplacianSource(sigma)
    grid = make_grid(support_bound(N, sigma), L)
    approx = linear_approx(src, grid) if kind == "linear" else uniform_approx(src, grid)
    return build(approx)


@pytest.fixture
def pusq16():
    return paper_map("uniform", 16)


@pytest.fixture
def plsq16():
    return paper_map("linear", 16)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)





ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
