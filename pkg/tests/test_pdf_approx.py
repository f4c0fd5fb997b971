
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from lapcompand.design import support_bound
from lapcompand.errors import DomainError
from lapcompand.pdf_approx import (ApproxPdf, approx_error, cbrt_integral, linear_approx,
                                   make_grid, uniform_approx)
from lapcompand.source import LaplacianSource

from conftest import XMAX, rel


def test_make_grid():
    g = make_grid(XMAX[16], 2)
    assert np.allclose(g.boundaries, [0, 1.83982225337740822, XMAX[16]], rtol=1e-15)
    assert list(make_grid(1.0, 1).boundaries) == [0.0, 1.0]
    assert make_grid(XMAX[32], 2).boundaries[1] == pytest.approx(2.54335201195634113, rel=1e-15)
    for x_max, L in [(0.0, 2), (-1.0, 2), (1.0, 0)]:
        with pytest.raises(DomainError):
            make_grid(x_max, L)


@pytest.mark.parametrize("L", [1, 3, 7, 10])
def test_grid_boundaries_exact(L):
    g = make_grid(4.3, L)
    b = g.boundaries
    assert b[0] == 0.0 and b[-1] == 4.3
    assert all(b[i] == i * 4.3 / L for i in range(L + 1))
    assert g.width == 4.3 / L


def test_linear_coefficients(unit):
    ap = linear_approx(unit, make_grid(XMAX[16], 2))
    assert ap.slopes[0] == pytest.approx(-0.355842638700599587, rel=1e-13)
    assert ap.intercepts[0] == pytest.approx(0.707106781186547524, rel=1e-14)
    assert ap.slopes[1] == pytest.approx(-0.0263794955304930524, rel=1e-12)
    assert ap.intercepts[1] == pytest.approx(0.100953158714518460, rel=1e-12)
    assert ap.value(0, 0.0) == unit.pdf(0.0)


@pytest.mark.parametrize("L", [1, 2, 5, 8])
def test_linear_endpoint_interpolation_exact(unit, L):
    g = make_grid(XMAX[32], L)
    ap = linear_approx(unit, g)
    b = g.boundaries
    for i in range(L):
        assert ap.value(i, b[i]) == unit.pdf(b[i])
        assert ap.value(i, b[i + 1]) == unit.pdf(b[i + 1])
        x = np.linspace(b[i], b[i + 1], 50)
        assert np.all(ap.value(i, x) > 0)


def test_uniform_values(unit):
    ap = uniform_approx(unit, make_grid(XMAX[16], 2))
    assert ap.levels[0] == pytest.approx(0.251618742860508560, rel=1e-13)
    assert ap.levels[1] == pytest.approx(0.0186531201738918592, rel=1e-12)
    ap32 = uniform_approx(unit, make_grid(XMAX[32], 2))
    assert ap32.levels[0] == pytest.approx(0.191202372537009480, rel=1e-13)
    wide = uniform_approx(unit, make_grid(200.0, 1))
    assert 200.0 * wide.levels[0] == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("sigma", [0.3, 1.0, 2.0])
@pytest.mark.parametrize("L", [1, 2, 4, 8])
def test_uniform_mass_conservation(sigma, L):
    s = LaplacianSource(sigma)
    g = make_grid(support_bound(16, sigma), L)
    ap = uniform_approx(s, g)
    mass = integrate.quad(s.pdf, 0, g.x_max, epsabs=0, epsrel=1e-13)[0]
    assert rel(float(np.sum(g.width * ap.levels)), mass) < 1e-12
    b = g.boundaries
    for i in range(L):
        seg = integrate.quad(s.pdf, b[i], b[i + 1], epsabs=0, epsrel=1e-13)[0]
        assert rel(g.width * ap.levels[i], seg) < 1e-12
    assert np.all(np.diff(ap.levels) < 0)


def test_cbrt_integral_examples(unit):
    g = make_grid(XMAX[16], 2)
    lin, uni = linear_approx(unit, g), uniform_approx(unit, g)
    b = g.boundaries
    assert cbrt_integral(lin, 0, b[0], b[1]) == pytest.approx(1.28640228305784013, rel=1e-13)
    assert cbrt_integral(uni, 0, b[0], b[1]) == pytest.approx(1.16151154329553336, rel=1e-13)
    assert cbrt_integral(lin, 1, 2.0, 2.0) == 0.0
    assert cbrt_integral(uni, 1, 2.0, 2.0) == 0.0
    with pytest.raises(DomainError):
        cbrt_integral(lin, 0, 1.0, 2.5)
    with pytest.raises(DomainError):
        cbrt_integral(lin, 0, 1.0, 0.5)


def test_cbrt_integral_flat_chord_limit():
    g = make_grid(1.0, 1)
    flat = ApproxPdf(g, "linear", np.array([0.4]), np.array([0.4]))
    assert cbrt_integral(flat, 0, 0.2, 0.7) == pytest.approx(0.5 * 0.4 ** (1 / 3), rel=1e-15)
    nearly = ApproxPdf(g, "linear", np.array([0.4]), np.array([0.4 * (1 - 1e-13)]))
    assert cbrt_integral(nearly, 0, 0.0, 1.0) == pytest.approx(0.4 ** (1 / 3), rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.3, 3.0), st.sampled_from([4, 8, 16, 32, 64, 128]), st.integers(1, 8),
       st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.sampled_from(["linear", "uniform"]))
def test_cbrt_integral_matches_quadrature(sigma, N, L, f0, f1, kind):
    s = LaplacianSource(sigma)
    g = make_grid(support_bound(N, sigma), L)
    ap = linear_approx(s, g) if kind == "linear" else uniform_approx(s, g)
    i = int(min(f0 * L, L - 1))
    lo, hi = g.boundaries[i], g.boundaries[i + 1]
    a = lo + f1 * (hi - lo) * 0.5
    b = hi - f0 * (hi - lo) * 0.3
    ref = integrate.quad(lambda x: np.cbrt(ap.value(i, x)), a, b, epsabs=0, epsrel=1e-13)[0]
    assert abs(cbrt_integral(ap, i, a, b) - ref) <= 1e-9 * max(abs(ref), 1e-300)


def test_approx_error_paper_case(unit):
    g = make_grid(XMAX[16], 2)
    e_u, d_u = approx_error(unit, uniform_approx(unit, g))
    assert e_u == pytest.approx([0.244331389478120550, 0.102639713576730910], rel=1e-8)
    assert d_u == pytest.approx(0.3470, abs=5e-4)
    e_l, d_l = approx_error(unit, linear_approx(unit, g))
    assert e_l == pytest.approx([0.190429767342483484, 0.0799965031847301389], rel=1e-8)
    assert d_l == pytest.approx(0.270426270527213622, rel=1e-8)
    assert d_u == float(e_u.sum()) and d_l == float(e_l.sum())
    assert np.all(e_u >= 0) and np.all(e_l >= 0)


class _Flat:
    def __init__(self, height):
        self.height = height

    def pdf(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.height)


def test_approx_error_exact_match_is_zero():
    g = make_grid(2.0, 3)
    ap = ApproxPdf(g, "uniform", np.full(3, 0.25), np.full(3, 0.25))
    errors, delta = approx_error(_Flat(0.25), ap)
    assert delta == 0.0 and np.all(errors == 0.0)


@pytest.mark.parametrize("kind", ["linear", "uniform"])
def test_approx_error_decreases_with_refinement(unit, kind):
    make = linear_approx if kind == "linear" else uniform_approx
    xm = support_bound(16)
    _, coarse = approx_error(unit, make(unit, make_grid(xm, 2)))
    _, fine = approx_error(unit, make(unit, make_grid(xm, 8)))
    assert fine < coarse
