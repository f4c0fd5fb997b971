import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from lapcompand.errors import DomainError
from lapcompand.source import LaplacianSource, laplace_from_uniform, uniform_stream

from conftest import XMAX, rel


def test_pdf_values(unit):
    assert unit.pdf(0.0) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert unit.pdf(XMAX[16] / 2) == pytest.approx(0.0524195758046474634, rel=1e-13)
    assert LaplacianSource(2.0).pdf(0.0) == pytest.approx(0.35355339059327376, rel=1e-15)


def test_sigma_must_be_positive():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            LaplacianSource(bad)


@given(st.floats(-40, 40))
def test_pdf_symmetric_and_positive(x):
    s = LaplacianSource(1.3)
    assert s.pdf(x) == s.pdf(-x)
    assert s.pdf(x) > 0


@pytest.mark.parametrize("sigma", [0.5, 1.0, 3.0])
def test_normalization_and_variance(sigma):
    s = LaplacianSource(sigma)
    pts = [-50 * sigma, 0.0, 50 * sigma]
    mass = sum(integrate.quad(s.pdf, a, b, epsabs=1e-14, epsrel=1e-14)[0] for a, b in zip(pts, pts[1:]))
    var = sum(integrate.quad(lambda x: x * x * s.pdf(x), a, b, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
              for a, b in zip(pts, pts[1:]))
    assert abs(mass - 1) < 1e-10
    assert var == pytest.approx(sigma ** 2, rel=1e-10)


@pytest.mark.parametrize("t, expected", [
    (0.0, 0.70710678118654752),
    (XMAX[16], 4.38675128794136397),
    (XMAX[32], 5.79381080509922978),
])
def test_tail_centroid(unit, t, expected):
    assert unit.tail_centroid(t) == pytest.approx(expected, rel=1e-14)


def test_tail_centroid_matches_quadrature():
    s = LaplacianSource(1.7)
    t = 2.2
    num = integrate.quad(lambda x: x * s.pdf(x), t, np.inf, epsabs=0, epsrel=1e-13)[0]
    den = integrate.quad(s.pdf, t, np.inf, epsabs=0, epsrel=1e-13)[0]
    assert s.tail_centroid(t) == pytest.approx(num / den, rel=1e-10)
    with pytest.raises(DomainError):
        s.tail_centroid(-0.1)


@pytest.mark.parametrize("x_max, expected", [
    (XMAX[16], 0.00274781192753918176),
    (0.0, 0.5),
    (XMAX[32], 0.000375657400450788881),
])
def test_overload_distortion(unit, x_max, expected):
    y = unit.tail_centroid(x_max)
    assert unit.overload_distortion(x_max, y) == pytest.approx(expected, rel=1e-12)
    assert unit.overload_distortion(x_max) == pytest.approx(expected, rel=1e-12)


@given(st.floats(0.1, 4.0), st.floats(0.0, 12.0))
def test_overload_identity_with_centroid(sigma, x_max):
    s = LaplacianSource(sigma)
    closed = 0.5 * sigma ** 2 * math.exp(-math.sqrt(2) * x_max / sigma)
    assert rel(s.overload_distortion(x_max, s.tail_centroid(x_max)), closed) < 1e-12


def test_partial_second_moment_examples(unit):
    assert unit.partial_second_moment(0.0, math.inf, 0.0) == pytest.approx(0.5, rel=1e-15)
    assert unit.partial_second_moment(XMAX[16], math.inf, unit.tail_centroid(XMAX[16])) == \
        pytest.approx(0.00274781192753918176 / 2, rel=1e-12)
    assert unit.partial_second_moment(1.0, 1.0, 0.0) == 0.0
    with pytest.raises(DomainError):
        unit.partial_second_moment(2.0, 1.0, 0.0)


@settings(max_examples=200)
@given(st.floats(0.2, 3.0), st.floats(0.0, 8.0), st.floats(0.0, 3.0), st.floats(0.0, 3.0),
       st.floats(-2.0, 10.0))
def test_partial_second_moment_additive(sigma, a, w1, w2, y):
    s = LaplacianSource(sigma)
    b, c = a + w1, a + w1 + w2
    whole = s.partial_second_moment(a, c, y)
    parts = s.partial_second_moment(a, b, y) + s.partial_second_moment(b, c, y)
    assert abs(whole - parts) <= 1e-12 * abs(whole) + 1e-300


def test_partial_second_moment_negative_interval():
    s = LaplacianSource(0.8)
    expected = integrate.quad(lambda x: (x - 0.3) ** 2 * s.pdf(x), -1.5, 0.7, points=[0.0],
                              epsabs=0, epsrel=1e-13)[0]
    assert rel(s.partial_second_moment(-1.5, 0.7, 0.3), expected) < 1e-10


def test_optimal_compressor(unit):
    xm = XMAX[16]
    assert unit.optimal_compressor(0.0, xm) == 0.0
    assert unit.optimal_compressor(xm, xm) == pytest.approx(xm, rel=1e-15)
    # quadrature of the cube-root density ratio
    assert unit.optimal_compressor(xm / 2, xm) == pytest.approx(2.59114562338296431, rel=1e-13)
    assert unit.optimal_compressor(-xm / 2, xm) == pytest.approx(-2.59114562338296431, rel=1e-13)
    with pytest.raises(DomainError):
        unit.optimal_compressor(xm * 1.01, xm)


def test_optimal_compressor_monotone(unit):
    xm = XMAX[32]
    x = np.linspace(-xm, xm, 4001)
    c = unit.optimal_compressor(x, xm)
    assert np.all(np.diff(c) > 0)
    assert abs(unit.optimal_compressor(1e-12, xm)) < 1e-10


def test_sample_basics(unit):
    assert unit.sample(0, seed=3).shape == (0,)
    assert laplace_from_uniform(0.5) == 0.0
    u = uniform_stream(100_000, seed=9)
    assert np.all((u > 0) & (u < 1))


def test_sample_deterministic_and_chunk_invariant(unit):
    full = unit.sample(200_000, seed=42)
    assert np.array_equal(full, unit.sample(200_000, seed=42))
    cuts = [0, 1, 65535, 65537, 131072, 150001, 200_000]
    pieces = np.concatenate([unit.sample(b - a, 42, start=a) for a, b in zip(cuts, cuts[1:])])
    assert np.array_equal(full, pieces)
    assert not np.array_equal(full[:10], unit.sample(10, seed=43))


def test_sample_moments():
    n = 1_000_000
    x = LaplacianSource(1.0).sample(n, seed=7)
    assert 0.99 <= x.var() <= 1.01
    assert abs(x.mean()) < 4 / math.sqrt(n)
    y = LaplacianSource(2.5).sample(n, seed=8)
    assert abs(y.var() / 2.5 ** 2 - 1) < 4 * math.sqrt(5) / math.sqrt(n)
