"""Laplacian source model.

Closed-form density, tail moments and the optimal compressor for a
zero-mean Laplacian source, plus a seeded inverse-CDF sampler whose
output does not depend on how the stream is chunked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc

from .errors import DomainError

SQRT2 = math.sqrt(2.0)

# Samples are generated in fixed blocks; block b of seed s is a Philox
# stream keyed by s with the block number in the third counter word.
SAMPLE_BLOCK = 1 << 16


@dataclass(frozen=True)
class LaplacianSource:
    """Zero-mean Laplacian distribution with standard deviation ``sigma``."""

    sigma: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma must be positive and finite, got {self.sigma}")

    @property
    def rate(self) -> float:
        """Exponential decay rate sqrt(2)/sigma of each half of the density."""
        return SQRT2 / self.sigma

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.exp(-self.rate * np.abs(x)) / (SQRT2 * self.sigma)
        return out if out.ndim else float(out)

    def tail_mass(self, t: float) -> float:
        """P(X > t) for t >= 0."""
        return 0.5 * math.exp(-self.rate * t)

    def segment_mass(self, a: float, b: float) -> float:
        """P(a < X < b) for 0 <= a <= b, without cancellation for narrow intervals."""
        return -0.5 * math.exp(-self.rate * a) * math.expm1(-self.rate * (b - a))

    def tail_centroid(self, t: float) -> float:
        """Conditional mean E[X | X > t]; the overload reproduction level."""
        if t < 0:
            raise DomainError(f"tail threshold must be >= 0, got {t}")
        return t + self.sigma / SQRT2

    def partial_second_moment(self, a: float, b: float, y: float) -> float:
        """Closed form of the integral of (x - y)^2 p(x) over [a, b].

        ``b`` may be ``inf``.  Negative parts of the interval are folded onto
        the positive half-line by symmetry of the density.  The interval is
        split at ``y`` so every piece is a sum of positive terms.
        """
        if a > b:
            raise DomainError(f"interval is reversed: a={a} > b={b}")
        if a < 0:
            left = self.partial_second_moment(max(0.0, -b), -a, -y)
            return left + (self.partial_second_moment(0.0, b, y) if b > 0 else 0.0)
        if a == b:
            return 0.0
        lam = self.rate
        if y <= a:
            e0, e1, e2 = _decay_moments(lam, b - a)
            u = a - y
            return 0.5 * lam * math.exp(-lam * a) * (u * u * e0 + 2.0 * u * e1 + e2)
        if y >= b:
            k0, k1, k2 = _growth_moments(lam, b - a)
            u = y - b
            return 0.5 * lam * math.exp(-lam * b) * (u * u * k0 + 2.0 * u * k1 + k2)
        return self.partial_second_moment(a, y, y) + self.partial_second_moment(y, b, y)

    def overload_distortion(self, x_max: float, y_max: float | None = None) -> float:
        """Distortion from both tails beyond +-x_max reproduced at +-y_max.

        With the default (centroid) ``y_max`` this is sigma^2/2 * exp(-sqrt(2) x_max/sigma).
        """
        if x_max < 0:
            raise DomainError(f"x_max must be >= 0, got {x_max}")
        if y_max is None:
            return 0.5 * self.sigma ** 2 * math.exp(-self.rate * x_max)
        return 2.0 * self.partial_second_moment(x_max, math.inf, y_max)

    def optimal_compressor(self, x, x_max: float):
        """Cube-root-density compressor, odd-extended to [-x_max, x_max]."""
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) > x_max):
            raise DomainError(f"compressor input outside [-{x_max}, {x_max}]")
        r = self.rate / 3.0
        out = np.sign(x) * x_max * np.expm1(-r * np.abs(x)) / math.expm1(-r * x_max)
        return out if out.ndim else float(out)

    def sample(self, n: int, seed: int, start: int = 0) -> np.ndarray:
        """Elements ``start .. start+n-1`` of the seeded Laplacian stream."""
        return laplace_from_uniform(uniform_stream(n, seed, start), self.sigma)


def _decay_moments(lam, w):
    """Integrals of s^k exp(-lam s) over [0, w] for k = 0, 1, 2 (w may be inf)."""
    z = lam * w
    return tuple(gammainc(k + 1, z) * math.factorial(k) / lam ** (k + 1) for k in range(3))


def _growth_moments(lam, w):
    """Integrals of s^k exp(+lam s) over [0, w] for k = 0, 1, 2."""
    z = lam * w
    if z > 30.0:
        ez = math.exp(z)
        return (math.expm1(z) / lam,
                (ez * (z - 1.0) + 1.0) / lam ** 2,
                (ez * (z * z - 2.0 * z + 2.0) - 2.0) / lam ** 3)
    out = []
    for k in range(3):
        # w^{k+1} * sum_m z^m / (m! (k + m + 1))
        term, total, m = 1.0, 0.0, 0
        while True:
            piece = term / (k + m + 1)
            total += piece
            if piece < 1e-17 * total:
                break
            m += 1
            term *= z / m
        out.append(total * w ** (k + 1))
    return tuple(out)


def laplace_from_uniform(u, sigma: float = 1.0):
    """Inverse CDF of the Laplacian; u = 0.5 maps to exactly 0."""
    d = np.asarray(u, dtype=float) - 0.5
    return -(sigma / SQRT2) * np.sign(d) * np.log1p(-2.0 * np.abs(d))


def _block_bits(seed: int, block: int) -> np.ndarray:
    bitgen = np.random.Philox(key=seed, counter=[0, 0, block, 0])
    return bitgen.random_raw(SAMPLE_BLOCK)


def uniform_stream(n: int, seed: int, start: int = 0) -> np.ndarray:
    """Uniform draws on the open interval (0, 1), addressable by stream index."""
    if n < 0 or start < 0:
        raise DomainError("sample count and offset must be >= 0")
    out = np.empty(n)
    pos = 0
    while pos < n:
        idx = start + pos
        block, off = divmod(idx, SAMPLE_BLOCK)
        take = min(SAMPLE_BLOCK - off, n - pos)
        bits = _block_bits(seed, block)[off:off + take]
        out[pos:pos + take] = ((bits >> np.uint64(11)).astype(float) + 0.5) * 2.0 ** -53
        pos += take
    return out
