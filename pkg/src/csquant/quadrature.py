"""
Product rule for integrals over the complex plane against d^2z / pi.

Radial part: Gauss-Laguerre in u = |z|^2 (weights rescaled by e^u so the
Gaussian can live in the integrand).  Angular part: T uniform nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_laguerre


class QuadratureError(ValueError):
    """The quadrature rule cannot integrate the requested matrix elements exactly."""


@dataclass(frozen=True)
class QuadratureScheme:
    radial: int
    angular: int

    def __post_init__(self):
        if self.radial < 1 or self.angular < 1:
            raise ValueError("quadrature orders must be positive")

    @classmethod
    def default(cls, dim: int) -> "QuadratureScheme":
        """R = 2D, T = 4D + 1: exact for every matrix element of symbols of degree <= 3D + 1."""
        return cls(2 * dim, 4 * dim + 1)

    def nodes(self):
        """Nodes z and weights w with sum w h(z) = (1/pi) int h d^2z for h = poly * e^{-|z|^2}."""
        return _nodes(self.radial, self.angular)

    def is_exact_moment(self, j: int, k: int) -> bool:
        """Whether (1/pi) int z^j zbar^k e^{-|z|^2} d^2z is reproduced exactly."""
        if j != k:
            return abs(j - k) % self.angular != 0
        # the radial integrand is u^((j+k)/2) e^{-u} with u = |z|^2
        return (j + k) // 2 <= 2 * self.radial - 1

    def covers(self, degree: int, dim: int) -> bool:
        """Exactness for all matrix elements of a degree-``degree`` symbol at cutoff ``dim``."""
        radial_degree = degree // 2 + dim - 1
        return radial_degree <= 2 * self.radial - 1 and degree + dim - 1 < self.angular

    def require(self, degree: int, dim: int) -> None:
        if not self.covers(degree, dim):
            need_r = -(-(degree // 2 + dim) // 2)
            need_t = degree + dim
            raise QuadratureError(
                f"quadrature (radial={self.radial}, angular={self.angular}) is not exact for a "
                f"degree-{degree} symbol at D={dim}; need radial >= {need_r} and "
                f"angular >= {need_t}")


@lru_cache(maxsize=16)
def _nodes(radial: int, angular: int):
    u, w = roots_laguerre(radial)
    theta = 2 * np.pi * np.arange(angular) / angular
    z = (np.sqrt(u)[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.repeat(w * np.exp(u) / angular, angular)
    z.flags.writeable = False
    weights.flags.writeable = False
    return z, weights


def gaussian_moment(j: int, k: int, quad: QuadratureScheme) -> complex:
    """Quadrature value of (1/pi) int z^j zbar^k e^{-|z|^2} d^2z (exactly delta_jk k!)."""
    z, w = quad.nodes()
    r = np.abs(z)
    # log domain: r^(j+k) overflows at the outer Laguerre nodes for large j + k
    mod = np.exp((j + k) * np.log(r) + np.log(w) - r ** 2)
    return complex(np.sum(mod * np.exp(1j * (j - k) * np.angle(z))))
