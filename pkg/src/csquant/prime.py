"""
Prime quantization through the reproducing kernel of the coherent-state
subspace: evaluation maps E_z psi = <z|psi>, localization operators over
planar regions, and the Dirac-correspondence residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, roots_laguerre, roots_legendre

from .cs import unit_symbol
from .fock import FockParams, _as_params, adjoint, coherent_amplitudes, commutator
from .quadrature import QuadratureScheme, QuadratureError
from .symbols import Symbol, poisson_bracket

TWO_PI = 2 * math.pi


def kernel_eval(z: complex, w: complex) -> complex:
    """K(z, w) = <z|w> = exp(conj(z) w - |z|^2/2 - |w|^2/2)."""
    return complex(np.exp(np.conj(z) * w - abs(z) ** 2 / 2 - abs(w) ** 2 / 2))


def gram_matrix(points) -> np.ndarray:
    pts = np.asarray(points, dtype=complex)
    return np.exp(np.conj(pts)[:, None] * pts[None, :]
                  - np.abs(pts)[:, None] ** 2 / 2 - np.abs(pts)[None, :] ** 2 / 2)


# ---------------------------------------------------------------------------
# Regions

@dataclass(frozen=True)
class Region:
    """Planar region in the z-plane: disk, annulus, angular sector or the whole plane.

    ``r_inner``/``r_outer`` bound |z| (``r_outer=None`` means unbounded);
    ``theta`` is ``None`` for the full circle or a (start, stop) angle pair.
    """
    kind: str
    r_inner: float = 0.0
    r_outer: float | None = None
    theta: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("disk", "annulus", "sector", "plane"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.r_inner < 0 or (self.r_outer is not None and self.r_outer < self.r_inner):
            raise ValueError(f"invalid radii ({self.r_inner}, {self.r_outer}) for {self.kind}")
        if self.theta is not None:
            t0, t1 = self.theta
            if not (math.isfinite(t0) and math.isfinite(t1)) or not 0 < t1 - t0 <= TWO_PI:
                raise ValueError(f"sector angles must satisfy 0 < stop - start <= 2 pi, got {self.theta}")

    @classmethod
    def disk(cls, r: float) -> "Region":
        return cls("disk", 0.0, float(r))

    @classmethod
    def annulus(cls, r1: float, r2: float) -> "Region":
        return cls("annulus", float(r1), float(r2))

    @classmethod
    def sector(cls, theta0: float, theta1: float, r_max: float | None = None) -> "Region":
        return cls("sector", 0.0, None if r_max is None else float(r_max),
                   (float(theta0), float(theta1)))

    @classmethod
    def plane(cls, r_max: float | None = None) -> "Region":
        return cls("plane", 0.0, None if r_max is None else float(r_max))

    @classmethod
    def parse(cls, text: str) -> "Region":
        """``disk:r=1``, ``annulus:r1=0.5,r2=1``, ``sector:t0=0,t1=1.57[,r=2]``, ``plane[:r=5]``."""
        kind, _, rest = text.partition(":")
        kw = {}
        for item in filter(None, rest.split(",")):
            key, eq, value = item.partition("=")
            if not eq:
                raise ValueError(f"region parameter {item!r} is not of the form key=value")
            kw[key.strip()] = float(value)
        required = {"disk": ("r",), "annulus": ("r1", "r2"), "sector": ("t0", "t1"), "plane": ()}
        optional = {"sector": ("r",), "plane": ("r",)}
        if kind not in required:
            raise ValueError(f"unknown region kind {kind!r}")
        missing = [k for k in required[kind] if k not in kw]
        extra = sorted(set(kw) - set(required[kind]) - set(optional.get(kind, ())))
        if missing or extra:
            raise ValueError(f"region {kind!r}: missing {missing}, unexpected {extra}")
        if kind == "disk":
            return cls.disk(kw["r"])
        if kind == "annulus":
            return cls.annulus(kw["r1"], kw["r2"])
        if kind == "sector":
            return cls.sector(kw["t0"], kw["t1"], kw.get("r"))
        return cls.plane(kw.get("r"))

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z)
        r = np.abs(z)
        inside = r >= self.r_inner
        if self.r_outer is not None:
            inside &= r <= self.r_outer
        if self.theta is not None:
            t0, _ = self.theta
            inside &= np.mod(np.angle(z) - t0, TWO_PI) <= self.theta[1] - t0
        return inside


def _gauss_panels(a: float, b: float, width: float, order: int):
    """Composite Gauss-Legendre nodes/weights on [a, b] with panels no wider than ``width``."""
    panels = max(1, math.ceil((b - a) / width))
    x, w = roots_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def region_nodes(region: Region, params, quad: QuadratureScheme | None = None):
    """Nodes z and weights w with sum w h(z) = (1/pi) int_region h d^2z.

    Bounded radial ranges use composite Gauss-Legendre in r (the integrand
    r^(m+n+1) e^{-r^2} is smooth there); unbounded ones fall back to the
    Gauss-Laguerre radial rule of ``quad``.  Full circles use ``quad.angular``
    uniform nodes, sectors composite Gauss-Legendre in the angle.
    """
    params = _as_params(params)
    dim = params.dim
    if quad is None:
        quad = QuadratureScheme.default(dim)

    if region.theta is None and region.r_outer is None:
        # whole plane: exactly the coherent-state product rule
        quad.require(0, dim)
        return quad.nodes()

    if region.theta is None:
        if dim - 1 >= quad.angular:
            raise QuadratureError(f"angular order {quad.angular} too small for D={dim}")
        ang = TWO_PI * np.arange(quad.angular) / quad.angular
        ang_w = np.full(quad.angular, TWO_PI / quad.angular)
    else:
        t0, t1 = region.theta
        # keep the phase change of e^{i(m-n)theta} per panel below ~2 rad
        ang, ang_w = _gauss_panels(t0, t1, min(math.pi / 8, 2.0 / dim), 16)

    if region.r_outer is None:
        if region.r_inner > 0:
            raise QuadratureError("unbounded regions must start at the origin")
        quad.require(0, dim)
        u, lw = roots_laguerre(quad.radial)
        rad = np.sqrt(u)
        # (1/pi) r dr dtheta = (1/2pi) du dtheta
        rad_w = lw * np.exp(u) / TWO_PI
    else:
        rad, w = _gauss_panels(region.r_inner, region.r_outer, 0.5, 20)
        rad_w = w * rad / math.pi

    z = (rad[:, None] * np.exp(1j * ang)[None, :]).ravel()
    weights = (rad_w[:, None] * ang_w[None, :]).ravel()
    return z, weights


def _evaluation_maps(z, dim: int) -> np.ndarray:
    """Rows E_z: psi -> psi(z) = <z|psi> in the number basis."""
    return np.conj(coherent_amplitudes(z, dim)).T


def localization_operator(region: Region, params, quad: QuadratureScheme | None = None) -> np.ndarray:
    """a_K(region) = (1/pi) int_region |z><z| d^2z = int E_z^* E_z dmu."""
    return prime_quantize(Symbol.const(1.0), params, quad, region=region)


def prime_quantize(f: Symbol, params, quad: QuadratureScheme | None = None,
                   region: Region | None = None) -> np.ndarray:
    """Q(f) = int f(z) E_z^* E_z dmu(z), optionally restricted to ``region``."""
    params = _as_params(params)
    if quad is None:
        quad = QuadratureScheme.default(params.dim)
    g = unit_symbol(f, params.hbar)
    if region is None or (region.kind == "plane" and region.r_outer is None):
        quad.require(g.degree, params.dim)
        region = Region.plane()
    # region geometry refers to the dimensionless label
    z, w = region_nodes(region, params, quad)
    e = _evaluation_maps(z, params.dim)
    # same association order as quantize_cs: (E^* diag(w f)) E
    return (adjoint(e) * (w * g(z))) @ e


def disk_diagonal(n: int, r: float) -> float:
    """<n|a_K(disk r)|n> = gamma_lower(n + 1, r^2) / n!."""
    return float(gammainc(n + 1, r * r))


# ---------------------------------------------------------------------------
# Dirac correspondence

def _residual_operator(f: Symbol, g: Symbol, hbar: float, params, quad):
    params = FockParams(_as_params(params).dim, hbar)
    qf = prime_quantize(f, params, quad)
    qg = prime_quantize(g, params, quad)
    qfg = prime_quantize(poisson_bracket(f, g), params, quad)
    block = params.dim - max(f.degree, g.degree)
    if block < 1:
        raise QuadratureError(f"cutoff D={params.dim} leaves no exact block for degrees "
                              f"{f.degree}, {g.degree}")
    return commutator(qf, qg) - 1j * hbar * qfg, block


def dirac_residual(f: Symbol, g: Symbol, hbar: float, params,
                   quad: QuadratureScheme | None = None) -> float:
    """Spectral norm of [Q(f), Q(g)] - i hbar Q({f, g}) on the block unaffected by truncation.

    Q(f) is banded with bandwidth deg f, so products of the truncated
    matrices are exact on rows/columns below D - max(deg f, deg g).
    """
    res, block = _residual_operator(f, g, hbar, params, quad)
    return float(np.linalg.norm(res[:block, :block], 2))


def dirac_residual_at(f: Symbol, g: Symbol, hbar: float, z: complex, params,
                      quad: QuadratureScheme | None = None) -> float:
    """|<z|R|z>| for the residual R at a fixed phase-space point z (physical units)."""
    res, _ = _residual_operator(f, g, hbar, params, quad)
    ket = coherent_amplitudes(z / math.sqrt(hbar), _as_params(params).dim)
    return float(abs(np.vdot(ket, res @ ket)))


def scaling_exponent(hbars, values):
    """Least-squares slope of log(values) against log(hbar), with its standard error."""
    x = np.log(np.asarray(hbars, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    coef, cov = np.polyfit(x, y, 1, cov=True) if len(x) > 2 else (np.polyfit(x, y, 1), None)
    err = float(np.sqrt(cov[0, 0])) if cov is not None else 0.0
    return float(coef[0]), err
