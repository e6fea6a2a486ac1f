"""
Coherent-state (anti-Wick, Berezin-Klauder-Toeplitz) quantization

    A_f = (1/pi) int f(z, zbar) |z><z| d^2z

on the truncated Fock space, evaluated with an exact product quadrature.

Phase-space points carry physical units: with ``FockParams.hbar`` the
coherent state attached to the point z is |z / sqrt(hbar)>, so A_q is the
position operator sqrt(hbar/2)(a + a^dag) and [A_q, A_p] = i hbar.
"""

from __future__ import annotations

from collections import namedtuple
from functools import lru_cache

import numpy as np

from .fock import (FockParams, OscillatorParams, _as_params, check_truncation,
                   coherent_amplitudes, coherent_ket, evolve_expectation)
from .quadrature import QuadratureScheme
from .symbols import Symbol, scale_hbar


def unit_symbol(f: Symbol, hbar: float) -> Symbol:
    """f(sqrt(hbar) w): the symbol expressed in the dimensionless label w."""
    return f if hbar == 1 else scale_hbar(f, 1 / hbar)


@lru_cache(maxsize=4)
def _node_kets(radial: int, angular: int, dim: int):
    z, w = QuadratureScheme(radial, angular).nodes()
    kets = coherent_amplitudes(z, dim)
    kets.flags.writeable = False
    return z, w, kets


def _resolve(params, quad):
    params = _as_params(params)
    if quad is None:
        quad = QuadratureScheme.default(params.dim)
    return params, quad


def quantize_cs(f: Symbol, params, quad: QuadratureScheme | None = None) -> np.ndarray:
    """Anti-Wick operator of the polynomial symbol ``f``.

    Raises ``QuadratureError`` when ``quad`` is not exact for deg f at this cutoff.
    """
    params, quad = _resolve(params, quad)
    g = unit_symbol(f, params.hbar)
    quad.require(g.degree, params.dim)
    z, w, kets = _node_kets(quad.radial, quad.angular, params.dim)
    # fixed node order; one matmul per call keeps results bit-reproducible
    return (kets * (w * g(z))) @ np.conj(kets).T


def lower_symbol(a: np.ndarray, z: complex, params) -> complex:
    """<z|A|z> (Berezin transform of f when A = A_f)."""
    params = _as_params(params)
    ket = coherent_ket(z / np.sqrt(params.hbar), params)
    return complex(np.vdot(ket, np.asarray(a) @ ket))


def weak_matrix_element(psi1, f: Symbol, psi2, params, quad: QuadratureScheme | None = None) -> complex:
    """(1/pi) int f(z) <psi1|z><z|psi2> d^2z, integrated directly over the nodes."""
    params, quad = _resolve(params, quad)
    psi1 = np.asarray(psi1, dtype=complex)
    psi2 = np.asarray(psi2, dtype=complex)
    if psi1.shape != (params.dim,) or psi2.shape != (params.dim,):
        raise ValueError(f"kets must have dimension {params.dim}")
    g = unit_symbol(f, params.hbar)
    quad.require(g.degree, params.dim)
    z, w, kets = _node_kets(quad.radial, quad.angular, params.dim)
    left = np.conj(psi1) @ kets          # <psi1|z>
    right = psi2 @ np.conj(kets)         # <z|psi2>
    return complex(np.sum(w * g(z) * left * right))


SemiclassicalPoint = namedtuple("SemiclassicalPoint", "hbar lower exact error relative tail")


def semiclassical_points(f: Symbol, z: complex, hbar_list, params,
                         quad: QuadratureScheme | None = None) -> list:
    """Compare <z|A_f|z> with f(z) as hbar shrinks, at a fixed phase-space point.

    The label seen by the oscillator is w = z / sqrt(hbar), so smaller hbar
    needs a larger cutoff; ``tail`` is the truncation bound at that label.
    Where f(z) = 0 the absolute error is reported as ``error``.
    """
    params = _as_params(params)
    out = []
    exact = f(z)
    for hbar in hbar_list:
        p = FockParams(params.dim, float(hbar))
        tail = check_truncation(z / np.sqrt(hbar), p.dim)
        lower = lower_symbol(quantize_cs(f, p, quad), z, p)
        abs_err = abs(lower - exact)
        relative = exact != 0
        out.append(SemiclassicalPoint(float(hbar), lower, exact,
                                      abs_err / abs(exact) if relative else abs_err,
                                      relative, tail))
    return out


def semiclassical_scan(f: Symbol, z: complex, hbar_list, params,
                       quad: QuadratureScheme | None = None) -> np.ndarray:
    return np.array([pt.error for pt in semiclassical_points(f, z, hbar_list, params, quad)])


def default_time_grid(osc: OscillatorParams, points: int = 100) -> np.ndarray:
    return np.linspace(0.0, 4 * np.pi / osc.omega, points)


def classical_trajectory(z: complex, t_grid, osc: OscillatorParams, hbar: float = 1.0) -> np.ndarray:
    """2 Q0 |z| cos(omega t - arg z) with Q0 = (hbar / 2 m omega)^{1/2}."""
    q0 = np.sqrt(hbar / (2 * osc.mass * osc.omega))
    return 2 * q0 * abs(z) * np.cos(osc.omega * np.asarray(t_grid) - np.angle(z))


def trajectory_check(z: complex, osc: OscillatorParams, params, t_grid=None) -> float:
    params = _as_params(params)
    if t_grid is None:
        t_grid = default_time_grid(osc)
    quantum = evolve_expectation(z, t_grid, osc, params)
    return float(np.max(np.abs(quantum - classical_trajectory(z, t_grid, osc, params.hbar))))


def lower_symbol_fit(a: np.ndarray, degree: int, params, radius: float = 2.0, grid: int = 9):
    """Least-squares fit of z -> <z|A|z> by a polynomial of total degree ``degree``.

    Returns the fitted ``Symbol`` and the max residual on the sample grid;
    a residual at rounding level shows the lower symbol is that polynomial.
    """
    params = _as_params(params)
    xs = np.linspace(-radius, radius, grid) / np.sqrt(2)
    pts = (xs[:, None] + 1j * xs[None, :]).ravel()
    pts = pts[np.abs(pts) <= radius]
    values = np.array([lower_symbol(a, z, params) for z in pts])
    keys = [(j, k) for j in range(degree + 1) for k in range(degree + 1 - j)]
    design = np.stack([pts ** j * np.conj(pts) ** k for j, k in keys], axis=1)
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    residual = float(np.max(np.abs(design @ coef - values)))
    return Symbol(dict(zip(keys, coef))), residual

