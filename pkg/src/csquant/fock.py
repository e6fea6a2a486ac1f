"""
Truncated Fock-space linear algebra.

Operators are plain ``numpy`` complex arrays of shape ``(D, D)`` and kets are
complex vectors of length ``D`` in the number basis |0>, ..., |D-1>.
Identities that only hold in infinite dimension are checked on the interior
block (indices 0..D-2), and every coherent-state construction can report
its truncation tail bound.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammainc, gammaln


class TruncationWarning(UserWarning):
    """The Fock cutoff is too small for the requested coherent-state label."""


class NotHermitianError(ValueError):
    pass


# tail bound above which coherent-state helpers warn
DEFAULT_TAIL_TOL = 1e-10


@dataclass(frozen=True)
class FockParams:
    dim: int
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"Fock cutoff must be an integer >= 2, got {self.dim!r}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")


@dataclass(frozen=True)
class OscillatorParams:
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and self.omega > 0):
            raise ValueError("mass and frequency must both be positive")


def _as_params(params) -> FockParams:
    if isinstance(params, FockParams):
        return params
    return FockParams(int(params))


# ---------------------------------------------------------------------------
# Matrix helpers

def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def projector(ket: np.ndarray) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, np.conj(ket))


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and np.max(np.abs(a - adjoint(a)), initial=0.0) <= tol


def interior(a: np.ndarray, size: int) -> np.ndarray:
    """Leading ``size x size`` block of ``a``."""
    return np.asarray(a)[:size, :size]


def operator_to_json(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"dim": int(a.shape[0]), "re": a.real.tolist(), "im": a.imag.tolist()}


def operator_from_json(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed operator JSON: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(f"operator JSON: expected {dim}x{dim} 're' and 'im' arrays, "
                         f"got {re.shape} and {im.shape}")
    return re + 1j * im


# ---------------------------------------------------------------------------
# Ladder and canonical operators

def annihilation(params) -> np.ndarray:
    d = _as_params(params).dim
    return np.diag(np.sqrt(np.arange(1, d)), k=1).astype(complex)


def creation(params) -> np.ndarray:
    return adjoint(annihilation(params))


def number_op(params) -> np.ndarray:
    d = _as_params(params).dim
    return np.diag(np.arange(d)).astype(complex)


def position_op(params) -> np.ndarray:
    params = _as_params(params)
    a = annihilation(params)
    return np.sqrt(params.hbar / 2) * (a + adjoint(a))


def momentum_op(params) -> np.ndarray:
    params = _as_params(params)
    a = annihilation(params)
    return -1j * np.sqrt(params.hbar / 2) * (a - adjoint(a))


# ---------------------------------------------------------------------------
# Coherent states

def coherent_tail(z: complex, dim: int) -> float:
    """Probability mass e^{-|z|^2} sum_{n>=dim} |z|^{2n}/n! lost by truncation."""
    return float(gammainc(dim, abs(z) ** 2)) if z != 0 else 0.0


def coherent_amplitudes(z, dim: int) -> np.ndarray:
    """Amplitudes e^{-|z|^2/2} z^n / sqrt(n!) for n < dim.

    ``z`` may be an array; the result then has shape ``(dim,) + z.shape``.
    """
    z = np.asarray(z, dtype=complex)
    n = np.arange(dim).reshape((dim,) + (1,) * z.ndim)
    r = np.abs(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_mod = n * np.log(r) - r ** 2 / 2 - 0.5 * gammaln(n + 1)
    mod = np.exp(log_mod)
    # 0**0 = 1 for the vacuum component at z = 0
    mod = np.where((n == 0) & (r == 0), 1.0, np.nan_to_num(mod, nan=0.0))
    return mod * np.exp(1j * n * np.angle(z))


def check_truncation(z: complex, dim: int, tol: float = DEFAULT_TAIL_TOL) -> float:
    tail = coherent_tail(z, dim)
    if tail > tol:
        warnings.warn(
            f"coherent state |z|={abs(z):.3g} is poorly represented with cutoff D={dim} "
            f"(tail bound {tail:.2e} > {tol:.0e})",
            TruncationWarning, stacklevel=3)
    return tail


def coherent_ket(z: complex, params, tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """Truncated canonical coherent state |z>, not renormalized."""
    params = _as_params(params)
    check_truncation(z, params.dim, tol)
    return coherent_amplitudes(complex(z), params.dim)


def fock_ket(n: int, params) -> np.ndarray:
    d = _as_params(params).dim
    if not 0 <= n < d:
        raise ValueError(f"number state |{n}> outside cutoff D={d}")
    ket = np.zeros(d, dtype=complex)
    ket[n] = 1.0
    return ket


def displacement(z: complex, params) -> np.ndarray:
    """exp(z a^dag - conj(z) a) on the truncated space.

    The truncated generator is anti-Hermitian, so the result is unitary to
    rounding; its action on |0> deviates from the exact coherent state by the
    truncation tail.
    """
    params = _as_params(params)
    check_truncation(z, params.dim)
    a = annihilation(params)
    return expm(z * adjoint(a) - np.conj(z) * a)


def expectation(op: np.ndarray, ket: np.ndarray) -> complex:
    ket = np.asarray(ket, dtype=complex)
    return complex(np.vdot(ket, op @ ket) / np.vdot(ket, ket))


def heisenberg_saturation(z: complex, params):
    """Return (dQ, dP, dQ*dP) in the coherent state |z>; the product is hbar/2."""
    params = _as_params(params)
    ket = coherent_ket(z, params)
    q, p = position_op(params), momentum_op(params)
    dq = np.sqrt(expectation(q @ q, ket).real - expectation(q, ket).real ** 2)
    dp = np.sqrt(expectation(p @ p, ket).real - expectation(p, ket).real ** 2)
    return float(dq), float(dp), float(dq * dp)


def eigen_spectrum(a: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dev = np.max(np.abs(a - adjoint(a)), initial=0.0)
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max |A - A^dag| = {dev:.2e})")
    return np.linalg.eigvalsh((a + adjoint(a)) / 2)


def evolve_expectation(z: complex, t_grid, osc: OscillatorParams, params) -> np.ndarray:
    """<z| e^{iHt/hbar} Q e^{-iHt/hbar} |z> for the harmonic oscillator.

    Q is the physical position (hbar / 2 m omega)^{1/2} (a + a^dag) and
    H = hbar omega (a^dag a + 1/2), which is diagonal in the number basis.
    """
    params = _as_params(params)
    t = np.asarray(t_grid, dtype=float)
    ket = coherent_ket(z, params)
    q0 = np.sqrt(params.hbar / (2 * osc.mass * osc.omega))
    a = annihilation(params)
    q = q0 * (a + adjoint(a))
    n = np.arange(params.dim)
    # evolved kets, one column per time
    phases = np.exp(-1j * osc.omega * np.outer(n + 0.5, t))
    psi_t = ket[:, None] * phases
    return np.einsum("it,ij,jt->t", np.conj(psi_t), q, psi_t).real
