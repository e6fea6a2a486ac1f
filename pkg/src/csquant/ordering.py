"""
Operator orderings for classical monomials q^m p^n.

Products of Q and P are formed on a space padded by m + n levels and then
cut back to D x D, so every ordered product equals the compression of the
infinite-dimensional operator (no truncation corner defects).
"""

from __future__ import annotations

import itertools
from enum import Enum
from functools import reduce

import numpy as np

from .fock import (FockParams, _as_params, adjoint, annihilation, eigen_spectrum,
                   momentum_op, position_op)
from .quadrature import QuadratureScheme
from .symbols import Symbol


class OrderingScheme(str, Enum):
    WEYL = "weyl_symmetric"
    SPLIT = "split_symmetric"
    NESTED = "nested_symmetric"
    ANTINORMAL = "antinormal"


class OrderingError(ValueError):
    pass


def _padded(params: FockParams, pad: int) -> FockParams:
    return FockParams(params.dim + pad, params.hbar)


def _product(ops, dim: int) -> np.ndarray:
    return reduce(np.matmul, ops, np.eye(dim, dtype=complex))


def weyl_words(m: int, n: int):
    """All distinct interleavings of m Q's and n P's, as tuples of 'Q'/'P'."""
    for q_pos in itertools.combinations(range(m + n), m):
        word = ["P"] * (m + n)
        for i in q_pos:
            word[i] = "Q"
        yield tuple(word)


def order_monomial(m: int, n: int, scheme, params) -> np.ndarray:
    """Operator for q^m p^n under ``scheme``."""
    params = _as_params(params)
    scheme = OrderingScheme(scheme)
    if m < 0 or n < 0:
        raise OrderingError(f"monomial powers must be nonnegative, got ({m}, {n})")
    if params.dim - (m + n) < 2:
        raise OrderingError(f"cutoff D={params.dim} leaves an interior block smaller than 2 "
                            f"for q^{m} p^{n}")
    d = params.dim
    big = _padded(params, m + n)
    D = big.dim
    Q, P = position_op(big), momentum_op(big)
    mats = {"Q": Q, "P": P}

    if scheme is OrderingScheme.ANTINORMAL:
        out = _antinormal(Symbol.from_qp({(m, n): 1.0}), big)
    elif m == 0 or n == 0:
        out = _product([Q] * m + [P] * n, D)
    elif scheme is OrderingScheme.WEYL:
        words = list(weyl_words(m, n))
        out = sum(_product([mats[c] for c in w], D) for w in words) / len(words)
    elif scheme is OrderingScheme.SPLIT:
        qm = np.linalg.matrix_power(Q, m)
        pn = np.linalg.matrix_power(P, n)
        out = (qm @ pn + pn @ qm) / 2
    else:
        if m != 1:
            raise OrderingError("nested_symmetric ordering is only defined for q p^n monomials")
        out = sum(np.linalg.matrix_power(P, k) @ Q @ np.linalg.matrix_power(P, n - k)
                  for k in range(n + 1)) / (n + 1)
    return out[:d, :d]


def _antinormal(f: Symbol, params: FockParams) -> np.ndarray:
    """Substitute z -> sqrt(hbar) a, zbar -> sqrt(hbar) a^dag with every a to the left."""
    a = annihilation(params)
    ad = adjoint(a)
    out = np.zeros((params.dim, params.dim), dtype=complex)
    for (j, k), c in f.terms.items():
        out += (c * params.hbar ** ((j + k) / 2)
                * np.linalg.matrix_power(a, j) @ np.linalg.matrix_power(ad, k))
    return out


def quantize_polynomial(f: Symbol, scheme, params) -> np.ndarray:
    """Termwise ordering of sum C_mn q^m p^n."""
    params = _as_params(params)
    scheme = OrderingScheme(scheme)
    if scheme is OrderingScheme.ANTINORMAL:
        pad = f.degree
        if params.dim - pad < 2:
            raise OrderingError(f"cutoff D={params.dim} too small for degree {pad}")
        return _antinormal(f, _padded(params, pad))[:params.dim, :params.dim]
    out = np.zeros((params.dim, params.dim), dtype=complex)
    for (m, n), c in f.to_qp().items():
        out += c * order_monomial(m, n, scheme, params)
    return out


def interior_size(f: Symbol, params) -> int:
    return _as_params(params).dim - f.degree


def compare_orderings(f: Symbol, params, quad: QuadratureScheme | None = None,
                      schemes=None) -> dict:
    """Pairwise spectral-norm differences and spectra of f under each scheme and the CS map.

    Comparisons use the leading D - deg f block. nested_symmetric is skipped
    when f has a q^m p^n term with m > 1 and n > 0.
    """
    from .cs import quantize_cs

    params = _as_params(params)
    if schemes is None:
        schemes = list(OrderingScheme)
    schemes = [OrderingScheme(s) for s in schemes]
    block = interior_size(f, params)
    if block < 2:
        raise OrderingError(f"cutoff D={params.dim} too small for degree {f.degree}")

    ops = {}
    skipped = {}
    for s in schemes:
        try:
            ops[s.value] = quantize_polynomial(f, s, params)
        except OrderingError as exc:
            skipped[s.value] = str(exc)
    ops["coherent_state"] = quantize_cs(f, params, quad)

    names = list(ops)
    diffs = {}
    for a in names:
        diffs[a] = {}
        for b in names:
            d = ops[a][:block, :block] - ops[b][:block, :block]
            diffs[a][b] = float(np.linalg.norm(d, 2))
    # symmetrize exactly: norm(A - B) and norm(B - A) agree only to rounding
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            diffs[b][a] = diffs[a][b]

    spectra = {}
    for name, op in ops.items():
        blk = op[:block, :block]
        try:
            spectra[name] = eigen_spectrum(blk, tol=1e-8 * max(1.0, np.abs(blk).max())).tolist()
        except ValueError:
            spectra[name] = None
    return {
        "symbol": str(f),
        "dim": params.dim,
        "hbar": params.hbar,
        "block": block,
        "schemes": names,
        "skipped": skipped,
        "differences": diffs,
        "spectra": spectra,
    }
