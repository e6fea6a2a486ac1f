"""
Regular N-fold frames in the Euclidean plane and their quantization of
functions on N points (the five-armed "sea star" is N = 5).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PolygonFrame:
    n: int
    vectors: np.ndarray = field(repr=False, compare=False)

    @property
    def weight(self) -> float:
        return 2.0 / self.n

    @property
    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n) / self.n

    def projector(self, k: int) -> np.ndarray:
        v = self.vectors[k % self.n]
        return np.outer(v, v)

    def projectors(self) -> np.ndarray:
        return np.einsum("ni,nj->nij", self.vectors, self.vectors)

    def resolution(self) -> np.ndarray:
        return self.weight * self.projectors().sum(axis=0)

    def resolution_deviation(self) -> float:
        return float(np.max(np.abs(self.resolution() - np.eye(2))))


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def unit_vector(theta: float) -> np.ndarray:
    return np.array([np.cos(theta), np.sin(theta)])


def build_frame(n: int) -> PolygonFrame:
    """Unit vectors at angles 2 pi k / n with uniform weight 2 / n.

    For n <= 2 the weighted projectors sum to 2|0><0| (or the single
    projector 2|0><0| for n = 1), not the identity, so those are rejected.
    """
    if int(n) != n:
        raise ValueError(f"frame order must be an integer, got {n!r}")
    n = int(n)
    if n < 3:
        raise ValueError(
            f"an N-fold polygon frame needs N >= 3 (got N={n}): for N <= 2 the sum "
            "of cos(4 pi k / N) over the arms does not vanish, so (2/N) sum P_k != I")
    angles = 2 * np.pi * np.arange(n) / n
    vectors = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return PolygonFrame(n, vectors)


def _check_symbol(f, frame: PolygonFrame) -> np.ndarray:
    f = np.asarray(f)
    if f.shape != (frame.n,):
        raise ValueError(f"symbol has {f.size} values but the frame has {frame.n} arms")
    return f


def quantize_finite(f, frame: PolygonFrame) -> np.ndarray:
    """A_f = (2/N) sum_n f(n) |theta_n><theta_n|."""
    f = _check_symbol(f, frame)
    return np.einsum("n,nij->ij", frame.weight * f.astype(complex), frame.projectors().astype(complex))


def lower_symbol_finite(a: np.ndarray, frame: PolygonFrame) -> np.ndarray:
    """n -> <theta_n| A |theta_n>."""
    v = frame.vectors
    out = np.einsum("ni,ij,nj->n", v, np.asarray(a), v)
    if np.iscomplexobj(out) and not np.any(out.imag):
        out = out.real
    return out


def cos2_convolution(f, frame: PolygonFrame) -> np.ndarray:
    """(2/N) sum_m f(m) cos^2(2 pi (n - m) / N), the closed form of the lower symbol of A_f."""
    f = _check_symbol(f, frame)
    idx = np.arange(frame.n)
    kernel = np.cos(2 * np.pi * (idx[:, None] - idx[None, :]) / frame.n) ** 2
    return frame.weight * kernel @ f


def overlap_prob(n0: int, n: int, frame: PolygonFrame) -> float:
    """tr(P_{n0} P_n), the probability of arm n given arm n0."""
    for k in (n0, n):
        if not 0 <= k < frame.n:
            raise IndexError(f"arm index {k} outside 0..{frame.n - 1}")
    return float(np.trace(frame.projector(n0) @ frame.projector(n)))


def diagonal_quantization(f0: complex, f1: complex) -> np.ndarray:
    """Quantization through the orthonormal basis |0>, |pi/2>: commutative."""
    return np.diag(np.array([f0, f1], dtype=complex))
