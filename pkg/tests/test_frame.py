import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from csquant import frame


@pytest.mark.parametrize("n", [3, 4, 5, 7, 16, 64])
def test_resolution_of_identity(n):
    fr = frame.build_frame(n)
    assert fr.resolution_deviation() <= 1e-14
    assert fr.weight == 2 / n


@pytest.mark.parametrize("n", [0, 1, 2])
def test_small_frames_rejected(n):
    with pytest.raises(ValueError, match="N >= 3"):
        frame.build_frame(n)


def test_two_arm_sum_is_not_identity():
    # why N = 2 fails: the two projectors both sit on the x axis
    v = np.array([frame.unit_vector(0), frame.unit_vector(math.pi)])
    total = np.einsum("ni,nj->ij", v, v)
    assert np.allclose(total, [[2, 0], [0, 0]])


def test_projectors_are_rotated_vacuum():
    fr = frame.build_frame(5)
    base = np.diag([1.0, 0.0])
    for k, t in enumerate(fr.angles):
        r = frame.rotation(t)
        assert np.allclose(fr.projector(k), r @ base @ r.T, atol=1e-15)


def test_sea_star_overlaps():
    fr = frame.build_frame(5)
    assert frame.overlap_prob(0, 1, fr) == pytest.approx(0.0954915028125263, abs=1e-15)
    assert frame.overlap_prob(0, 2, fr) == pytest.approx(0.6545084971874737, abs=1e-15)
    assert frame.overlap_prob(3, 3, fr) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(IndexError):
        frame.overlap_prob(0, 5, fr)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_overlap_symmetry_and_normalization(n):
    fr = frame.build_frame(n)
    mat = np.array([[frame.overlap_prob(a, b, fr) for b in range(n)] for a in range(n)])
    assert np.allclose(mat, mat.T, atol=1e-15)
    # (2/N) sum_n cos^2 = 1: the lower symbol of the identity
    assert np.allclose(fr.weight * mat.sum(axis=1), 1.0, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(3, 20), data=st.data())
def test_lower_symbol_is_cos2_convolution(n, data):
    fr = frame.build_frame(n)
    f = np.array(data.draw(st.lists(st.floats(-5, 5), min_size=n, max_size=n)))
    a = frame.quantize_finite(f, fr)
    assert np.allclose(frame.lower_symbol_finite(a, fr), frame.cos2_convolution(f, fr), atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(3, 12), shift=st.integers(0, 11), data=st.data())
def test_rotation_covariance(n, shift, data):
    fr = frame.build_frame(n)
    f = np.array(data.draw(st.lists(st.floats(-5, 5), min_size=n, max_size=n)))
    r = frame.rotation(2 * math.pi * shift / n)
    rotated = frame.quantize_finite(np.roll(f, shift), fr)
    assert np.allclose(rotated, r @ frame.quantize_finite(f, fr) @ r.T, atol=1e-13)


def test_quantization_properties():
    fr = frame.build_frame(5)
    assert np.allclose(frame.quantize_finite(np.ones(5), fr), np.eye(2), atol=1e-15)
    a = frame.quantize_finite(np.arange(5.0), fr)
    assert np.allclose(a, a.conj().T)
    pos = frame.quantize_finite(np.array([0.1, 2, 0, 3, 1]), fr)
    assert np.linalg.eigvalsh(pos).min() >= -1e-15
    # quantized symbols do not commute in general
    b = frame.quantize_finite(np.array([1.0, 0, 0, 0, 0]), fr)
    assert np.abs(a @ b - b @ a).max() > 1e-3
    with pytest.raises(ValueError):
        frame.quantize_finite(np.ones(4), fr)


def test_diagonal_quantization_is_commutative():
    a = frame.diagonal_quantization(1.0, 2.0)
    b = frame.diagonal_quantization(-3.0, 0.5j)
    assert np.array_equal(a @ b, b @ a)
    assert np.array_equal(a, np.diag([1.0, 2.0]))
