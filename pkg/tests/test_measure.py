import json

import numpy as np
import pytest

from csquant import cs, frame, measure
from csquant.fock import FockParams
from csquant.measure import Atom, MeasureError, OperatorValuedMeasure, ResolutionError
from csquant.quadrature import QuadratureScheme
from csquant.symbols import parse_symbol


@pytest.fixture
def sea_star():
    return measure.polygon_measure(frame.build_frame(5))


def test_polygon_measure_reduces_to_frame(sea_star):
    fr = frame.build_frame(5)
    f = np.array([0.3, -1.0, 2.0, 0.0, 5.5])
    assert np.array_equal(measure.quantize_general(f, sea_star), frame.quantize_finite(f, fr))
    by_label = {str(k): v for k, v in enumerate(f)}
    assert np.array_equal(measure.quantize_general(by_label, sea_star), frame.quantize_finite(f, fr))


def test_coherent_measure_reduces_to_cs():
    p = FockParams(10)
    quad = QuadratureScheme(8, 17)
    m = measure.coherent_measure(p, quad)
    f = parse_symbol("z^2*zbar + q - 3")
    got = measure.quantize_general(measure.point_values(f, m), m)
    assert np.abs(got - cs.quantize_cs(f, p, quad)).max() < 1e-10
    assert measure.check_resolution(m).passed


def test_save_load_roundtrip(tmp_path, sea_star):
    path = tmp_path / "m.json"
    measure.save_measure(sea_star, path)
    back = measure.load_measure(path)
    assert back.labels == sea_star.labels
    assert np.array_equal(back.stacked(), sea_star.stacked())
    assert back.flags() == sea_star.flags()


def test_coherent_labels_survive_json():
    m = measure.coherent_measure(FockParams(4), QuadratureScheme(3, 5))
    back = measure.measure_from_json(json.loads(json.dumps(measure.measure_to_json(m))))
    assert back.points is None
    f = parse_symbol("z*zbar")
    assert np.allclose(measure.point_values(f, back), measure.point_values(f, m), atol=1e-15)


def test_perturbed_measure_fails_resolution(sea_star):
    atoms = list(sea_star.atoms)
    atoms[2] = Atom(atoms[2].label, atoms[2].weight * 1.05, atoms[2].op)
    bad = OperatorValuedMeasure(atoms)
    report = measure.check_resolution(bad)
    assert not report.passed
    assert report.spectral > 1e-3
    assert "FAILED" in str(report)
    with pytest.raises(ResolutionError, match="override"):
        measure.quantize_general(np.ones(5), bad)
    forced = measure.quantize_general(np.ones(5), bad, override=True)
    assert not np.allclose(forced, np.eye(2))


def test_malformed_file_names_atom(tmp_path, sea_star):
    obj = measure.measure_to_json(sea_star)
    obj["atoms"][3]["op"]["re"] = [[1.0]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    with pytest.raises(MeasureError, match="atom 3") as info:
        measure.load_measure(path)
    assert info.value.atom == 3
    del obj["atoms"][1]["weight"]
    with pytest.raises(MeasureError, match="atom 1"):
        measure.measure_from_json(obj)
    path.write_text("{not json")
    with pytest.raises(MeasureError, match="invalid JSON"):
        measure.load_measure(path)


@pytest.mark.parametrize("op, weight, msg", [
    (np.array([[1, 1], [0, 0]]), 1.0, "not Hermitian"),
    (np.diag([1.0, -0.5]), 1.0, "not positive"),
    (np.eye(2) / 2, -1.0, "weight"),
    (np.eye(3), 1.0, "shape"),
])
def test_validation(op, weight, msg):
    atoms = [Atom("a", 1.0, np.eye(2) / 2), Atom("b", weight, op.astype(complex))]
    with pytest.raises(MeasureError, match=f"atom 1: .*{msg}"):
        OperatorValuedMeasure(atoms)


def test_unit_trace_flag():
    atoms = [Atom("0", 1.0, np.diag([1.0, 0.0])), Atom("1", 1.0, np.diag([0.0, 0.5]))]
    OperatorValuedMeasure(atoms)
    with pytest.raises(MeasureError, match="trace"):
        OperatorValuedMeasure(atoms, require_unit_trace=True)


def test_signed_measure_allowed_with_flag():
    # M(x) need not be positive once the flag is off; resolution still holds
    atoms = [Atom("0", 1.0, np.diag([1.5, 1.0]).astype(complex)),
             Atom("1", 1.0, np.diag([-0.5, 0.0]).astype(complex))]
    with pytest.raises(MeasureError):
        OperatorValuedMeasure(atoms)
    m = OperatorValuedMeasure(atoms, require_positive=False)
    assert measure.check_resolution(m).passed
    assert np.allclose(measure.quantize_general([2.0, 2.0], m), 2 * np.eye(2))


def test_positive_symbol_positive_operator(sea_star):
    a = measure.quantize_general([0.0, 1.0, 2.0, 0.5, 3.0], sea_star)
    assert np.linalg.eigvalsh(a).min() >= -1e-15


def test_sesquilinear_form(sea_star):
    rng = np.random.default_rng(1)
    psi1 = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi2 = rng.normal(size=2) + 1j * rng.normal(size=2)
    f = rng.normal(size=5) + 1j * rng.normal(size=5)
    want = np.vdot(psi1, measure.quantize_general(f, sea_star) @ psi2)
    assert measure.sesquilinear_form(psi1, f, psi2, sea_star) == pytest.approx(want, abs=1e-14)
    with pytest.raises(MeasureError):
        measure.sesquilinear_form(psi1, f, np.ones(3), sea_star)


def test_value_alignment_errors(sea_star):
    with pytest.raises(MeasureError, match="5 atoms"):
        measure.quantize_general([1.0, 2.0], sea_star)
    with pytest.raises(MeasureError, match="label"):
        measure.quantize_general({"0": 1.0}, sea_star)
