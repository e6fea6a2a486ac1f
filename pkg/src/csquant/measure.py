"""
Integral quantization against a finite operator-valued measure.

A measure is a list of atoms (label, weight, operator) standing for
M(x) dnu(x); continuous measures enter through quadrature atoms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .fock import _as_params, adjoint, coherent_amplitudes, operator_from_json, operator_to_json
from .frame import PolygonFrame
from .quadrature import QuadratureScheme


class MeasureError(ValueError):
    """Invalid measure; ``atom`` is the offending atom index when there is one."""

    def __init__(self, message: str, atom: int | None = None):
        self.atom = atom
        super().__init__(message if atom is None else f"atom {atom}: {message}")


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    label: str
    weight: float
    op: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ResolutionReport:
    max_entry: float
    spectral: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.spectral <= self.tol and self.max_entry <= self.tol

    def __str__(self):
        status = "ok" if self.passed else "FAILED"
        return (f"resolution {status}: max entry deviation {self.max_entry:.3e}, "
                f"spectral {self.spectral:.3e} (tol {self.tol:.0e})")


@dataclass
class OperatorValuedMeasure:
    atoms: list
    require_positive: bool = True
    require_unit_trace: bool = False
    tol: float = 1e-10
    points: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.validate()

    @property
    def dim(self) -> int:
        return self.atoms[0].op.shape[0]

    @property
    def weights(self) -> np.ndarray:
        return np.array([a.weight for a in self.atoms])

    @property
    def labels(self) -> list:
        return [a.label for a in self.atoms]

    def stacked(self) -> np.ndarray:
        return np.stack([a.op for a in self.atoms])

    def validate(self) -> None:
        if not self.atoms:
            raise MeasureError("measure has no atoms")
        dim = self.atoms[0].op.shape[0]
        for i, atom in enumerate(self.atoms):
            op = atom.op
            if op.ndim != 2 or op.shape != (dim, dim):
                raise MeasureError(f"operator shape {op.shape} does not match {dim}x{dim}", i)
            if not np.isfinite(atom.weight) or atom.weight <= 0:
                raise MeasureError(f"weight must be positive and finite, got {atom.weight!r}", i)
            if self.require_positive:
                herm = np.max(np.abs(op - adjoint(op)), initial=0.0)
                if herm > self.tol:
                    raise MeasureError(f"operator is not Hermitian (deviation {herm:.2e})", i)
                low = np.linalg.eigvalsh((op + adjoint(op)) / 2)[0]
                if low < -self.tol:
                    raise MeasureError(f"operator is not positive (min eigenvalue {low:.3e})", i)
            if self.require_unit_trace:
                tr = np.trace(op)
                if abs(tr - 1) > self.tol:
                    raise MeasureError(f"trace {tr.real:.12g} is not 1", i)

    def flags(self) -> dict:
        return {"require_positive": self.require_positive,
                "require_unit_trace": self.require_unit_trace}


def check_resolution(m: OperatorValuedMeasure, tol: float | None = None) -> ResolutionReport:
    total = np.einsum("a,aij->ij", m.weights, m.stacked())
    dev = total - np.eye(m.dim)
    return ResolutionReport(float(np.max(np.abs(dev))), float(np.linalg.norm(dev, 2)),
                            m.tol if tol is None else tol)


def _values(f, m: OperatorValuedMeasure) -> np.ndarray:
    if isinstance(f, dict):
        try:
            f = [f[label] for label in m.labels]
        except KeyError as exc:
            raise MeasureError(f"no symbol value for label {exc.args[0]!r}") from None
    f = np.asarray(f, dtype=complex)
    if f.shape != (len(m.atoms),):
        raise MeasureError(f"{f.size} symbol values for {len(m.atoms)} atoms")
    return f


def quantize_general(f, m: OperatorValuedMeasure, override: bool = False) -> np.ndarray:
    """A_f = sum_x w(x) f(x) M(x).

    ``f`` is a sequence aligned with the atoms or a mapping label -> value.
    Refuses measures that fail the resolution check unless ``override``.
    """
    if not override:
        report = check_resolution(m)
        if not report.passed:
            raise ResolutionError(f"{report}; pass override=True to quantize anyway")
    vals = _values(f, m)
    return np.einsum("a,aij->ij", m.weights * vals, m.stacked())


def sesquilinear_form(psi1, f, psi2, m: OperatorValuedMeasure) -> complex:
    """B_f(psi1, psi2) = sum_x w(x) f(x) <psi1|M(x)|psi2>, atom by atom."""
    psi1 = np.asarray(psi1, dtype=complex)
    psi2 = np.asarray(psi2, dtype=complex)
    if psi1.shape != (m.dim,) or psi2.shape != (m.dim,):
        raise MeasureError(f"kets must have dimension {m.dim}")
    vals = _values(f, m)
    total = 0j
    for atom, v in zip(m.atoms, vals):
        total += atom.weight * v * np.vdot(psi1, atom.op @ psi2)
    return complex(total)


# ---------------------------------------------------------------------------
# Standard measures

def polygon_measure(frame: PolygonFrame) -> OperatorValuedMeasure:
    atoms = [Atom(str(k), frame.weight, frame.projector(k).astype(complex))
             for k in range(frame.n)]
    return OperatorValuedMeasure(atoms, require_unit_trace=True)


def coherent_measure(params, quad: QuadratureScheme | None = None) -> OperatorValuedMeasure:
    """Quadrature atoms w_i |z_i><z_i| of the coherent-state resolution of unity.

    Labels are the node positions; the truncated projectors have trace
    slightly below 1 at the outer nodes, so the unit-trace flag stays off.
    """
    params = _as_params(params)
    if quad is None:
        quad = QuadratureScheme.default(params.dim)
    quad.require(0, params.dim)
    z, w = quad.nodes()
    kets = coherent_amplitudes(z, params.dim).T
    atoms = [Atom(repr(complex(zi)), float(wi), np.outer(k, np.conj(k)))
             for zi, wi, k in zip(z, w, kets)]
    return OperatorValuedMeasure(atoms, points=np.array(z))


def point_values(f, m: OperatorValuedMeasure) -> np.ndarray:
    """Evaluate a phase-space function at the atom positions of a coherent measure."""
    if m.points is None:
        points = np.array([complex(label) for label in m.labels])
    else:
        points = m.points
    return np.asarray(f(points), dtype=complex)


# ---------------------------------------------------------------------------
# JSON

def measure_to_json(m: OperatorValuedMeasure) -> dict:
    return {
        "dim": m.dim,
        "atoms": [{"label": a.label, "weight": a.weight, "op": operator_to_json(a.op)}
                  for a in m.atoms],
        "flags": m.flags(),
    }


def measure_from_json(obj) -> OperatorValuedMeasure:
    if not isinstance(obj, dict) or "atoms" not in obj or "dim" not in obj:
        raise MeasureError("measure JSON needs 'dim' and 'atoms'")
    dim = obj["dim"]
    flags = obj.get("flags", {})
    unknown = set(flags) - {"require_positive", "require_unit_trace"}
    if unknown:
        raise MeasureError(f"unknown flags {sorted(unknown)}")
    atoms = []
    for i, raw in enumerate(obj["atoms"]):
        try:
            label = raw["label"]
            weight = float(raw["weight"])
            op = operator_from_json(raw["op"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MeasureError(f"malformed atom ({exc})", i) from None
        if not isinstance(label, str):
            raise MeasureError(f"label must be a string, got {label!r}", i)
        if op.shape != (dim, dim):
            raise MeasureError(f"operator is {op.shape[0]}x{op.shape[0]}, measure dim is {dim}", i)
        atoms.append(Atom(label, weight, op))
    return OperatorValuedMeasure(atoms, **flags)


def save_measure(m: OperatorValuedMeasure, path) -> None:
    with open(path, "w") as fh:
        json.dump(measure_to_json(m), fh)


def load_measure(path) -> OperatorValuedMeasure:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MeasureError(f"invalid JSON: {exc}") from None
    return measure_from_json(obj)
