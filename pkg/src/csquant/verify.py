"""
Verification suites run by ``csquant verify``.

Each suite returns a ``Check``; inputs come from fixed seeds so that the
report is byte-for-byte reproducible.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc

from . import cs, fock, frame, measure, ordering, prime
from .fock import FockParams, OscillatorParams
from .quadrature import QuadratureScheme
from .symbols import Symbol, parse_symbol

SEED = 20190708


@dataclass(frozen=True)
class Check:
    """Named measurements ``(label, value, tol)`` plus boolean conditions ``(label, ok)``."""
    name: str
    measured: tuple
    conditions: tuple = ()

    @property
    def passed(self) -> bool:
        return all(v <= tol for _, v, tol in self.measured) and all(ok for _, ok in self.conditions)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{label} {v:.3e} (tol {tol:.0e})" for label, v, tol in self.measured]
        parts += [f"{label}: {'yes' if ok else 'NO'}" for label, ok in self.conditions]
        return f"{status}  {self.name:<26} " + "; ".join(parts)


def _max(a) -> float:
    return float(np.max(np.abs(a)))


def frame_resolution() -> Check:
    worst = max(frame.build_frame(n).resolution_deviation() for n in range(3, 65))
    try:
        frame.build_frame(2)
        rejected = False
    except ValueError:
        rejected = True
    return Check("frame-resolution", (("N=3..64 deviation", worst, 1e-14),),
                 (("N=2 rejected", rejected),))


def lower_symbol_convolution() -> Check:
    rng = np.random.default_rng(SEED)
    fr = frame.build_frame(5)
    idx = np.arange(5)
    worst = 0.0
    for _ in range(20):
        f = rng.normal(size=5)
        sandwich = frame.lower_symbol_finite(frame.quantize_finite(f, fr), fr)
        closed = [0.4 * sum(f[m] * math.cos(2 * (n - m) * math.pi / 5) ** 2 for m in idx) for n in idx]
        worst = max(worst, _max(sandwich - np.array(closed)))
    return Check("lower-symbol-convolution", (("N=5, 20 random f", worst, 1e-14),))


def overlap_law() -> Check:
    fr = frame.build_frame(5)
    worst = max(abs(frame.overlap_prob(a, b, fr) - math.cos(2 * math.pi * (a - b) / 5) ** 2)
                for a in range(5) for b in range(5))
    adjacent = frame.overlap_prob(0, 1, fr)
    worst = max(worst, abs(adjacent - 0.0954915028125263))
    return Check("overlap-law", (("all pairs incl. adjacent 0.0954915", worst, 1e-14),))


def cs_unit() -> Check:
    a1 = cs.quantize_cs(Symbol.const(1), FockParams(32))
    return Check("cs-unit", (("D=32", _max(a1 - np.eye(32)), 1e-12),))


def antinormal_signature() -> Check:
    p = FockParams(32)
    a = fock.annihilation(p)
    ad = fock.creation(p)
    worst = 0.0
    for k in range(5):
        for j in range(5):
            got = cs.quantize_cs(Symbol.monomial(k, j), p)
            want = np.linalg.matrix_power(a, k) @ np.linalg.matrix_power(ad, j)
            b = p.dim - max(j, k)
            # scaled by the block's largest entry (up to ~1.3e6 for j = k = 4)
            worst = max(worst, _max(got[:b, :b] - want[:b, :b]) / max(1.0, _max(want[:b, :b])))
    diag = _max(cs.quantize_cs(parse_symbol("z*zbar"), p) - np.diag(np.arange(1, 33)))
    return Check("antinormal-signature", (("j,k<=4 (scaled)", worst, 1e-10),
                                          ("|z|^2 vs diag(n+1)", diag, 1e-10)))


def canonical_pair() -> Check:
    worst = 0.0
    for hbar in (1.0, 0.5):
        p = FockParams(32, hbar)
        c = fock.commutator(cs.quantize_cs(Symbol.q(), p), cs.quantize_cs(Symbol.p(), p))
        worst = max(worst, _max((c - 1j * hbar * np.eye(32))[:31, :31]))
    return Check("canonical-pair", (("hbar in {1, 0.5}", worst, 1e-10),))


def berezin_shift() -> Check:
    p = FockParams(64)
    f = parse_symbol("z*zbar")
    a = cs.quantize_cs(f, p)
    rng = np.random.default_rng(SEED)
    pts = 2 * np.sqrt(rng.uniform(size=50)) * np.exp(2j * np.pi * rng.uniform(size=50))
    shift = max(abs(cs.lower_symbol(a, z, p) - (abs(z) ** 2 + 1)) for z in pts)
    z0 = 1.0 + 1.0j
    hbars = [1.0, 0.5, 0.25]
    errs = cs.semiclassical_scan(f, z0, hbars, p)
    rel = max(abs(e - h / abs(z0) ** 2) / (h / abs(z0) ** 2) for e, h in zip(errs, hbars))
    return Check("berezin-shift", (("lower symbol shift", shift, 1e-8),
                                   ("semiclassical vs hbar/|z|^2", rel, 1e-2)))


def trajectory() -> Check:
    osc = OscillatorParams(1.0, 1.0)
    dev = cs.trajectory_check(1.0, osc, FockParams(48), cs.default_time_grid(osc, 100))
    return Check("trajectory", (("z=1, D=48, 100 points", dev, 1e-8),))


def heisenberg() -> Check:
    rng = np.random.default_rng(SEED)
    p = FockParams(64)
    zs = 2 * np.sqrt(rng.uniform(size=10)) * np.exp(2j * np.pi * rng.uniform(size=10))
    worst = max(abs(fock.heisenberg_saturation(z, p)[2] - 0.5) for z in zs)
    return Check("heisenberg", (("10 random |z|<=2", worst, 1e-8),))


def random_symbol(rng, degree: int) -> Symbol:
    return Symbol({(j, k): complex(rng.normal(), rng.normal())
                   for j in range(degree + 1) for k in range(degree + 1 - j)})


def prime_unification() -> Check:
    rng = np.random.default_rng(SEED)
    p = FockParams(32)
    worst = 0.0
    for _ in range(20):
        f = random_symbol(rng, int(rng.integers(0, 5)))
        worst = max(worst, _max(prime.prime_quantize(f, p) - cs.quantize_cs(f, p)))
    loc = 0.0
    for r in (0.5, 1.0, 2.0):
        a = prime.localization_operator(prime.Region.disk(r), p)
        loc = max(loc, max(abs(a[n, n] - gammainc(n + 1, r * r)) for n in range(9)))
    return Check("prime-unification", (("prime vs cs", worst, 1e-12),
                                       ("disk diagonal vs gamma", loc, 1e-10)))


def dirac() -> Check:
    q, p_ = Symbol.q(), Symbol.p()
    p = FockParams(32)
    exact = max(prime.dirac_residual(q, p_, 1.0, p), prime.dirac_residual(q ** 2, p_ ** 2, 1.0, p))
    hbars = [1.0, 0.5, 0.25]
    res = [prime.dirac_residual(q ** 3, p_ ** 3, h, p) for h in hbars]
    slope, err = prime.scaling_exponent(hbars, res)
    return Check("dirac", (("(q,p) and (q^2,p^2)", exact, 1e-10),
                           ("(q^3,p^3) fit error", err, 0.1)),
                 ((f"(q^3,p^3) exponent {slope:.3f} >= 2", slope >= 2 - err),))


def ordering_equivalence() -> Check:
    p = FockParams(24)
    big = FockParams(24 + 8)
    Q, P = fock.position_op(big), fock.momentum_op(big)
    b = 24 - 3
    pqp = (P @ Q @ P)[:b, :b]
    half = ((Q @ P @ P + P @ P @ Q) / 2)[:b, :b]
    quarter = ((Q @ P @ P + 2 * P @ Q @ P + P @ P @ Q) / 4)[:b, :b]
    weyl = ordering.order_monomial(1, 2, "weyl_symmetric", p)[:b, :b]
    sym = max(_max(x - pqp) for x in (half, quarter, weyl))
    f = parse_symbol("q*p^2")
    anti = _max((ordering.quantize_polynomial(f, "antinormal", p) - cs.quantize_cs(f, p))[:b, :b])
    return Check("ordering-equivalence", (("symmetric forms vs PQP", sym, 1e-12),
                                          ("antinormal vs cs", anti, 1e-10)))


def general_reductions() -> Check:
    fr = frame.build_frame(5)
    pm = measure.measure_from_json(json.loads(json.dumps(measure.measure_to_json(
        measure.polygon_measure(fr)))))
    rng = np.random.default_rng(SEED)
    f = rng.normal(size=5)
    finite = _max(measure.quantize_general(f, pm) - frame.quantize_finite(f, fr))
    p = FockParams(12)
    quad = QuadratureScheme(10, 21)
    cm = measure.measure_from_json(json.loads(json.dumps(measure.measure_to_json(
        measure.coherent_measure(p, quad)))))
    g = parse_symbol("q*p^2 + 2*z*zbar - 1")
    csdev = _max(measure.quantize_general(measure.point_values(g, cm), cm) - cs.quantize_cs(g, p, quad))
    r1, r2 = measure.check_resolution(pm), measure.check_resolution(cm)
    bad = measure.OperatorValuedMeasure(
        [measure.Atom(a.label, a.weight * (1.01 if i == 0 else 1.0), a.op) for i, a in enumerate(pm.atoms)],
        require_unit_trace=True)
    r3 = measure.check_resolution(bad)
    return Check("general-reductions", (("general vs cs", csdev, 1e-10),),
                 (("general == finite exactly", finite == 0.0),
                  ("resolution passes on both", r1.passed and r2.passed),
                  (f"perturbed rejected (deviation {r3.spectral:.2e})", not r3.passed)))


SUITES = [
    frame_resolution, lower_symbol_convolution, overlap_law, cs_unit, antinormal_signature,
    canonical_pair, berezin_shift, trajectory, heisenberg, prime_unification, dirac,
    ordering_equivalence, general_reductions,
]


def suite_names() -> list:
    return [suite.__name__.replace("_", "-") for suite in SUITES]


def run_all(names=None) -> list:
    checks = []
    with warnings.catch_warnings():
        warnings.simplefilter("error", fock.TruncationWarning)
        for suite, name in zip(SUITES, suite_names()):
            if names and name not in names:
                continue
            checks.append(suite())
    return checks


def report(checks) -> str:
    lines = [c.line() for c in checks]
    passed = sum(c.passed for c in checks)
    lines.append(f"{passed}/{len(checks)} suites passed")
    return "\n".join(lines) + "\n"
