"""
Command-line front end.

    csquant cs --symbol "z*zbar" --dim 16
    csquant finite --n 5 --symbol "1,1,1,1,1"
    csquant prime --region disk:r=1.0
    csquant general --measure m.json --symbol-values f.json
    csquant ordering --symbol "q*p^2" --schemes all
    csquant scan trajectory --z 1
    csquant verify

Primary output goes to ``--out`` (or ``$CSQUANT_OUTPUT_DIR/<mode>.<ext>``,
or stdout).  Nothing is written to it unless the whole run succeeds.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import cs, fock, frame, measure, ordering, prime, verify
from .fock import FockParams, OscillatorParams, TruncationWarning
from .quadrature import QuadratureError, QuadratureScheme
from .symbols import SymbolSyntaxError, parse_symbol

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CONTRACT = 4
EXIT_TRUNCATION = 5

OUTPUT_DIR_ENV = "CSQUANT_OUTPUT_DIR"


@dataclass
class RunConfig:
    mode: str
    dim: int = 32
    radial: int | None = None
    angular: int | None = None
    hbar: float = 1.0
    tol: float = 1e-10
    out: str | None = None
    fmt: str = "json"

    @property
    def params(self) -> FockParams:
        return FockParams(self.dim, self.hbar)

    @property
    def quad(self) -> QuadratureScheme:
        return QuadratureScheme(self.radial or 2 * self.dim, self.angular or 4 * self.dim + 1)


class ParseError(Exception):
    pass


def _num(x: float) -> str:
    return format(float(x), ".17e")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj) + "\n"


def _operator_output(op, fmt: str) -> str:
    if fmt == "csv":
        return _csv(["row", "col", "re", "im"],
                    ((i, j, float(op[i, j].real), float(op[i, j].imag))
                     for i in range(op.shape[0]) for j in range(op.shape[1])))
    return _json(fock.operator_to_json(op))


def _symbol(text: str):
    try:
        return parse_symbol(text)
    except SymbolSyntaxError as exc:
        raise ParseError(str(exc)) from None


def _complex(text: str) -> complex:
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise ParseError(f"cannot read complex number {text!r}") from None


def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"cannot read number list {text!r}") from None


# ---------------------------------------------------------------------------
# Scans

def emit_scan(kind: str, config: RunConfig, inputs: dict) -> str:
    """CSV for plotting: lower-symbol grid, semiclassical errors or a trajectory."""
    if kind == "lower-grid":
        f = _symbol(inputs["symbol"])
        a = cs.quantize_cs(f, config.params, config.quad)
        return lower_grid_csv(a, config.params, inputs.get("radius", 2.0), inputs.get("points", 11))
    if kind == "semiclassical":
        f = _symbol(inputs["symbol"])
        z = _complex(inputs.get("z", "1"))
        pts = cs.semiclassical_points(f, z, inputs.get("hbar_list", []), config.dim)
        return _csv(["hbar", "lower_re", "lower_im", "exact_re", "exact_im", "error", "relative", "tail"],
                    ([pt.hbar, pt.lower.real, pt.lower.imag, complex(pt.exact).real,
                      complex(pt.exact).imag, pt.error, int(pt.relative), pt.tail] for pt in pts))
    if kind == "trajectory":
        z = _complex(inputs.get("z", "1"))
        osc = OscillatorParams(inputs.get("mass", 1.0), inputs.get("omega", 1.0))
        t = cs.default_time_grid(osc, inputs.get("points", 100))
        quantum = fock.evolve_expectation(z, t, osc, config.params)
        classical = cs.classical_trajectory(z, t, osc, config.hbar)
        return _csv(["t", "quantum", "classical", "deviation"],
                    ([float(a), float(b), float(c), float(abs(b - c))]
                     for a, b, c in zip(t, quantum, classical)))
    raise ParseError(f"unknown scan kind {kind!r}")


def lower_grid_csv(a, params, radius: float, points: int) -> str:
    xs = np.linspace(-radius, radius, points)
    rows = []
    for q in xs:
        for p in xs:
            z = (q + 1j * p) / np.sqrt(2)
            v = cs.lower_symbol(a, z, params)
            rows.append([float(q), float(p), v.real, v.imag])
    return _csv(["q", "p", "re", "im"], rows)


# ---------------------------------------------------------------------------
# Modes

def _values_file(path: str):
    with open(path) as fh:
        raw = json.load(fh)

    def conv(v):
        if isinstance(v, (list, tuple)):
            return complex(v[0], v[1])
        return complex(v)

    if isinstance(raw, dict):
        return {k: conv(v) for k, v in raw.items()}
    return [conv(v) for v in raw]


def run(config: RunConfig, inputs: dict) -> tuple:
    """Execute one mode; returns (exit code, primary output, {path: side output})."""
    side = {}
    mode = config.mode
    if mode == "cs":
        f = _symbol(inputs["symbol"])
        a = cs.quantize_cs(f, config.params, config.quad)
        if inputs.get("spectrum"):
            herm = fock.is_hermitian(a, config.tol * max(1.0, float(np.abs(a).max())))
            spec = fock.eigen_spectrum((a + a.conj().T) / 2) if herm else np.linalg.eigvals(a)
            side[inputs["spectrum"]] = _csv(["index", "re", "im"],
                                            ([i, float(np.real(v)), float(np.imag(v))]
                                             for i, v in enumerate(np.sort_complex(spec))))
        if inputs.get("lower_grid"):
            side[inputs["lower_grid"]] = lower_grid_csv(a, config.params, inputs.get("radius", 2.0),
                                                        inputs.get("points", 11))
        return EXIT_OK, _operator_output(a, config.fmt), side

    if mode == "finite":
        values = [_complex(v) for v in inputs["symbol"].split(",") if v.strip()]
        fr = frame.build_frame(inputs["n"])
        a = frame.quantize_finite(np.array(values), fr)
        if np.all(np.array(values).imag == 0):
            a = a.real.astype(complex)
        lower = frame.lower_symbol_finite(a, fr)
        if inputs.get("lower"):
            side[inputs["lower"]] = _csv(["n", "re", "im"],
                                         ([i, float(np.real(v)), float(np.imag(v))] for i, v in enumerate(lower)))
        return EXIT_OK, _operator_output(a, config.fmt), side

    if mode == "prime":
        region = prime.Region.parse(inputs["region"])
        f = _symbol(inputs.get("symbol") or "1")
        a = prime.prime_quantize(f, config.params, config.quad, region=region)
        return EXIT_OK, _operator_output(a, config.fmt), side

    if mode == "general":
        m = measure.load_measure(inputs["measure"])
        values = _values_file(inputs["symbol_values"])
        report = measure.check_resolution(m, config.tol)
        print(str(report), file=sys.stderr)
        a = measure.quantize_general(values, m, override=inputs.get("override", False))
        return EXIT_OK, _operator_output(a, config.fmt), side

    if mode == "ordering":
        f = _symbol(inputs["symbol"])
        schemes = inputs.get("schemes", "all")
        schemes = None if schemes == "all" else [s.strip() for s in schemes.split(",")]
        try:
            rep = ordering.compare_orderings(f, config.params, config.quad, schemes)
        except ValueError as exc:
            if "is not a valid OrderingScheme" in str(exc):
                raise ParseError(str(exc)) from None
            raise
        return EXIT_OK, _json(rep), side

    if mode == "measure":
        if inputs["kind"] == "polygon":
            m = measure.polygon_measure(frame.build_frame(inputs["n"]))
        else:
            m = measure.coherent_measure(config.params, config.quad)
        return EXIT_OK, json.dumps(measure.measure_to_json(m)) + "\n", side

    if mode == "scan":
        return EXIT_OK, emit_scan(inputs["kind"], config, inputs), side

    if mode == "verify":
        known = verify.suite_names()
        unknown = [s for s in inputs.get("suites") or () if s not in known]
        if unknown:
            raise ParseError(f"unknown suite(s) {unknown}; available: {', '.join(known)}")
        checks = verify.run_all(inputs.get("suites"))
        code = EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY_FAILED
        return code, verify.report(checks), side

    raise ParseError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# argparse

def _common(p: argparse.ArgumentParser, quadrature=True):
    p.add_argument("--dim", type=int, default=32, help="Fock cutoff D (default 32)")
    p.add_argument("--hbar", type=float, default=1.0)
    if quadrature:
        p.add_argument("--radial", type=int, default=None, help="Gauss-Laguerre order (default 2D)")
        p.add_argument("--angular", type=int, default=None, help="angular nodes (default 4D+1)")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", default=None, help="primary output path (default stdout)")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csquant", description=__doc__.split("\n\n")[0])
    parser.add_argument("--allow-truncation", action="store_true",
                        help="treat inadequate Fock cutoffs as warnings instead of errors")
    sub = parser.add_subparsers(dest="mode", required=True)

    p = sub.add_parser("cs", help="coherent-state quantization of a polynomial symbol")
    p.add_argument("--symbol", required=True)
    p.add_argument("--spectrum", help="write the spectrum CSV here")
    p.add_argument("--lower-grid", dest="lower_grid", help="write lower-symbol grid CSV here")
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--points", type=int, default=11)
    _common(p)

    p = sub.add_parser("finite", help="N-fold polygon frame quantization")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--symbol", required=True, help="comma-separated values f(0),...,f(N-1)")
    p.add_argument("--lower", help="write the lower symbol CSV here")
    _common(p, quadrature=False)

    p = sub.add_parser("prime", help="localization operator / prime quantization over a region")
    p.add_argument("--region", required=True,
                   help="disk:r=R | annulus:r1=A,r2=B | sector:t0=A,t1=B[,r=R] | plane[:r=R]")
    p.add_argument("--symbol", default=None)
    _common(p)

    p = sub.add_parser("general", help="quantization against an operator-valued measure file")
    p.add_argument("--measure", required=True)
    p.add_argument("--symbol-values", dest="symbol_values", required=True,
                   help="JSON list aligned with atoms, or object label -> value")
    p.add_argument("--override", action="store_true", help="quantize even if resolution fails")
    _common(p, quadrature=False)

    p = sub.add_parser("ordering", help="compare operator orderings of a polynomial")
    p.add_argument("--symbol", required=True)
    p.add_argument("--schemes", default="all")
    _common(p)

    p = sub.add_parser("measure", help="export a standard measure as JSON")
    p.add_argument("kind", choices=("polygon", "coherent"))
    p.add_argument("--n", type=int, default=5)
    _common(p)

    p = sub.add_parser("scan", help="plot-ready CSV scans")
    p.add_argument("kind", choices=("lower-grid", "semiclassical", "trajectory"))
    p.add_argument("--symbol", default="z*zbar")
    p.add_argument("--z", default="1")
    p.add_argument("--hbar-list", dest="hbar_list", default="1,0.5,0.25")
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", action="append", dest="suites", help="run only this suite (repeatable)")
    p.add_argument("--out", default=None)

    return parser


def _config_from_args(args) -> tuple:
    ns = vars(args).copy()
    mode = ns.pop("mode")
    ns.pop("allow_truncation")
    cfg = RunConfig(mode=mode,
                    dim=ns.pop("dim", 32), radial=ns.pop("radial", None),
                    angular=ns.pop("angular", None), hbar=ns.pop("hbar", 1.0),
                    tol=ns.pop("tol", 1e-10), out=ns.pop("out", None), fmt=ns.pop("fmt", "json"))
    if mode == "scan":
        ns["hbar_list"] = _floats(ns["hbar_list"])
        if ns["points"] is None:
            ns["points"] = 100 if ns["kind"] == "trajectory" else 11
    return cfg, ns


def _output_path(cfg: RunConfig) -> str | None:
    if cfg.out:
        return cfg.out
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base:
        ext = "txt" if cfg.mode == "verify" else ("csv" if cfg.mode == "scan" or cfg.fmt == "csv" else "json")
        return os.path.join(base, f"{cfg.mode}.{ext}")
    return None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg, inputs = _config_from_args(args)
        with warnings.catch_warnings():
            warnings.simplefilter("default" if args.allow_truncation else "error", TruncationWarning)
            code, primary, side = run(cfg, inputs)
    except ParseError as exc:
        print(f"csquant: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TruncationWarning as exc:
        print(f"csquant: truncation inadequate: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (QuadratureError, measure.MeasureError, measure.ResolutionError,
            ordering.OrderingError, fock.NotHermitianError) as exc:
        print(f"csquant: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (ValueError, OSError) as exc:
        print(f"csquant: error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT

    for path, text in side.items():
        with open(path, "w") as fh:
            fh.write(text)
    path = _output_path(cfg)
    if path is None:
        sys.stdout.write(primary)
    else:
        with open(path, "w") as fh:
            fh.write(primary)
    return code


if __name__ == "__main__":
    sys.exit(main())
