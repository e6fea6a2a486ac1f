"""
Polynomial phase-space symbols f(q, p) = f(z, zbar).

The normal form is a map ``(j, k) -> c`` for monomials ``c z^j zbar^k`` with
z = (q + i p) / sqrt(2).  (q, p) is only a view: ``to_qp`` expands back.
"""

from __future__ import annotations

import math
import re
from math import comb

import numpy as np

SQRT2 = math.sqrt(2.0)


def _half_power_of_two(n: int) -> float:
    """2^(-n/2), exact whenever n is even."""
    if n % 2 == 0:
        return 2.0 ** (-(n // 2))
    return 2.0 ** (-(n // 2)) / SQRT2


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            key = tuple(x + y for x, y in zip(ka, kb))
            out[key] = out.get(key, 0) + ca * cb
    return out


def _binomial_pair(n: int, sign: int) -> dict:
    """Integer expansion of (x + sign*y)^n as {(i, n-i): coeff}."""
    return {(i, n - i): comb(n, i) * sign ** (n - i) for i in range(n + 1)}


class Symbol:
    """Complex polynomial in the commuting pair (z, zbar)."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for (j, k), c in dict(terms or {}).items():
            j, k = int(j), int(k)
            if j < 0 or k < 0:
                raise ValueError(f"negative power in monomial ({j}, {k})")
            c = complex(c)
            if c != 0:
                clean[(j, k)] = c
        self._terms = dict(sorted(clean.items()))

    # constructors

    @classmethod
    def const(cls, c) -> "Symbol":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, j: int, k: int, c=1.0) -> "Symbol":
        return cls({(j, k): c})

    @classmethod
    def z(cls) -> "Symbol":
        return cls.monomial(1, 0)

    @classmethod
    def zbar(cls) -> "Symbol":
        return cls.monomial(0, 1)

    @classmethod
    def q(cls) -> "Symbol":
        return cls.from_qp({(1, 0): 1.0})

    @classmethod
    def p(cls) -> "Symbol":
        return cls.from_qp({(0, 1): 1.0})

    @classmethod
    def from_qp(cls, coeffs) -> "Symbol":
        """Build from ``{(m, n): C_mn}`` meaning sum C_mn q^m p^n."""
        return cls._from_mixed({(m, n, 0, 0): c for (m, n), c in dict(coeffs).items()})

    @classmethod
    def _from_mixed(cls, mixed: dict) -> "Symbol":
        # keys (a, b, c, d) for q^a p^b z^c zbar^d; expansion uses integer
        # arithmetic and a single power-of-two scale per monomial
        out: dict = {}
        for (a, b, c, d), coeff in mixed.items():
            if coeff == 0:
                continue
            qz = _binomial_pair(a, +1)          # (z + zbar)^a
            pz = _binomial_pair(b, -1)          # (z - zbar)^b
            scale = coeff * (-1j) ** b * _half_power_of_two(a + b)
            for (j1, k1), n1 in qz.items():
                for (j2, k2), n2 in pz.items():
                    key = (j1 + j2 + c, k1 + k2 + d)
                    out[key] = out.get(key, 0) + scale * (n1 * n2)
        return cls(out)

    # views

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max((j + k for j, k in self._terms), default=0)

    def to_qp(self) -> dict:
        """Coefficients ``{(m, n): C_mn}`` of the same polynomial in q and p."""
        out: dict = {}
        for (j, k), c in self._terms.items():
            zq = {(a, j - a): comb(j, a) * 1j ** (j - a) for a in range(j + 1)}
            zbq = {(a, k - a): comb(k, a) * (-1j) ** (k - a) for a in range(k + 1)}
            scale = c * _half_power_of_two(j + k)
            for key, v in _poly_mul(zq, zbq).items():
                out[key] = out.get(key, 0) + scale * v
        return {key: complex(v) for key, v in sorted(out.items()) if v != 0}

    def is_real(self, tol: float = 0.0) -> bool:
        return all(abs(c - np.conj(self._terms.get((k, j), 0))) <= tol
                   for (j, k), c in self._terms.items())

    def is_constant(self) -> bool:
        return all(key == (0, 0) for key in self._terms)

    def constant_value(self) -> complex:
        return self._terms.get((0, 0), 0j)

    # evaluation

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        zb = np.conj(z)
        out = np.zeros_like(z)
        for (j, k), c in self._terms.items():
            out = out + c * z ** j * zb ** k
        return out if out.ndim else complex(out)

    def eval_qp(self, q, p):
        return self((np.asarray(q) + 1j * np.asarray(p)) / SQRT2)

    # algebra

    def _coerce(self, other):
        if isinstance(other, Symbol):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Symbol.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0) + c
        return Symbol(out)

    __radd__ = __add__

    def __neg__(self):
        return Symbol({key: -c for key, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Symbol(_poly_mul(self._terms, other._terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Symbol):
            if not other.is_constant():
                raise ZeroDivisionError("division by a non-constant symbol")
            other = other.constant_value()
        if other == 0:
            raise ZeroDivisionError("division of a symbol by zero")
        return Symbol({key: c / other for key, c in self._terms.items()})

    def __pow__(self, n: int):
        if int(n) != n or n < 0:
            raise ValueError(f"symbol powers must be nonnegative integers, got {n!r}")
        out = Symbol.const(1.0)
        for _ in range(int(n)):
            out = out * self
        return out

    def conj(self) -> "Symbol":
        return Symbol({(k, j): np.conj(c) for (j, k), c in self._terms.items()})

    def d_z(self) -> "Symbol":
        return Symbol({(j - 1, k): j * c for (j, k), c in self._terms.items() if j > 0})

    def d_zbar(self) -> "Symbol":
        return Symbol({(j, k - 1): k * c for (j, k), c in self._terms.items() if k > 0})

    def __eq__(self, other):
        if not isinstance(other, Symbol):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def allclose(self, other: "Symbol", tol: float = 1e-12) -> bool:
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0) - other._terms.get(k, 0)) <= tol for k in keys)

    # printing and serialization

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (j, k), c in self._terms.items():
            coeff = f"({c.real!r}{'+' if math.copysign(1, c.imag) > 0 else '-'}{abs(c.imag)!r}i)"
            factors = [coeff]
            if j:
                factors.append("z" if j == 1 else f"z^{j}")
            if k:
                factors.append("zbar" if k == 1 else f"zbar^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Symbol({self})"

    def to_json(self) -> dict:
        return {f"{j},{k}": [c.real, c.imag] for (j, k), c in self._terms.items()}

    @classmethod
    def from_json(cls, obj: dict) -> "Symbol":
        terms = {}
        for key, (re_, im_) in obj.items():
            j, k = (int(s) for s in key.split(","))
            terms[(j, k)] = complex(re_, im_)
        return cls(terms)


# ---------------------------------------------------------------------------
# Operations on symbols

def poisson_bracket(f: Symbol, g: Symbol) -> Symbol:
    """{f, g} = df/dq dg/dp - df/dp dg/dq, computed as -i (f_z g_zbar - f_zbar g_z)."""
    return -1j * (f.d_z() * g.d_zbar() - f.d_zbar() * g.d_z())


def scale_hbar(f: Symbol, hbar: float) -> Symbol:
    """Substitute z -> z / sqrt(hbar), zbar -> zbar / sqrt(hbar)."""
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar!r}")
    return Symbol({(j, k): c * hbar ** (-(j + k) / 2) for (j, k), c in f.terms.items()})


# ---------------------------------------------------------------------------
# Parser

class SymbolSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        self.message = message
        super().__init__(f"{message} at column {pos + 1}\n  {text}\n  {' ' * pos}^")


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?[ij]?)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>\*\*|[-+*/^()])
""", re.VERBOSE)

_NAMES = {
    "q": (1, 0, 0, 0),
    "p": (0, 1, 0, 0),
    "z": (0, 0, 1, 0),
    "zbar": (0, 0, 0, 1),
}


def _tokenize(text: str):
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SymbolSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        if m.lastgroup != "ws":
            value = m.group()
            yield (m.lastgroup, "^" if value == "**" else value, pos)
        pos = m.end()
    yield ("end", "", len(text))


class _Parser:
    # expressions are held as mixed polynomials in (q, p, z, zbar) and only
    # reduced to the (z, zbar) normal form at the end, so q^2 + p^2 cancels
    # exactly instead of through products of 1/sqrt(2)

    def __init__(self, text: str):
        self.text = text
        self.tokens = list(_tokenize(text))
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, pos=None):
        raise SymbolSyntaxError(message, self.text, self.tok[2] if pos is None else pos)

    def advance(self):
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, value):
        if self.tok[1] != value:
            self.error(f"expected {value!r}" + (f", got {self.tok[1]!r}" if self.tok[1] else ""))
        return self.advance()

    def parse(self) -> dict:
        if self.tok[0] == "end":
            self.error("empty expression")
        out = self.expr()
        if self.tok[0] != "end":
            self.error(f"unexpected {self.tok[1]!r}")
        return out

    def expr(self):
        left = self.term()
        while self.tok[1] in ("+", "-"):
            op = self.advance()[1]
            right = self.term()
            left = _madd(left, right if op == "+" else _mscale(right, -1))
        return left

    def term(self):
        left = self.unary()
        while self.tok[1] in ("*", "/"):
            _, op, pos = self.advance()
            right = self.unary()
            if op == "*":
                left = _poly_mul(left, right)
            else:
                c = _mconst(right)
                if c is None:
                    self.error("division is only allowed by a constant", pos)
                if c == 0:
                    self.error("division by zero", pos)
                left = _mscale(left, 1 / c)
        return left

    def unary(self):
        if self.tok[1] in ("+", "-"):
            op = self.advance()[1]
            inner = self.unary()
            return inner if op == "+" else _mscale(inner, -1)
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok[1] == "^":
            self.advance()
            exp_pos = self.tok[2]
            c = _mconst(self.unary())
            if c is None:
                self.error("exponent must be a constant", exp_pos)
            if c.imag != 0 or c.real != int(c.real):
                self.error("fractional or complex powers are not allowed", exp_pos)
            if c.real < 0:
                self.error("negative powers are not allowed", exp_pos)
            n = int(c.real)
            out = {(0, 0, 0, 0): 1.0}
            for _ in range(n):
                out = _poly_mul(out, base)
            return out
        return base

    def atom(self):
        kind, value, pos = self.tok
        if kind == "num":
            self.advance()
            if value[-1] in "ij":
                return {(0, 0, 0, 0): complex(0, float(value[:-1]))}
            return {(0, 0, 0, 0): complex(float(value))}
        if kind == "name":
            self.advance()
            if value in ("i", "j"):
                return {(0, 0, 0, 0): 1j}
            if value not in _NAMES:
                self.error(f"unknown name {value!r} (expected q, p, z, zbar or i)", pos)
            return {_NAMES[value]: 1.0}
        if value == "(":
            self.advance()
            out = self.expr()
            self.expect(")")
            return out
        if kind == "end":
            self.error("unexpected end of expression")
        self.error(f"unexpected {value!r}")


def _madd(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, c in b.items():
        out[key] = out.get(key, 0) + c
    return out


def _mscale(a: dict, s) -> dict:
    return {key: c * s for key, c in a.items()}


def _mconst(a: dict):
    if any(key != (0, 0, 0, 0) and c != 0 for key, c in a.items()):
        return None
    return complex(a.get((0, 0, 0, 0), 0))


def parse_symbol(text: str) -> Symbol:
    """Parse a polynomial in q, p, z, zbar with complex literals.

    >>> parse_symbol("z*zbar")(1 + 1j)
    (2+0j)
    """
    return Symbol._from_mixed(_Parser(text).parse())
