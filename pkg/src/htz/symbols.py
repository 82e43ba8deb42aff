"""Radial and quasihomogeneous symbols and their Mellin transforms.

A radial symbol is a finite sum ``sum_j c_j r**a_j`` with rational
coefficients and nonnegative rational exponents.  Its Mellin transform
``int_0^1 f(r) r**(z-1) dr`` is the rational function ``sum_j c_j/(z+a_j)``,
which :func:`mellin_eval` computes exactly.  :func:`mellin_quadrature`
integrates numerically and exists to cross-check the exact path.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DivergentMellin, NegativeExponent, NonConvergence, SymbolSyntaxError
from .exactmath import RationalLike, as_rational, format_rational

Term = tuple  # (coefficient, exponent)


@dataclass(frozen=True)
class RadialSymbol:
    """Canonical sum of monomials in r, sorted by exponent, no zero terms."""

    terms: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        merged: dict[Fraction, Fraction] = {}
        for c, e in self.terms:
            c, e = as_rational(c), as_rational(e)
            if e < 0:
                raise NegativeExponent(f"exponent {e} < 0 is unbounded at r=0")
            merged[e] = merged.get(e, Fraction(0)) + c
        canon = tuple((c, e) for e, c in sorted(merged.items()) if c != 0)
        object.__setattr__(self, "terms", canon)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[RationalLike, RationalLike]]) -> "RadialSymbol":
        return cls(tuple(terms))

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(c for c, _ in self.terms)

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(e for _, e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(e == 0 for _, e in self.terms)

    def min_exponent(self) -> Optional[Fraction]:
        return self.terms[0][1] if self.terms else None

    def __add__(self, other: "RadialSymbol") -> "RadialSymbol":
        return RadialSymbol(self.terms + other.terms)

    def __neg__(self) -> "RadialSymbol":
        return RadialSymbol(tuple((-c, e) for c, e in self.terms))

    def __sub__(self, other: "RadialSymbol") -> "RadialSymbol":
        return self + (-other)

    def __mul__(self, scalar: RationalLike) -> "RadialSymbol":
        k = as_rational(scalar)
        return RadialSymbol(tuple((k * c, e) for c, e in self.terms))

    __rmul__ = __mul__

    def shift(self, beta: RationalLike) -> "RadialSymbol":
        """Multiply by ``r**beta``."""
        b = as_rational(beta)
        return RadialSymbol(tuple((c, e + b) for c, e in self.terms))

    def ratio_to(self, other: "RadialSymbol") -> Optional[Fraction]:
        """The constant c with ``self == c * other``, or None.

        Zero is proportional to everything (c = 0); nothing nonzero is
        proportional to zero.
        """
        if self.is_zero():
            return Fraction(0)
        if other.is_zero() or self.exponents != other.exponents:
            return None
        c = self.terms[0][0] / other.terms[0][0]
        return c if other * c == self else None

    def __call__(self, r: float) -> float:
        return sum(float(c) * r ** float(e) for c, e in self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (c, e) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = format_rational(mag)
            else:
                power = "r" if e == 1 else (f"r^{e}" if e.denominator == 1 else f"r^{{{e}}}")
                body = power if mag == 1 else f"{format_rational(mag)}*{power}"
            if i == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __str__(self):
        return self.render()

    def to_json(self) -> list[dict[str, str]]:
        return [{"coeff": format_rational(c), "exp": format_rational(e)} for c, e in self.terms]

    @classmethod
    def from_json(cls, records: list[dict[str, str]]) -> "RadialSymbol":
        return cls(tuple((rec["coeff"], rec["exp"]) for rec in records))


def monomial(exponent: RationalLike, coeff: RationalLike = 1) -> RadialSymbol:
    return RadialSymbol(((coeff, exponent),))


ONE = monomial(0)
ZERO = RadialSymbol()


@dataclass(frozen=True)
class QuasiSymbol:
    """``exp(i*degree*theta) * radial(r)``."""

    degree: int
    radial: RadialSymbol

    def __str__(self):
        return f"e^{{i{self.degree}θ}}·({self.radial})"


@dataclass(frozen=True)
class MellinSample:
    argument: Fraction
    value: Fraction

    def to_json(self) -> dict[str, str]:
        return {"z": format_rational(self.argument), "value": format_rational(self.value)}


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<r>r)|(?P<op>[-+*^{}/])|(?P<bad>\S))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    text = text.replace("−", "-")
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        kind = m.lastgroup
        if kind == "bad":
            raise SymbolSyntaxError(f"unexpected character {m.group(kind)!r}", m.start(kind))
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str, value: Optional[str] = None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or ("end of input" if kind == "end" else kind)
            got = tok[1] or "end of input"
            raise SymbolSyntaxError(f"expected {want!r}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def symbol(self) -> RadialSymbol:
        terms = []
        sign = 1
        if self.peek()[:2] in (("op", "-"), ("op", "+")):
            sign = -1 if self.take("op")[1] == "-" else 1
        terms.append(self.term(sign))
        while self.peek()[:2] in (("op", "-"), ("op", "+")):
            sign = -1 if self.take("op")[1] == "-" else 1
            terms.append(self.term(sign))
        self.take("end")
        return RadialSymbol(tuple(terms))

    def term(self, sign: int) -> Term:
        kind, _, _ = self.peek()
        if kind == "num":
            coeff = Fraction(self.take("num")[1])
            if self.peek()[:2] != ("op", "*"):
                return sign * coeff, Fraction(0)
            self.take("op", "*")
        elif kind == "r":
            coeff = Fraction(1)
        else:
            tok = self.peek()
            raise SymbolSyntaxError(f"expected a term, got {tok[1] or 'end of input'!r}", tok[2])
        return sign * coeff, self.power()

    def power(self) -> Fraction:
        self.take("r")
        if self.peek()[:2] != ("op", "^"):
            return Fraction(1)
        self.take("op", "^")
        braced = self.peek()[:2] == ("op", "{")
        if braced:
            self.take("op", "{")
        if self.peek()[:2] == ("op", "-"):
            raise NegativeExponent(f"negative exponent at position {self.peek()[2]}")
        exp = Fraction(self.take("num")[1])
        if braced:
            self.take("op", "}")
        return exp


def parse_radial(text: str) -> RadialSymbol:
    """Parse e.g. ``"2*r^3 - 1/2*r^{1/2} + 1"`` into a canonical symbol.

    Terms are ``c``, ``r``, ``r^E`` or ``c*r^E`` with c an integer or ``a/b``
    and E a nonnegative integer or fraction, optionally in braces.
    """
    return _Parser(text).symbol()


# -- Mellin transform ---------------------------------------------------------

def _check_convergent(f: RadialSymbol, z) -> None:
    a = f.min_exponent()
    if a is not None and z + a <= 0:
        raise DivergentMellin(f"Mellin integral diverges: z={z} <= -{a}")


def mellin_eval(f: RadialSymbol, z: RationalLike) -> Fraction:
    z = as_rational(z)
    _check_convergent(f, z)
    return sum((c / (z + e) for c, e in f.terms), Fraction(0))


def mellin_quadrature(f: RadialSymbol, z: float, tol: float = 1e-12) -> float:
    """Numerical ``int_0^1 f(r) r**(z-1) dr`` by adaptive Gauss-Kronrod."""
    from scipy.integrate import quad

    if tol <= 0:
        raise ValueError("tol must be positive")
    a = f.min_exponent()
    if a is not None and z + float(a) <= 1e-9:
        raise DivergentMellin(f"Mellin integral diverges: z={z} <= -{a}")
    if f.is_zero():
        return 0.0
    terms = [(float(c), float(e)) for c, e in f.terms]

    # Gauss-Kronrod nodes are interior, so r == 0 is never sampled.
    def integrand(r: float) -> float:
        return math.fsum(c * r ** (e + z - 1.0) for c, e in terms)

    value, abserr = quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=0.0, limit=500)
    if not abserr <= tol:
        raise NonConvergence(f"quadrature error estimate {abserr:.3g} exceeds tol {tol:.3g}")
    return value
