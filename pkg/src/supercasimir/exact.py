"""Exact rational scalars and Laurent polynomials in one variable ``t``.

Scalars are :class:`fractions.Fraction`; nothing in the package ever touches
floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction, str]


def as_fraction(value: Scalar) -> Fraction:
    """Coerce an int, Fraction or fraction string (``"3/4"``) to a Fraction.

    Floats are rejected: they would silently smuggle rounding into an exact
    computation.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a string or Fraction")
    if isinstance(value, str):
        if any(ch in value for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
    return Fraction(value)


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class LaurentPoly:
    """Immutable element of Q[t, t^-1], stored sparsely by exponent."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | None = None):
        clean: dict[int, Fraction] = {}
        for exp, coeff in (terms or {}).items():
            if not isinstance(exp, int) or isinstance(exp, bool):
                raise TypeError(f"exponent must be an int, got {exp!r}")
            c = as_fraction(coeff)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c: Scalar) -> "LaurentPoly":
        return cls({0: c})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    @property
    def min_exponent(self) -> int | None:
        return next(iter(self._terms), None)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for exp, c in other._terms.items():
            out[exp] = out.get(exp, Fraction(0)) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible in Q[t, t^-1]")
            (e, c), = self._terms.items()
            return LaurentPoly({e * n: Fraction(1) / c ** (-n)})
        out = LaurentPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, c: Scalar) -> Fraction:
        return laurent_eval(self, c)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        # descending exponent reads like a textbook polynomial
        for exp, c in sorted(self._terms.items(), reverse=True):
            mag = abs(c)
            if exp == 0:
                body = fraction_str(mag)
            else:
                tpart = "t" if exp == 1 else f"t^{exp}"
                body = tpart if mag == 1 else f"{fraction_str(mag)}*{tpart}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text


ONE = LaurentPoly.constant(1)
T = LaurentPoly.monomial(1)


def laurent_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def laurent_eval(p: LaurentPoly, c: Scalar) -> Fraction:
    """Evaluate ``p`` at the rational point ``c``.

    Raises ZeroDivisionError-flavoured ValueError at ``c = 0`` when ``p``
    carries negative powers of ``t``.
    """
    c = as_fraction(c)
    if c == 0 and p.min_exponent is not None and p.min_exponent < 0:
        raise ValueError("cannot evaluate a polynomial with negative powers of t at 0")
    total = Fraction(0)
    for exp, coeff in p.items():
        total += coeff * c ** exp
    return total


def check_points(points: Iterable[Scalar]) -> tuple[Fraction, ...]:
    pts = tuple(as_fraction(d) for d in points)
    if not pts:
        raise ValueError("at least one evaluation point is required")
    if any(d == 0 for d in pts):
        raise ValueError(f"evaluation points must be nonzero: {[fraction_str(d) for d in pts]}")
    if len(set(pts)) != len(pts):
        raise ValueError(f"evaluation points must be distinct: {[fraction_str(d) for d in pts]}")
    return pts


def lagrange_basis(points: Iterable[Scalar]) -> list[LaurentPoly]:
    """Interpolation polynomials p_i with p_i(d_j) = delta_ij for distinct nonzero d."""
    d = check_points(points)
    basis = []
    for i, di in enumerate(d):
        p = ONE
        for j, dj in enumerate(d):
            if j != i:
                p = p * LaurentPoly({1: 1 / (di - dj), 0: -dj / (di - dj)})
        basis.append(p)
    return basis


def vanishing_polynomial(points: Iterable[Scalar]) -> LaurentPoly:
    """prod_j (t - d_j); generates the kernel ideal of the evaluation map."""
    p = ONE
    for dj in check_points(points):
        p = p * LaurentPoly({1: 1, 0: -dj})
    return p
