"""Univariate polynomials and rational functions over the rationals.

Coefficients are :class:`fractions.Fraction` values stored lowest degree
first.  Everything here is immutable; arithmetic returns new objects.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose: silently converting a binary float
    gives an exact but surprising rational.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {value!r} as an exact rational")


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class ExactPolynomial:
    """A polynomial with rational coefficients, lowest degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.

    >>> p = ExactPolynomial([0, 0, 0, 4, -1])
    >>> p.derivative()
    ExactPolynomial('12*x^2 - 4*x^3')
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs: tuple = _strip([as_fraction(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple) -> "ExactPolynomial":
        obj = cls.__new__(cls)
        obj.coeffs = coeffs
        return obj

    @classmethod
    def x(cls) -> "ExactPolynomial":
        return cls._raw((Fraction(0), Fraction(1)))

    @classmethod
    def constant(cls, c: Scalar) -> "ExactPolynomial":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> "ExactPolynomial":
        return cls([0] * degree + [c])

    # -- basic properties ------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactPolynomial([other])
        if not isinstance(other, ExactPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "ExactPolynomial":
        if isinstance(other, ExactPolynomial):
            return other
        return ExactPolynomial([other])

    def __add__(self, other) -> "ExactPolynomial":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        res = list(a)
        for i, c in enumerate(b):
            res[i] += c
        return ExactPolynomial._raw(_strip(res))

    __radd__ = __add__

    def __neg__(self) -> "ExactPolynomial":
        return ExactPolynomial._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "ExactPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ExactPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "ExactPolynomial":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ExactPolynomial()
            return ExactPolynomial._raw(tuple(c * other for c in self.coeffs))
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ExactPolynomial()
        res = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                res[i + j] += ai * bj
        return ExactPolynomial._raw(_strip(res))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ExactPolynomial":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = ExactPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other) -> tuple:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        if len(rem) - 1 < dq:
            return ExactPolynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            c = c / lead
            quot[i - dq] = c
            for j, oc in enumerate(other.coeffs):
                rem[i - dq + j] -= c * oc
        return ExactPolynomial(quot), ExactPolynomial(rem[:dq])

    def __floordiv__(self, other) -> "ExactPolynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "ExactPolynomial":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "ExactPolynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    # -- calculus and composition ----------------------------------------
    def derivative(self, k: int = 1) -> "ExactPolynomial":
        p = self
        for _ in range(k):
            p = ExactPolynomial._raw(
                tuple(i * c for i, c in enumerate(p.coeffs))[1:]
            )
        return p

    def __call__(self, x):
        """Evaluate by Horner's rule; ``x`` may be a number or polynomial."""
        acc = 0 if not isinstance(x, ExactPolynomial) else ExactPolynomial()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "ExactPolynomial") -> "ExactPolynomial":
        return self._coerce(self(inner))

    def shift(self, a: Scalar) -> "ExactPolynomial":
        """Return p(x + a)."""
        return self.compose(ExactPolynomial([a, 1]))

    def scale(self, s: Scalar) -> "ExactPolynomial":
        """Return p(s*x)."""
        s = as_fraction(s)
        out, f = [], Fraction(1)
        for c in self.coeffs:
            out.append(c * f)
            f *= s
        return ExactPolynomial(out)

    # -- normalisation ---------------------------------------------------
    def monic(self) -> "ExactPolynomial":
        if self.is_zero():
            return self
        return self * (1 / self.leading())

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive and integral."""
        if self.is_zero():
            return Fraction(1)
        den = lcm(*(c.denominator for c in self.coeffs))
        num = 0
        for c in self.coeffs:
            num = gcd(num, c.numerator * (den // c.denominator))
        return Fraction(num, den)

    def primitive(self) -> "ExactPolynomial":
        return self * (1 / self.content())

    def to_complex(self) -> list:
        return [complex(c) for c in self.coeffs]

    # -- display ---------------------------------------------------------
    def to_str(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"ExactPolynomial('{self.to_str()}')"


def poly_gcd(a: ExactPolynomial, b: ExactPolynomial) -> ExactPolynomial:
    """Monic gcd by the Euclidean algorithm (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_gcd_many(polys: Sequence[ExactPolynomial]) -> ExactPolynomial:
    g = ExactPolynomial()
    for p in polys:
        g = poly_gcd(g, p)
        if g.degree == 0:
            break
    return g


class ExactRationalFunction:
    """A reduced quotient num/den of rational polynomials with den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduce: bool = True):
        num = ExactPolynomial._coerce(num)
        den = ExactPolynomial([1]) if den is None else ExactPolynomial._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            lead = den.leading()
            if lead != 1:
                num, den = num * (1 / lead), den * (1 / lead)
        self.num = num
        self.den = den

    def __add__(self, other) -> "ExactRationalFunction":
        other = _as_ratfun(other)
        return ExactRationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "ExactRationalFunction":
        return ExactRationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other) -> "ExactRationalFunction":
        return self + (-_as_ratfun(other))

    def __mul__(self, other) -> "ExactRationalFunction":
        other = _as_ratfun(other)
        return ExactRationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other) -> "ExactRationalFunction":
        other = _as_ratfun(other)
        return ExactRationalFunction(self.num * other.den, self.den * other.num)

    def derivative(self) -> "ExactRationalFunction":
        return ExactRationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __eq__(self, other) -> bool:
        other = _as_ratfun(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self) -> str:
        if self.den == ExactPolynomial([1]):
            return f"ExactRationalFunction('{self.num}')"
        return f"ExactRationalFunction('({self.num})/({self.den})')"


def _as_ratfun(value) -> ExactRationalFunction:
    if isinstance(value, ExactRationalFunction):
        return value
    return ExactRationalFunction(value)
