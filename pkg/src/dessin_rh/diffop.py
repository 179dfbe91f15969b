"""Linear differential operators with polynomial coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .exact import ExactPolynomial, as_fraction, poly_gcd_many
from .series import PowerSeriesGerm, series_mul, taylor_shift

_SUPERSCRIPT_PRIMES = {1: "y'", 2: "y''", 3: "y'''"}


def _yname(k: int) -> str:
    if k == 0:
        return "y"
    return _SUPERSCRIPT_PRIMES.get(k, f"y^({k})")


class LinearDifferentialOperator:
    """``q_k(x) y^(k) + ... + q_1(x) y' + q_0(x) y`` with rational polynomial q_j.

    ``coeffs[j]`` is the coefficient of ``y^(j)``.  Trailing zero
    coefficients are dropped so that ``order`` is well defined.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        cs = [c if isinstance(c, ExactPolynomial) else ExactPolynomial(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        if not cs:
            raise ValueError("the zero operator has no order")
        self.coeffs: tuple = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> ExactPolynomial:
        return self.coeffs[-1]

    def __getitem__(self, j: int) -> ExactPolynomial:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return ExactPolynomial()

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearDifferentialOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def scale(self, c) -> "LinearDifferentialOperator":
        c = as_fraction(c)
        return LinearDifferentialOperator([q * c for q in self.coeffs])

    def normalized(self) -> "LinearDifferentialOperator":
        """Remove the common polynomial factor and integer content.

        The sign is fixed so that the leading coefficient of ``q_k`` is
        positive.
        """
        g = poly_gcd_many(self.coeffs)
        cs = [q.exact_div(g) for q in self.coeffs] if g.degree > 0 else list(self.coeffs)
        den = lcm(*(c.denominator for q in cs for c in q.coeffs))
        num = 0
        for q in cs:
            for c in q.coeffs:
                num = gcd(num, c.numerator * (den // c.denominator))
        factor = Fraction(den, num)
        if cs[-1].leading() < 0:
            factor = -factor
        return LinearDifferentialOperator([q * factor for q in cs])

    def is_proportional(self, other: "LinearDifferentialOperator") -> bool:
        """Equal up to a nonzero rational-function factor."""
        return self.normalized() == other.normalized()

    def __call__(self, germ: PowerSeriesGerm) -> PowerSeriesGerm:
        return apply_operator(self, germ)

    def to_complex(self) -> list:
        return [np.array(q.to_complex() or [0], dtype=complex) for q in self.coeffs]

    def __str__(self) -> str:
        text = ""
        for k in range(self.order, -1, -1):
            q = self.coeffs[k]
            if q.is_zero():
                continue
            nterms = sum(1 for c in q.coeffs if c != 0)
            neg = nterms == 1 and q.leading() < 0
            body = (-q).to_str() if neg else q.to_str()
            if nterms > 1:
                body = f"({body})"
            term = _yname(k) if body == "1" else f"{body}*{_yname(k)}"
            if not text:
                text = f"-{term}" if neg else term
            else:
                text += f" - {term}" if neg else f" + {term}"
        return text + " = 0"

    def __repr__(self) -> str:
        return f"LinearDifferentialOperator('{self}')"


class NumericDifferentialOperator:
    """Operator with complex floating-point polynomial coefficients.

    Produced by the Wronskian route when coefficients cannot be recognised
    as rationals.
    """

    def __init__(self, coeffs: Sequence):
        self.coeffs = [np.trim_zeros(np.asarray(c, dtype=complex), "b") for c in coeffs]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def to_complex(self) -> list:
        return [c if len(c) else np.zeros(1, dtype=complex) for c in self.coeffs]

    def __call__(self, germ: PowerSeriesGerm) -> PowerSeriesGerm:
        return apply_operator(self, germ)

    def __str__(self) -> str:
        parts = []
        for k in range(self.order, -1, -1):
            c = self.coeffs[k]
            if not len(c):
                continue
            body = " + ".join(
                _numstr(a) + ("" if j == 0 else "*x" if j == 1 else f"*x^{j}") for j, a in enumerate(c) if a != 0
            )
            parts.append(f"({body})*{_yname(k)}")
        return " + ".join(parts) + " = 0"

    def __repr__(self) -> str:
        return f"NumericDifferentialOperator(order={self.order})"


def _numstr(a: complex) -> str:
    if a.imag == 0:
        return f"{a.real:.12g}"
    return f"({a.real:.12g}{a.imag:+.12g}j)"


def _operator_terms(L, germ: PowerSeriesGerm):
    k = L.order
    n = germ.truncation_order
    if n <= k:
        raise ValueError("germ truncation must exceed the operator order")
    m = n - k
    coeffs = np.asarray(germ.coefficients, dtype=complex)
    terms = []
    for j, q in enumerate(L.to_complex()):
        qs = taylor_shift(q, germ.base_point)
        g = coeffs.copy()
        for _ in range(j):
            g = g[1:] * np.arange(1, len(g))
        terms.append((qs, g[:m]))
    return terms, m


def apply_operator(L, germ: PowerSeriesGerm) -> PowerSeriesGerm:
    """Apply ``L`` to a truncated germ; the result has ``order`` fewer terms."""
    terms, m = _operator_terms(L, germ)
    out = np.zeros(m, dtype=complex)
    for qs, g in terms:
        qq = np.zeros(m, dtype=complex)
        qq[: min(m, len(qs))] = qs[:m]
        out += series_mul(qq, g, m)
    return PowerSeriesGerm(germ.base_point, out)


def operator_residual(L, germ: PowerSeriesGerm) -> float:
    """Largest residual coefficient relative to the size of the summed terms."""
    terms, m = _operator_terms(L, germ)
    out = np.zeros(m, dtype=complex)
    size = np.zeros(m)
    for qs, g in terms:
        qq = np.zeros(m, dtype=complex)
        qq[: min(m, len(qs))] = qs[:m]
        out += series_mul(qq, g, m)
        size += np.convolve(np.abs(qq), np.abs(g))[:m]
    scale = float(np.max(size))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(out)) / scale)


def numeric_proportional(a, b, tol: float = 1e-6) -> bool:
    """Compare two operators (exact or numeric) up to a constant factor."""
    ca, cb = a.to_complex(), b.to_complex()
    if len(ca) != len(cb):
        return False
    size = max(len(c) for c in ca + cb)
    va = np.concatenate([np.pad(c, (0, size - len(c))) for c in ca])
    vb = np.concatenate([np.pad(c, (0, size - len(c))) for c in cb])
    i = int(np.argmax(np.abs(va)))
    if vb[i] == 0:
        return False
    ratio = va[i] / vb[i]
    return bool(np.max(np.abs(va - ratio * vb)) <= tol * np.max(np.abs(va)))
