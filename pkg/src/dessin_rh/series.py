"""Truncated power series in ``h = x - x0`` and local inverse germs."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np


def series_mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    return np.convolve(a[:n], b[:n])[:n]


def series_inv(a: np.ndarray, n: int) -> np.ndarray:
    """Reciprocal of a series with nonzero constant term."""
    if a[0] == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    out = np.zeros(n, dtype=complex)
    out[0] = 1 / a[0]
    for k in range(1, n):
        m = min(k, len(a) - 1)
        out[k] = -np.dot(a[1 : m + 1], out[k - 1 :: -1][:m]) / a[0]
    return out


def series_div(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    return series_mul(a, series_inv(b, n), n)


def series_derivative(a: np.ndarray) -> np.ndarray:
    return a[1:] * np.arange(1, len(a))


def poly_of_series(coeffs, s: np.ndarray, n: int) -> np.ndarray:
    """Evaluate a polynomial (lowest degree first) at a series by Horner."""
    acc = np.zeros(n, dtype=complex)
    for c in reversed(list(coeffs)):
        acc = series_mul(acc, s, n)
        acc[0] += c
    return acc


def taylor_shift(coeffs, x0: complex) -> np.ndarray:
    """Coefficients of p(x0 + h) in powers of h."""
    c = np.array(coeffs, dtype=complex)
    n = len(c)
    out = np.zeros(n, dtype=complex)
    # synthetic division repeated n times
    work = c.copy()
    for k in range(n):
        acc = 0j
        new = np.zeros(n - k, dtype=complex)
        for i in range(n - k - 1, -1, -1):
            acc = acc * x0 + work[i]
            new[i] = acc
        out[k] = new[0]
        work = new[1:]
    return out


@dataclass(frozen=True)
class PowerSeriesGerm:
    """Taylor coefficients of a function germ at ``base_point``.

    ``coefficients[j]`` multiplies ``(x - base_point)**j``; the germ is known
    modulo ``(x - base_point)**truncation_order``.
    """

    base_point: complex
    coefficients: np.ndarray

    @property
    def truncation_order(self) -> int:
        return len(self.coefficients)

    def __call__(self, x: complex) -> complex:
        h = x - self.base_point
        return complex(np.polyval(self.coefficients[::-1], h))

    def derivative(self, k: int = 1) -> "PowerSeriesGerm":
        c = np.asarray(self.coefficients, dtype=complex)
        for _ in range(k):
            c = series_derivative(c)
        return PowerSeriesGerm(self.base_point, c)

    def derivative_at_base(self, k: int) -> complex:
        return complex(self.coefficients[k] * factorial(k))

    def __add__(self, other: "PowerSeriesGerm") -> "PowerSeriesGerm":
        n = min(self.truncation_order, other.truncation_order)
        return PowerSeriesGerm(
            self.base_point, self.coefficients[:n] + other.coefficients[:n]
        )

    def __mul__(self, other: "PowerSeriesGerm") -> "PowerSeriesGerm":
        n = min(self.truncation_order, other.truncation_order)
        return PowerSeriesGerm(
            self.base_point, series_mul(self.coefficients, other.coefficients, n)
        )


def fibre(coeffs, x0: complex, polish_steps: int = 3) -> np.ndarray:
    """All roots t of p(t) = x0, polished by a few Newton steps."""
    c = np.array(coeffs, dtype=complex)
    c[0] -= x0
    roots = np.roots(c[::-1])
    dc = c[1:] * np.arange(1, len(c))
    for _ in range(polish_steps):
        val = np.polyval(c[::-1], roots)
        der = np.polyval(dc[::-1], roots)
        ok = der != 0
        roots[ok] = roots[ok] - val[ok] / der[ok]
    return roots


def power_series_inverses(coeffs, x0: complex, order: int) -> list:
    """Germs at ``x0`` of all local inverses of the polynomial ``coeffs``.

    ``coeffs`` is any sequence of numbers, lowest degree first (exact
    polynomials are converted with :meth:`to_complex`).  Each germ ``s``
    satisfies ``p(s(x)) = x`` modulo ``(x - x0)**order``.  Raises
    ``ValueError("not a regular value")`` when some preimage of ``x0`` is a
    critical point.
    """
    if hasattr(coeffs, "to_complex"):
        coeffs = coeffs.to_complex()
    c = np.array(coeffs, dtype=complex)
    dc = c[1:] * np.arange(1, len(c))
    roots = fibre(c, x0)
    scale = max(1.0, float(np.max(np.abs(roots)))) if len(roots) else 1.0
    dvals = np.polyval(dc[::-1], roots)
    lead = abs(c[-1]) * scale ** (len(c) - 2)
    if np.any(np.abs(dvals) <= 1e-9 * lead):
        raise ValueError("not a regular value")
    target = np.zeros(order, dtype=complex)
    target[0] = x0
    if order > 1:
        target[1] = 1.0
    germs = []
    for t in roots:
        s = np.zeros(order, dtype=complex)
        s[0] = t
        prec = 1
        # Newton iteration doubles the number of correct coefficients
        while True:
            prec = min(2 * prec, order)
            val = poly_of_series(c, s, prec) - target[:prec]
            der = poly_of_series(dc, s, prec)
            s[:prec] = s[:prec] - series_div(val, der, prec)
            if prec == order:
                break
        # one more sweep at full precision cleans up rounding
        val = poly_of_series(c, s, order) - target
        s = s - series_div(val, poly_of_series(dc, s, order), order)
        germs.append(PowerSeriesGerm(complex(x0), s))
    return germs
