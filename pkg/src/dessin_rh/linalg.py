"""Exact linear algebra over the rationals by fraction-free elimination.

Rows are scaled to integers first; elimination then runs on integers with
Bareiss' exact division, so intermediate entries stay bounded by minors of
the input instead of growing like repeated fraction arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

try:  # gmpy2 makes big-integer elimination several times faster
    from gmpy2 import divexact as _divexact
    from gmpy2 import mpz as _int
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _int = int

    def _divexact(a, b):
        return a // b


def _integer_rows(rows: Sequence[Sequence]) -> list:
    out = []
    for row in rows:
        fr = [Fraction(v) for v in row]
        den = lcm(*(v.denominator for v in fr)) if fr else 1
        ints = [v.numerator * (den // v.denominator) for v in fr]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        out.append([_int(v) for v in ints])
    return out


def echelon(rows: Sequence[Sequence]) -> tuple:
    """Fraction-free row echelon form.

    Returns ``(matrix, pivot_columns)`` where ``matrix`` holds the integer
    echelon rows (only the first ``len(pivot_columns)`` rows are nonzero).
    """
    m = _integer_rows(rows)
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    prev = _int(1)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        best = None
        for i in range(r, nrows):
            v = m[i][c]
            if v:
                size = abs(v)
                if best is None or size < best:
                    piv, best = i, size
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        pv = pr[c]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = _divexact(pv * row[j] - f * pr[j], prev)
            else:
                for j in range(c + 1, ncols):
                    row[j] = _divexact(pv * row[j], prev)
            row[c] = _int(0)
        prev = pv
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(echelon(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list:
    """Basis of the right nullspace, one primitive integer vector per free column.

    Each returned vector is a list of Fractions with integer entries whose
    gcd is one.
    """
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    ncols = len(rows[0])
    m, pivots = echelon(rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * ncols
        x[fcol] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            row = m[k]
            s = Fraction(0)
            for j in range(c + 1, ncols):
                if row[j] and x[j]:
                    s += int(row[j]) * x[j]
            x[c] = -s / int(row[c])
        basis.append(_primitive(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list:
    """Unique solution of a consistent, full-column-rank system A x = b."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0])
    m, pivots = echelon(aug)
    if ncols in pivots:
        raise ArithmeticError("inconsistent linear system")
    if len(pivots) < ncols:
        raise ArithmeticError("linear system is underdetermined")
    x = [Fraction(0)] * ncols
    for k in range(ncols - 1, -1, -1):
        row = m[k]
        s = Fraction(int(row[ncols]))
        for j in range(k + 1, ncols):
            if row[j]:
                s -= int(row[j]) * x[j]
        x[k] = s / int(row[k])
    return x


def _primitive(vec: list) -> list:
    den = lcm(*(v.denominator for v in vec))
    ints = [v.numerator * (den // v.denominator) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [Fraction(v // g) for v in ints] if g else vec


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    dens = []
    m = []
    for row in rows:
        fr = [Fraction(v) for v in row]
        den = lcm(*(v.denominator for v in fr))
        dens.append(den)
        m.append([_int(v.numerator * (den // v.denominator)) for v in fr])
    sign = 1
    prev = _int(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        pv = m[c][c]
        for i in range(c + 1, n):
            row = m[i]
            f = row[c]
            for j in range(c + 1, n):
                row[j] = _divexact(pv * row[j] - f * m[c][j], prev)
            row[c] = _int(0)
        prev = pv
    scale = 1
    for d in dens:
        scale *= d
    return Fraction(sign * int(m[n - 1][n - 1]), scale)
