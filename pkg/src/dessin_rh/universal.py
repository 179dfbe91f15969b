"""Universal annihilating operators for the roots of a generic monic polynomial.

For ``P(t) = t^n + a_{n-1} t^{n-1} + ... + a_0`` the roots, as functions of
``a_0``, satisfy a linear equation ``sum_k c_k(a) d^k y / da_0^k = 0`` whose
coefficients are polynomials in ``a_0..a_{n-1}``.  It comes from the
Wronskian-type determinant whose columns hold a root ``t_k`` and its
derivatives, each of which is a rational function ``Q_{m,k}`` of all roots.

Coefficients are recovered by evaluation and interpolation: the cofactors
are evaluated exactly at rational root tuples, and the unknown polynomials
``c_k`` are fitted in the weighted-homogeneous monomial basis
(``a_j`` has weight ``n - j``).
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, gcd, lcm
from typing import Mapping, Sequence

import sympy

from .diffop import LinearDifferentialOperator
from .exact import ExactPolynomial, as_fraction
from .linalg import determinant, nullspace

MAX_DEGREE = 5


class MultivariatePolynomial:
    """Sparse polynomial with rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    Fractions; iteration follows graded lexicographic order, largest first.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        self.variables = tuple(variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.variables) or min(exps, default=0) < 0:
                raise ValueError("bad exponent vector")
            c = as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = dict(sorted(clean.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True))

    @classmethod
    def constant(cls, variables, c) -> "MultivariatePolynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def from_sympy(cls, expr, variables: Sequence[str]) -> "MultivariatePolynomial":
        syms = sympy.symbols(list(variables))
        poly = sympy.Poly(sympy.expand(expr), *syms)
        terms = {}
        for exps, c in poly.terms():
            c = sympy.Rational(c)
            terms[exps] = Fraction(int(c.p), int(c.q))
        return cls(variables, terms)

    def to_sympy(self):
        syms = sympy.symbols(list(self.variables))
        expr = sympy.Integer(0)
        for exps, c in self.terms.items():
            mono = sympy.Rational(c.numerator, c.denominator)
            for s, e in zip(syms, exps):
                mono *= s**e
            expr += mono
        return expr

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def weighted_degree(self, weights: Sequence[int]) -> int:
        return max((sum(w * e for w, e in zip(weights, ex)) for ex in self.terms), default=-1)

    def _check(self, other: "MultivariatePolynomial"):
        if self.variables != other.variables:
            raise ValueError("variable lists differ")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultivariatePolynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.variables, tuple(self.terms.items())))

    def __neg__(self) -> "MultivariatePolynomial":
        return MultivariatePolynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "MultivariatePolynomial":
        if not isinstance(other, MultivariatePolynomial):
            other = MultivariatePolynomial.constant(self.variables, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return MultivariatePolynomial(self.variables, terms)

    __radd__ = __add__

    def __sub__(self, other) -> "MultivariatePolynomial":
        return self + (-other)

    def __mul__(self, other) -> "MultivariatePolynomial":
        if not isinstance(other, MultivariatePolynomial):
            c = as_fraction(other)
            return MultivariatePolynomial(self.variables, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return MultivariatePolynomial(self.variables, terms)

    __rmul__ = __mul__

    def __call__(self, values: Sequence):
        if len(values) != len(self.variables):
            raise ValueError("wrong number of values")
        total = 0
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(values, exps):
                if e:
                    v = v * x**e
            total = total + v
        return total

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` primitive over the integers."""
        if not self.terms:
            return Fraction(0)
        den = lcm(*(c.denominator for c in self.terms.values()))
        num = 0
        for c in self.terms.values():
            num = gcd(num, c.numerator * (den // c.denominator))
        return Fraction(num, den)

    def leading_term(self) -> tuple:
        return next(iter(self.terms.items()))

    def exact_div(self, other: "MultivariatePolynomial") -> "MultivariatePolynomial":
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        self._check(other)
        syms = sympy.symbols(list(self.variables))
        q, r = sympy.div(sympy.Poly(self.to_sympy(), *syms), sympy.Poly(other.to_sympy(), *syms))
        if not r.is_zero:
            raise ArithmeticError("division is not exact")
        return MultivariatePolynomial.from_sympy(q.as_expr(), self.variables)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms.items():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"MultivariatePolynomial({self.to_str()!r})"


class SymbolicRationalFunction:
    """Reduced quotient of two polynomials in ``t_1..t_n``."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultivariatePolynomial, den: MultivariatePolynomial):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        num._check(den)
        self.num = num
        self.den = den

    @property
    def variables(self) -> tuple:
        return self.num.variables

    def to_sympy(self):
        return self.num.to_sympy() / self.den.to_sympy()

    def __call__(self, values: Sequence) -> Fraction:
        values = [as_fraction(v) for v in values]
        return self.num(values) / self.den(values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolicRationalFunction):
            return NotImplemented
        return sympy.simplify(self.to_sympy() - other.to_sympy()) == 0

    def __repr__(self) -> str:
        return f"SymbolicRationalFunction(({self.num}) / ({self.den}))"


def _tnames(n: int) -> list:
    return [f"t_{i}" for i in range(1, n + 1)]


def coefficient_names(n: int) -> tuple:
    return tuple(f"a_{j}" for j in range(n))


def q_mk(m: int, k: int, n: int) -> SymbolicRationalFunction:
    """``d^{m-1}/dt^{m-1} prod_{i != k} (t - t_i)^{-m}`` at ``t = t_k``, symbolically.

    >>> sympy.factor(q_mk(2, 1, 2).to_sympy())
    -2/(t_1 - t_2)**3
    """
    if not (1 <= k <= n) or m < 1:
        raise ValueError("need 1 <= k <= n and m >= 1")
    names = _tnames(n)
    ts = sympy.symbols(names)
    t = sympy.Symbol("t")
    f = sympy.Integer(1)
    for i in range(n):
        if i != k - 1:
            f *= (t - ts[i]) ** (-m)
    expr = sympy.diff(f, t, m - 1).subs(t, ts[k - 1])
    num, den = sympy.fraction(sympy.factor(sympy.together(expr)))
    lead = sympy.Poly(den, *ts).LC()
    num, den = sympy.expand(num / lead), sympy.expand(den / lead)
    return SymbolicRationalFunction(
        MultivariatePolynomial.from_sympy(num, names), MultivariatePolynomial.from_sympy(den, names)
    )


def q_values(ts: Sequence, n_max: int) -> list:
    """Exact ``Q_{m,k}(ts)`` for ``m = 1..n_max``; row ``m-1``, column ``k-1``.

    Uses the logarithmic derivative: with ``f = prod (t - t_i)^{-m}`` and
    ``u_i = 1/(t_k - t_i)``, ``(log f)^{(j)}(t_k) = -m (-1)^j j! sum u_i^{j+1}``.
    """
    ts = [as_fraction(t) for t in ts]
    n = len(ts)
    if len(set(ts)) != n:
        raise ZeroDivisionError("roots must be distinct")
    rows = [[Fraction(0)] * n for _ in range(n_max)]
    for k in range(n):
        us = [1 / (ts[k] - ts[i]) for i in range(n) if i != k]
        power_sums = [sum(u ** (j + 1) for u in us) for j in range(n_max)]
        base = 1
        for u in us:
            base *= u
        for m in range(1, n_max + 1):
            g = [-m * (-1) ** j * factorial(j) * power_sums[j] for j in range(m)]
            f = [base**m]
            for j in range(m - 1):
                f.append(sum(comb(j, l) * g[l] * f[j - l] for l in range(j + 1)))
            rows[m - 1][k] = f[m - 1]
    return rows


def determinant_cofactors(ts: Sequence) -> list:
    """Coefficients of ``y, y', ..., y^(n)`` in the determinant with first
    column ``(y, y', ..., y^(n))`` and remaining columns ``(t_k, Q_{1k}, ..., Q_{nk})``."""
    ts = [as_fraction(t) for t in ts]
    n = len(ts)
    rows = [ts] + q_values(ts, n)
    out = []
    for j in range(n + 1):
        minor = [rows[i] for i in range(n + 1) if i != j]
        out.append((-1) ** j * determinant(minor))
    return out


def elementary_symmetric(ts: Sequence) -> list:
    """``[e_1, ..., e_n]`` of the given values."""
    e = [Fraction(1)]
    for t in ts:
        e = [e[0]] + [e[i] + t * e[i - 1] for i in range(1, len(e))] + [t * e[-1]]
    return e[1:]


def coefficients_from_roots(ts: Sequence) -> list:
    """``[a_0, ..., a_{n-1}]`` of ``prod (t - t_i)``; ``a_{n-i} = (-1)^i e_i``."""
    e = elementary_symmetric([as_fraction(t) for t in ts])
    n = len(e)
    return [(-1) ** (n - j) * e[n - j - 1] for j in range(n)]


@lru_cache(maxsize=None)
def weighted_monomials(n: int, weight: int) -> tuple:
    """Exponent vectors in ``a_0..a_{n-1}`` of weighted degree ``weight``."""
    weights = [n - j for j in range(n)]
    out = []

    def rec(j, left, acc):
        if j == n - 1:
            out.append(tuple(acc + [left]))
            return
        for e in range(left // weights[j] + 1):
            rec(j + 1, left - e * weights[j], acc + [e])

    if weight >= 0:
        rec(0, weight, [])
    return tuple(sorted(out))


class UniversalOperator:
    """``sum_{k=1}^n c_k(a_0..a_{n-1}) d^k/da_0^k`` acting on functions of ``a_0``."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence[MultivariatePolynomial]):
        if len(coeffs) != n:
            raise ValueError("expected one coefficient per derivative order 1..n")
        names = coefficient_names(n)
        for c in coeffs:
            if c.variables != names:
                raise ValueError("coefficients must be polynomials in a_0..a_{n-1}")
        if coeffs[-1].is_zero():
            raise ValueError("leading coefficient vanishes")
        self.n = n
        self.coeffs = tuple(coeffs)

    @property
    def variables(self) -> tuple:
        return coefficient_names(self.n)

    def __getitem__(self, k: int) -> MultivariatePolynomial:
        """Coefficient of ``d^k/da_0^k``; zero for ``k = 0``."""
        if k == 0:
            return MultivariatePolynomial(self.variables)
        return self.coeffs[k - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniversalOperator):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def pretty(self) -> str:
        """Each coefficient as an integer multiple of a primitive polynomial."""
        lines = []
        for k in range(self.n, 0, -1):
            c = self.coeffs[k - 1]
            if c.is_zero():
                continue
            cont = c.content()
            prim = c * (1 / cont)
            if all(v < 0 for v in prim.terms.values()):
                cont, prim = -cont, -prim
            dk = "d/da_0" if k == 1 else f"d^{k}/da_0^{k}"
            if len(prim.terms) == 1 and prim.total_degree() == 0:
                body = f"{cont}"
            elif cont == 1:
                body = f"({prim})"
            elif cont == -1:
                body = f"-({prim})"
            else:
                body = f"{cont}*({prim})"
            lines.append(f"{body} {dk}")
        text = lines[0]
        for line in lines[1:]:
            text += "\n  - " + line[1:] if line.startswith("-") else "\n  + " + line
        return text

    def __str__(self) -> str:
        return self.pretty()

    def __repr__(self) -> str:
        return f"UniversalOperator(n={self.n})"


def _samples(n: int, count: int, rng: random.Random, bound: int) -> list:
    seen = set()
    out = []
    while len(out) < count:
        ts = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))
        key = frozenset(ts)
        if len(key) < n or key in seen:
            continue
        seen.add(key)
        out.append(ts)
    return out


def _fit(n: int, weight: int, samples: list) -> list:
    """Nullspace of the cofactor-ratio conditions at the given weight."""
    monos = [weighted_monomials(n, weight - n * (n - k)) for k in range(1, n + 1)]
    offsets = [0]
    for ms in monos:
        offsets.append(offsets[-1] + len(ms))
    rows = []
    for ts in samples:
        a = coefficients_from_roots(ts)
        cof = determinant_cofactors(ts)
        if cof[0] != 0:
            raise ArithmeticError("order-zero cofactor does not vanish")
        # d/dx = -d/da_0, so c_k is proportional to (-1)^k C_k
        target = [(-1) ** k * cof[k] for k in range(n + 1)]
        vals = [[_mono_value(a, e) for e in ms] for ms in monos]
        for k in range(1, n):
            row = [Fraction(0)] * offsets[-1]
            for i, v in enumerate(vals[k - 1]):
                row[offsets[k - 1] + i] = v * target[n]
            for i, v in enumerate(vals[n - 1]):
                row[offsets[n - 1] + i] -= v * target[k]
            rows.append(row)
    return nullspace(rows), monos, offsets


def _mono_value(a: list, exps: tuple) -> Fraction:
    v = Fraction(1)
    for x, e in zip(a, exps):
        if e:
            v *= x**e
    return v


def _validate(n: int, polys: list, rng: random.Random, bound: int, count: int = 4) -> bool:
    """Check the fitted coefficients against cofactors at fresh points."""
    for ts in _samples(n, count, rng, 3 * bound):
        a = coefficients_from_roots(ts)
        cof = determinant_cofactors(ts)
        cn = polys[-1](a)
        for k in range(1, n):
            if polys[k - 1](a) * (-1) ** n * cof[n] != cn * (-1) ** k * cof[k]:
                return False
    return True


def _symmetry_check(n: int, rng: random.Random) -> None:
    ts = _samples(n, 1, rng, 20)[0]
    ref = determinant_cofactors(ts)
    for i, j in combinations(range(n), 2):
        sw = list(ts)
        sw[i], sw[j] = sw[j], sw[i]
        other = determinant_cofactors(sw)
        for k in range(n):
            if ref[k] * other[n] != other[k] * ref[n]:
                raise ArithmeticError("cofactor ratios are not symmetric")


def _normalize(n: int, polys: list) -> list:
    names = coefficient_names(n)
    syms = sympy.symbols(list(names))
    g = sympy.Integer(0)
    for p in polys:
        if not p.is_zero():
            g = sympy.gcd(g, p.to_sympy())
    if sympy.Poly(g, *syms).total_degree() > 0:
        polys = [p.exact_div(MultivariatePolynomial.from_sympy(g, names)) for p in polys]
    den = lcm(*(c.denominator for p in polys for c in p.terms.values()))
    num = 0
    for p in polys:
        for c in p.terms.values():
            num = gcd(num, c.numerator * (den // c.denominator))
    factor = Fraction(den, num)
    # sign: the first-order coefficient is negative at P = t^n - t
    probe = [Fraction(0)] * n
    probe[1 if n > 1 else 0] = Fraction(-1)
    ref = polys[0](probe)
    if ref == 0:
        ref = polys[-1].leading_term()[1]
        if ref < 0:
            factor = -factor
    elif ref > 0:
        factor = -factor
    return [p * factor for p in polys]


def universal_annihilator(n: int, seed: int = 0, max_weight: int | None = None) -> UniversalOperator:
    """The operator in ``a_0`` annihilating every root of ``t^n + ... + a_0``.

    Supported for ``2 <= n <= 5``.  The result has coprime coefficients with
    trivial integer content.

    >>> print(universal_annihilator(2))
    (a_1^2 - 4*a_0) d^2/da_0^2
      - 2 d/da_0
    """
    if not (2 <= n <= MAX_DEGREE):
        raise ValueError("unsupported degree")
    return _universal(n, seed, max_weight)


@lru_cache(maxsize=None)
def _universal(n: int, seed: int, max_weight: int | None) -> UniversalOperator:
    rng = random.Random(seed)
    _symmetry_check(n, rng)
    names = coefficient_names(n)
    weight = n * (n - 1)
    limit = max_weight if max_weight is not None else n * (n - 1) * (2 * n - 1)
    bound = 6 * n
    while weight <= limit:
        sizes = [len(weighted_monomials(n, weight - n * (n - k))) for k in range(1, n + 1)]
        # each sample fixes every c_k at a single point
        count = 3 * max(sum(sizes) // (n - 1), max(sizes)) // 2 + 8
        for _ in range(3):
            samples = _samples(n, count, rng, bound)
            basis, monos, offsets = _fit(n, weight, samples)
            polys = None
            if len(basis) == 1:
                vec = basis[0]
                polys = [
                    MultivariatePolynomial(names, {e: vec[offsets[k] + i] for i, e in enumerate(monos[k])})
                    for k in range(n)
                ]
                if polys[-1].is_zero() or not _validate(n, polys, rng, bound):
                    polys = None
            if not basis or polys is not None:
                break
            count *= 2
            bound *= 2
        else:
            raise ArithmeticError("interpolation failed: nullspace stays degenerate")
        if polys is not None:
            return UniversalOperator(n, _normalize(n, polys))
        weight += 1
    raise ArithmeticError("no annihilating operator within the weight bound")


def generic_discriminant(n: int) -> MultivariatePolynomial:
    """``-Res(P, P')`` for the generic monic ``P`` of degree ``n``.

    With this sign the leading coefficients of the universal operators
    factor with a positive integer cofactor content.
    """
    names = coefficient_names(n)
    syms = sympy.symbols(list(names))
    t = sympy.Symbol("t")
    p = t**n + sum(syms[j] * t**j for j in range(n))
    return MultivariatePolynomial.from_sympy(-sympy.resultant(p, sympy.diff(p, t), t), names)


def leading_coeff_factorization(D: UniversalOperator) -> tuple:
    """``(discriminant, cofactor)`` with ``discriminant * cofactor`` the leading coefficient."""
    disc = generic_discriminant(D.n)
    try:
        cof = D.coeffs[-1].exact_div(disc)
    except ArithmeticError as exc:
        raise ArithmeticError("leading coefficient is not divisible by the discriminant") from exc
    return disc, cof


def specialize(D: UniversalOperator, p) -> LinearDifferentialOperator:
    """Concrete operator in ``x`` for the inverses of ``p``.

    ``a_i`` takes the coefficients of ``p`` and ``a_0`` becomes ``a_0 - x``;
    since the inverses depend on ``x`` through ``a_0 - x``, each ``d/da_0``
    turns into ``-d/dx``.
    """
    if not isinstance(p, ExactPolynomial):
        p = ExactPolynomial(p)
    if p.degree != D.n:
        raise ValueError("polynomial degree does not match the operator")
    if p.leading() != 1:
        raise ValueError("polynomial must be monic")
    a = [p.coeffs[j] for j in range(D.n)]
    shifted = ExactPolynomial([a[0], -1])
    out = [ExactPolynomial()]
    for k, c in enumerate(D.coeffs, start=1):
        acc = ExactPolynomial()
        for exps, coef in c.terms.items():
            v = coef
            for j in range(1, D.n):
                if exps[j]:
                    v *= a[j] ** exps[j]
            if v:
                acc = acc + shifted ** exps[0] * v
        out.append(acc * (-1) ** k)
    return LinearDifferentialOperator(out)
