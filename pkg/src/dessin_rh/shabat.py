"""Shabat polynomials: exact normal families, a Newton solver, a verifier.

Normalisation used by the solver: ``P`` monic, the black vertex of largest
valency at 0, the white vertex of largest valency at 1, critical values
``{0, v}``.  This keeps ``P`` rational whenever those two vertices are
rational, which is what the exact annihilator route needs.
"""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from scipy.cluster.hierarchy import linkage, to_tree
from scipy.spatial.distance import pdist

from .dessin import Dessin, orbits
from .exact import ExactPolynomial
from .series import taylor_shift

log = logging.getLogger(__name__)


class NotShabatError(ValueError):
    pass


class NoSolutionError(RuntimeError):
    pass


@dataclass(frozen=True)
class ComplexPolynomial:
    """Complex coefficients, lowest degree first."""

    coeffs: tuple

    def __post_init__(self):
        cs = [complex(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def coerce(cls, p) -> "ComplexPolynomial":
        if isinstance(p, ComplexPolynomial):
            return p
        if isinstance(p, ExactPolynomial):
            return cls(tuple(p.to_complex()))
        return cls(tuple(p))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def __call__(self, x):
        return np.polyval(self.array()[::-1], x)

    def derivative(self) -> "ComplexPolynomial":
        c = self.array()
        return ComplexPolynomial(tuple(c[1:] * np.arange(1, len(c))) or (0,))

    def centered(self) -> "ComplexPolynomial":
        """Translate so that the coefficient of ``x^(n-1)`` vanishes."""
        n = self.degree
        if n < 2:
            return self
        c = self.array()
        shifted = taylor_shift(c, -c[n - 1] / (n * c[n]))
        shifted[n - 1] = 0
        return ComplexPolynomial(tuple(shifted))

    def to_exact(self, max_den: int = 10**6, tol: float = 1e-9):
        """Rational polynomial close to this one, or ``None``.

        Every real number has convergents ``p/q`` within ``1/q**2``, so a
        match only counts when it is far better than that.
        """
        out = []
        scale = max(1.0, max(abs(c) for c in self.coeffs))
        for c in self.coeffs:
            if abs(c.imag) > tol * scale:
                return None
            f = Fraction(c.real).limit_denominator(max_den)
            err = abs(float(f) - c.real)
            if err > tol * scale or err > 1e-4 * scale / f.denominator**2:
                return None
            out.append(f)
        return ExactPolynomial(out)


@dataclass(frozen=True)
class ValencyData:
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        a = tuple(sorted((int(x) for x in self.alpha), reverse=True))
        b = tuple(sorted((int(x) for x in self.beta), reverse=True))
        if not a or not b or min(a + b) < 1:
            raise ValueError("valencies must be positive")
        if sum(a) != sum(b):
            raise ValueError("black and white valencies must both sum to e")
        if len(a) + len(b) != sum(a) + 1:
            raise ValueError("valency data violate the tree property p + q = e + 1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def from_dessin(cls, d: Dessin) -> "ValencyData":
        return cls(
            tuple(len(c) for c in orbits(d.black)), tuple(len(c) for c in orbits(d.white))
        )

    @property
    def edges(self) -> int:
        return sum(self.alpha)


@dataclass(frozen=True)
class ShabatSolution:
    poly: ComplexPolynomial
    black_vertices: tuple
    white_vertices: tuple
    critical_values: tuple
    residual: float
    seed: int | None = field(default=None, compare=False)

    def valency_data(self) -> ValencyData:
        return ValencyData(
            tuple(m for _, m in self.black_vertices), tuple(m for _, m in self.white_vertices)
        )


# -- exact families ---------------------------------------------------------------


def family_star(n: int) -> ExactPolynomial:
    if n < 1:
        raise ValueError("n must be at least 1")
    return ExactPolynomial.monomial(n)


def family_chebyshev(n: int) -> ExactPolynomial:
    """Chebyshev polynomial ``T_n`` from the three-term recurrence."""
    if n < 1:
        raise ValueError("n must be at least 1")
    x = ExactPolynomial.x()
    prev, cur = ExactPolynomial([1]), x
    for _ in range(n - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def family_two_star(m: int) -> ExactPolynomial:
    if m < 1:
        raise ValueError("m must be at least 1")
    return (ExactPolynomial.monomial(m) - 1) ** 2


# -- root clustering ------------------------------------------------------------------


def cluster_radius(multiplicity: int, tol: float) -> float:
    return max(tol ** (1.0 / multiplicity), 1e-6)


def cluster_roots(roots: Sequence[complex], tol: float) -> list:
    """Group numerically computed roots into (centre, multiplicity) pairs.

    A root of multiplicity ``m`` splits into an ``m``-gon of radius about
    ``tol**(1/m)``; a group is accepted when its diameter stays below twice
    that radius (relative to the root magnitude), otherwise it is split
    along the complete-linkage dendrogram.
    """
    roots = np.asarray(roots, dtype=complex)
    if len(roots) == 1:
        return [(complex(roots[0]), 1)]
    scale = max(1.0, float(np.max(np.abs(roots))))
    pts = np.column_stack([roots.real, roots.imag])
    tree = to_tree(linkage(pdist(pts), method="complete"))
    out = []

    def leaves(node):
        return node.pre_order()

    def visit(node):
        idx = leaves(node)
        group = roots[idx]
        m = len(idx)
        diam = float(np.max(np.abs(group[:, None] - group[None, :]))) if m > 1 else 0.0
        if m == 1 or diam <= 2 * cluster_radius(m, tol) * scale:
            out.append((complex(np.mean(group)), m))
        else:
            visit(node.get_left())
            visit(node.get_right())

    visit(tree)
    return sorted(out, key=lambda z: (round(z[0].real, 9), round(z[0].imag, 9)))


def _order_values(values: Sequence[complex]) -> list:
    return sorted(values, key=lambda v: (round(abs(v), 9), cmath.phase(v) if v else 0.0))


def verify_shabat(p, tol: float = 1e-10, critical_values=None) -> ShabatSolution:
    """Check that ``p`` has at most two critical values and read off its tree.

    Black vertices lie over the critical value of smaller modulus.  For a
    polynomial with a single critical value ``v`` the white vertices are
    taken over ``v + 1``.  Passing ``critical_values`` fixes the colouring
    instead; every critical value must then be one of the two.
    """
    poly = ComplexPolynomial.coerce(p)
    n = poly.degree
    if n < 1:
        raise ValueError("degree must be at least 1")
    c = poly.array()
    dc = c[1:] * np.arange(1, n + 1)
    crit = np.roots(dc[::-1]) if n > 1 else np.array([], dtype=complex)
    cvals = np.polyval(c[::-1], crit)
    vscale = max(1.0, float(np.max(np.abs(cvals)))) if len(cvals) else 1.0
    distinct: list = []
    for v in cvals:
        if not any(abs(v - w) <= max(tol, 1e-14) ** 0.5 * vscale for w in distinct):
            distinct.append(complex(v))
    if len(distinct) > 2:
        raise NotShabatError("not a Shabat polynomial")
    if critical_values is not None:
        given = [complex(v) for v in critical_values]
        for w in distinct:
            if min(abs(w - g) for g in given) > max(tol, 1e-14) ** 0.5 * vscale:
                raise NotShabatError("critical value outside the given pair")
        distinct = given
    elif not distinct:
        distinct = [complex(c[0])]
    if critical_values is not None:
        pass
    elif len(distinct) == 1:
        distinct.append(distinct[0] + 1)
    else:
        # refine each critical value as the mean over its cluster
        refined = []
        for w in distinct:
            close = [v for v in cvals if abs(v - w) <= max(tol, 1e-14) ** 0.5 * vscale]
            refined.append(complex(np.mean(close)))
        distinct = _order_values(refined)
    v0, v1 = distinct
    verts = []
    residual = 0.0
    pscale = float(np.max(np.abs(c)))
    for v in (v0, v1):
        shifted = c.copy()
        shifted[0] -= v
        groups = cluster_roots(np.roots(shifted[::-1]), tol)
        rebuilt = np.array([c[-1]], dtype=complex)
        for z, m in groups:
            for _ in range(m):
                rebuilt = np.convolve(rebuilt, [-z, 1])
        residual = max(residual, float(np.max(np.abs(rebuilt - shifted))) / pscale)
        verts.append(tuple(groups))
    if len(verts[0]) + len(verts[1]) != n + 1:
        raise ValueError("root clustering failed; increase precision")
    return ShabatSolution(poly, verts[0], verts[1], (v0, v1), residual)


# -- Newton solver --------------------------------------------------------------------


def _expand(points, mults, lib=np):
    out = [1]
    for z, m in zip(points, mults):
        for _ in range(m):
            out = np.convolve(out, [-z, 1]) if lib is np else _mp_conv(out, [-z, 1])
    return out


def _mp_conv(a, b):
    out = [mpmath.mpc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


class _ShabatSystem:
    def __init__(self, val: ValencyData):
        self.alpha = val.alpha
        self.beta = val.beta
        self.n = val.edges
        self.p = len(self.alpha)
        self.q = len(self.beta)

    def unpack(self, z):
        p, q = self.p, self.q
        a = [0] + list(z[: p - 1])
        b = [1] + list(z[p - 1 : p - 1 + q - 1])
        return a, b, z[-1]

    def residual(self, z, lib=np):
        a, b, v = self.unpack(z)
        A = _expand(a, self.alpha, lib)
        B = _expand(b, self.beta, lib)
        F = [A[i] - B[i] for i in range(self.n)]
        F[0] -= v
        return F, A

    def jacobian(self, z, lib=np):
        a, b, _ = self.unpack(z)
        cols = []
        for i in range(1, self.p):
            mults = list(self.alpha)
            mults[i] -= 1
            col = _expand(a, mults, lib)
            cols.append([-self.alpha[i] * col[r] if r < len(col) else 0 for r in range(self.n)])
        for j in range(1, self.q):
            mults = list(self.beta)
            mults[j] -= 1
            col = _expand(b, mults, lib)
            cols.append([self.beta[j] * col[r] if r < len(col) else 0 for r in range(self.n)])
        cols.append([-1] + [0] * (self.n - 1))
        return cols

    def initial(self, rng: np.random.Generator, radius: float = 1.0) -> np.ndarray:
        k = self.p + self.q - 2
        r = radius * np.sqrt(rng.random(k))
        th = 2 * np.pi * rng.random(k)
        pts = r * np.exp(1j * th)
        a, _, _ = self.unpack(list(pts) + [0])
        v = np.polyval(np.asarray(_expand(a, self.alpha))[::-1], 1.0)
        return np.concatenate([pts, [v]])


def _newton(system: _ShabatSystem, z: np.ndarray, tol: float, max_iter: int = 200):
    def norm(z):
        F, A = system.residual(z)
        return float(np.max(np.abs(F)) / max(1.0, np.max(np.abs(A)))), np.asarray(F)

    res, F = norm(z)
    for _ in range(max_iter):
        if res < tol:
            return z, res
        J = np.array(system.jacobian(z), dtype=complex).T
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return None, res
        lam = 1.0
        while lam > 1e-4:
            trial = z + lam * step
            tres, tF = norm(trial)
            if np.isfinite(tres) and tres < res:
                break
            lam /= 2
        else:
            return None, res
        z, res, F = trial, tres, tF
    return (z, res) if res < tol else (None, res)


def _polish_mp(system: _ShabatSystem, z: np.ndarray, precision: int, steps: int = 8):
    with mpmath.workprec(precision):
        zz = [mpmath.mpc(complex(x)) for x in z]
        res = None
        for _ in range(steps):
            F, A = system.residual(zz, lib=mpmath)
            res = max(abs(f) for f in F) / max(1, max(abs(x) for x in A))
            if res < mpmath.mpf(2) ** (-precision + 8):
                break
            J = mpmath.matrix(system.jacobian(zz, lib=mpmath)).T
            step = mpmath.lu_solve(J, mpmath.matrix([-f for f in F]))
            zz = [zz[i] + step[i] for i in range(len(zz))]
        F, A = system.residual(zz, lib=mpmath)
        res = max(abs(f) for f in F) / max(1, max(abs(x) for x in A))
        coeffs = [complex(x) for x in A]
        return zz, float(res), coeffs


def solve_shabat(
    valencies: ValencyData,
    seeds: Sequence[int] = range(32),
    tol: float | None = None,
    precision: int = 53,
) -> list:
    """All distinct Shabat polynomials with the given valencies found from ``seeds``.

    Each seed drives one damped Newton run from a random start in a disk
    whose radius cycles through 1, 2, 3, 4 with the seed (starts confined to
    the unit disk are often drawn to degenerate solutions with merged
    vertices).  Accepted solutions have distinct vertices and pass
    :func:`verify_shabat` with the requested valencies.  Results keep seed
    order.  Raises :class:`NoSolutionError` when no seed converges.
    """
    if tol is None:
        tol = 1e-12 if precision <= 53 else 1e-30
    system = _ShabatSystem(valencies)
    n = system.n
    if n == 1:
        poly = ComplexPolynomial((0, 1))
        return [verify_shabat(poly)]
    newton_tol = max(tol, 1e-12)
    found: list = []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        z0 = system.initial(rng, radius=1.0 + seed % 4)
        z, res = _newton(system, z0, newton_tol)
        if z is None:
            continue
        a, b, v = system.unpack(list(z))
        pts = np.array(a + b, dtype=complex)
        gaps = np.abs(pts[:, None] - pts[None, :]) + np.eye(len(pts))
        if np.min(gaps) < 1e-6 or abs(v) < 1e-8:
            continue
        if precision > 53:
            _, res, coeffs = _polish_mp(system, z, precision)
            if res > tol:
                continue
        else:
            _, A = system.residual(z)
            coeffs = list(A)
        poly = ComplexPolynomial(tuple(coeffs))
        if any(np.max(np.abs(np.subtract(poly.coeffs, s.poly.coeffs))) < 1e-6 for s in found):
            continue
        try:
            sol = verify_shabat(poly, tol=max(tol, 1e-12), critical_values=(0, v))
        except ValueError:
            continue
        if sol.valency_data() != valencies:
            continue
        found.append(
            ShabatSolution(sol.poly, sol.black_vertices, sol.white_vertices,
                           sol.critical_values, max(res, 0.0), seed)
        )
    if not found:
        raise NoSolutionError("no solution found")
    return found
