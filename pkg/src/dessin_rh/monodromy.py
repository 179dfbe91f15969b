"""Recover the dessin of a Shabat polynomial by continuing its fibres.

The fibre ``{t : p(t) = x}`` over a base point on the segment between the
two critical values is the edge set of the tree.  Continuing it around a
small loop about each critical value permutes the fibre; the two
permutations are the black and white vertex rotations.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .dessin import Dessin, Isomorphism, Permutation, dessins_isomorphic
from .shabat import ComplexPolynomial, verify_shabat


class TrackingError(RuntimeError):
    pass


@dataclass(frozen=True)
class LoopSpec:
    """Go from ``base_point`` straight to the circle ``|x - center| = radius``,
    once around it, and back.  ``steps`` is the initial number of steps
    along the circle."""

    base_point: complex
    center: complex
    radius: float
    steps: int = 64
    clockwise: bool = False

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("loop radius must be positive")
        if self.steps < 16:
            raise ValueError("at least 16 steps are required")
        if abs(self.base_point - self.center) <= self.radius:
            raise ValueError("base point must lie outside the loop circle")

    def reversed(self) -> "LoopSpec":
        return LoopSpec(self.base_point, self.center, self.radius, self.steps, not self.clockwise)

    def point(self, s: float) -> complex:
        """Position at parameter ``s`` in [0, 1]."""
        u = self.base_point - self.center
        entry = self.center + self.radius * u / abs(u)
        phase0 = cmath.phase(u)
        sign = -1 if self.clockwise else 1
        if s <= 1 / 3:
            return self.base_point + (entry - self.base_point) * (3 * s)
        if s <= 2 / 3:
            ang = phase0 + sign * 2 * np.pi * (3 * s - 1)
            return self.center + self.radius * cmath.exp(1j * ang)
        return entry + (self.base_point - entry) * (3 * s - 2)


@dataclass(frozen=True)
class MonodromyResult:
    sigma_0: Permutation
    sigma_1: Permutation
    certificate: float
    critical_values: tuple
    base_point: complex
    fibre: tuple

    def dessin(self) -> Dessin:
        return Dessin(self.sigma_0, self.sigma_1)


def sorted_fibre(p: ComplexPolynomial, x: complex) -> np.ndarray:
    from .series import fibre

    roots = fibre(p.coeffs, x)
    order = sorted(range(len(roots)), key=lambda i: (round(roots[i].real, 9), round(roots[i].imag, 9)))
    return roots[order]


def _continue(c, dc, roots, x_new, tol, scale):
    """Newton-correct every root for the new value; returns (roots, residual) or None."""
    t = roots.copy()
    for _ in range(12):
        val = _pv(c, t) - x_new
        der = _pv(dc, t)
        step = val / der
        t = t - step
        if np.max(np.abs(step)) <= tol * scale:
            break
    else:
        return None
    res = float(np.max(np.abs(_pv(c, t) - x_new)) / max(1.0, abs(x_new)))
    return t, res


def _pv(c, t):
    return np.polyval(c[::-1], t)


def track_roots(p, loop: LoopSpec, tol: float = 1e-10) -> tuple:
    """Permutation of the sorted base fibre induced by ``loop``.

    Returns ``(permutation, certificate)`` where ``permutation[i] = j`` means
    the root labelled ``i`` ends where root ``j`` started, and the
    certificate is the largest relative residual ``|p(t) - x|`` seen.
    """
    p = ComplexPolynomial.coerce(p)
    c = p.array()
    dc = c[1:] * np.arange(1, len(c))
    start = sorted_fibre(p, loop.base_point)
    n = len(start)
    if n == 1:
        return Permutation((0,)), 0.0
    scale = max(1.0, float(np.max(np.abs(start))))
    roots = start.copy()
    s = 0.0
    hmax = 1.0 / (3 * loop.steps)
    h = hmax
    cert = 0.0
    while s < 1.0:
        h = min(h, 1.0 - s)
        x_new = loop.point(s + h)
        out = _continue(c, dc, roots, x_new, tol, scale)
        accepted = False
        if out is not None:
            new, res = out
            gaps = np.abs(roots[:, None] - roots[None, :]) + np.diag(np.full(n, np.inf))
            sep = np.min(gaps, axis=1)
            moved = np.abs(new - roots)
            newgaps = np.abs(new[:, None] - new[None, :]) + np.diag(np.full(n, np.inf))
            if np.all(moved < 0.25 * sep) and np.min(newgaps) > 10 * tol * scale:
                accepted = True
        if accepted:
            roots = new
            s += h
            cert = max(cert, res)
            h = min(hmax, 1.5 * h)
        else:
            h /= 2
            if h < 1e-12:
                raise TrackingError("increase precision")
    images = []
    for r in roots:
        d = np.abs(start - r)
        images.append(int(np.argmin(d)))
    if sorted(images) != list(range(n)):
        raise TrackingError("fibre matching failed; increase precision")
    return Permutation(tuple(images)), cert


def loops_for(critical_values: tuple, steps: int = 64) -> tuple:
    v0, v1 = critical_values
    base = (v0 + v1) / 2
    radius = abs(v1 - v0) / 4
    return LoopSpec(base, v0, radius, steps), LoopSpec(base, v1, radius, steps)


def recover_dessin(p, tol: float = 1e-10, steps: int = 64) -> MonodromyResult:
    """Black and white permutations of a polynomial with at most two critical values.

    ``sigma_0`` belongs to the critical value of smaller modulus.  With a
    single critical value the second loop encircles a regular value and
    ``sigma_1`` is the identity.
    """
    p = ComplexPolynomial.coerce(p)
    sol = verify_shabat(p, tol=max(tol, 1e-12))
    cv = sol.critical_values
    l0, l1 = loops_for(cv, steps)
    s0, c0 = track_roots(p, l0, tol)
    s1, c1 = track_roots(p, l1, tol)
    return MonodromyResult(s0, s1, max(c0, c1), cv, l0.base_point, tuple(sorted_fibre(p, l0.base_point)))


def verify_riemann_hilbert(d: Dessin, p, tol: float = 1e-10) -> tuple:
    """``(True, isomorphism)`` when the monodromy of ``p`` reproduces ``d``.

    Colour swap is allowed (the two critical values are not distinguished).
    """
    result = recover_dessin(p, tol)
    iso: Isomorphism | None = dessins_isomorphic(d, result.dessin(), allow_swap=True)
    return iso is not None, iso


def shabat_for_tree(
    d: Dessin,
    seeds_per_round: int = 32,
    max_rounds: int = 16,
    seed_base: int = 0,
    tol: float = 1e-10,
    precision: int = 53,
):
    """Solve the valency system of ``d`` and keep the solution whose monodromy is ``d``.

    Seeds are consumed in rounds until a match appears.  Returns
    ``(solution, isomorphism)``.
    """
    from .shabat import NoSolutionError, ValencyData, solve_shabat

    val = ValencyData.from_dessin(d)
    tried: list = []
    for k in range(max_rounds):
        seeds = range(seed_base + k * seeds_per_round, seed_base + (k + 1) * seeds_per_round)
        try:
            sols = solve_shabat(val, seeds, precision=precision)
        except NoSolutionError:
            continue
        for sol in sols:
            if any(np.max(np.abs(np.subtract(sol.poly.coeffs, t))) < 1e-6 for t in tried):
                continue
            tried.append(sol.poly.coeffs)
            try:
                ok, iso = verify_riemann_hilbert(d, sol.poly, tol)
            except (TrackingError, ValueError):
                continue
            if ok:
                return sol, iso
    raise TrackingError("no Shabat polynomial with matching monodromy found")


def inverse_span_order(p, rank_tol: float = 1e-8) -> tuple:
    """Dimension of the span of the local inverses of ``p`` modulo translation.

    ``p`` is centred first, since a translation adds constants to the
    inverses.  Rational polynomials go through the exact annihilator;
    otherwise the order is the numerical rank of the inverse germs.
    Returns ``(order, route)`` with route ``"exact"`` or ``"numeric"``.
    """
    from .annihilator import inverse_germs, minimal_order, series_rank

    p = ComplexPolynomial.coerce(p).centered()
    exact = p.to_exact()
    if exact is not None:
        return minimal_order(exact), "exact"
    return series_rank(inverse_germs(p.coeffs), rank_tol), "numeric"


def annihilator_order(d: Dessin, rank_tol: float = 1e-8, **solver_options) -> tuple:
    """:func:`inverse_span_order` of the Shabat polynomial selected for ``d``."""
    sol, _ = shabat_for_tree(d, **solver_options)
    return inverse_span_order(sol.poly, rank_tol)
