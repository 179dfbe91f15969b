"""Differential operators annihilating the local inverses of a polynomial.

Two independent routes are provided:

* :func:`fuchsian_annihilator` works exactly over the rationals.  With
  ``r_k = sigma^(k) o p`` the identity ``sum_k (q_k o p) r_k = 0`` becomes,
  after clearing powers of ``p'``, a linear system for the coefficients of
  ``q_0, ..., q_k`` whose nullspace is found by fraction-free elimination.
* :func:`wronskian_annihilator` starts from numeric inverse germs, builds
  the operator from Wronskian cofactors and recognises the coefficients as
  rational functions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import mpmath
import numpy as np
import scipy.linalg

from .diffop import LinearDifferentialOperator, NumericDifferentialOperator
from .exact import ExactPolynomial, ExactRationalFunction, as_fraction
from .linalg import nullspace
from .series import PowerSeriesGerm, power_series_inverses, series_div, series_mul, taylor_shift

__all__ = [
    "DegreeBoundExceeded",
    "inverse_derivative_rationals",
    "inverse_derivative_numerators",
    "fuchsian_annihilator",
    "minimal_order",
    "wronskian_annihilator",
    "sampled_annihilator",
    "series_rank",
    "pullback_affine",
    "centered",
    "power_series_inverses",
    "inverse_germs",
]


class DegreeBoundExceeded(ArithmeticError):
    """No operator exists within the requested coefficient degree bound."""


def inverse_derivative_numerators(p: ExactPolynomial, n: int) -> list:
    """Polynomials ``N_k`` with ``r_k = N_k / (p')^(2k-1)`` for ``k = 1..n``.

    Index 0 holds ``t`` itself (``r_0 = t``).
    """
    dp = p.derivative()
    ddp = dp.derivative()
    out = [ExactPolynomial.x()]
    if n >= 1:
        out.append(ExactPolynomial([1]))
    for k in range(1, n):
        nk = out[k]
        out.append(nk.derivative() * dp - nk * ddp * (2 * k - 1))
    return out


def inverse_derivative_rationals(p: ExactPolynomial, n: int) -> list:
    """Reduced rational functions ``r_0 .. r_n`` with r_{k+1} = r_k' / p'."""
    if p.degree < 1:
        raise ValueError("polynomial must have degree at least 1")
    dp = p.derivative()
    out = [ExactRationalFunction(ExactPolynomial.x())]
    for _ in range(n):
        out.append(out[-1].derivative() / ExactRationalFunction(dp))
    return out


class _System:
    """Column generator for the annihilation system of a fixed polynomial."""

    def __init__(self, p: ExactPolynomial):
        self.p = p
        self.n = p.degree
        self.dp = p.derivative()
        self.numerators = inverse_derivative_numerators(p, self.n)
        self._ppow = [ExactPolynomial([1])]
        self._dppow = [ExactPolynomial([1])]

    def p_power(self, i: int) -> ExactPolynomial:
        while len(self._ppow) <= i:
            self._ppow.append(self._ppow[-1] * self.p)
        return self._ppow[i]

    def dp_power(self, i: int) -> ExactPolynomial:
        while len(self._dppow) <= i:
            self._dppow.append(self._dppow[-1] * self.dp)
        return self._dppow[i]

    def multiplier(self, j: int, k: int) -> ExactPolynomial:
        """``r_j * (p')^(2k-1)`` as a polynomial, for j <= k."""
        if j == 0:
            return self.numerators[0] * self.dp_power(2 * k - 1)
        return self.numerators[j] * self.dp_power(2 * (k - j))

    def solve(self, k: int, d: int) -> list:
        """Nullspace vectors for order ``k`` with coefficient degree ``<= d``."""
        columns = []
        for j in range(k + 1):
            m = self.multiplier(j, k)
            for i in range(d + 1):
                columns.append((self.p_power(i) * m).coeffs)
        nrows = max(len(c) for c in columns)
        rows = [[c[r] if r < len(c) else 0 for c in columns] for r in range(nrows)]
        return nullspace(rows)


def _vector_to_operator(vec: list, k: int, d: int) -> LinearDifferentialOperator:
    coeffs = [ExactPolynomial(vec[j * (d + 1) : (j + 1) * (d + 1)]) for j in range(k + 1)]
    return LinearDifferentialOperator(coeffs)


def fuchsian_annihilator(p, max_coeff_degree: int | None = None) -> LinearDifferentialOperator:
    """Minimal-order operator annihilating every local inverse of ``p``.

    The result is the lexicographically least (order, coefficient degree)
    solution, content-normalised.  Raises :class:`DegreeBoundExceeded` if
    no operator of order ``<= deg p`` exists with coefficient degree at most
    ``max_coeff_degree`` (default ``2 * deg p``).

    >>> str(fuchsian_annihilator(ExactPolynomial([0, 0, 0, 1])))
    "3*x*y' - y = 0"
    """
    p = p if isinstance(p, ExactPolynomial) else ExactPolynomial(p)
    n = p.degree
    if n < 1:
        raise ValueError("polynomial must have degree at least 1")
    dmax = 2 * n if max_coeff_degree is None else max_coeff_degree
    system = _System(p)
    for k in range(1, n + 1):
        if not system.solve(k, dmax):
            continue
        for d in range(dmax + 1):
            basis = system.solve(k, d)
            if basis:
                ops = [_vector_to_operator(v, k, d) for v in basis]
                ops = [op for op in ops if op.order == k] or ops
                return min(ops, key=lambda op: op.order).normalized()
    raise DegreeBoundExceeded("degree bound exceeded")


def minimal_order(p, max_coeff_degree: int | None = None) -> int:
    return fuchsian_annihilator(p, max_coeff_degree).order


def check_annihilation(L: LinearDifferentialOperator, p: ExactPolynomial) -> bool:
    """Exact identity check ``sum_j (q_j o p) r_j == 0`` after clearing p'."""
    k = L.order
    system = _System(p)
    if k > system.n:
        system.numerators = inverse_derivative_numerators(p, k)
    total = ExactPolynomial()
    for j, q in enumerate(L.coeffs):
        total = total + q.compose(p) * system.multiplier(j, k)
    return total.is_zero()


def centered(p: ExactPolynomial) -> ExactPolynomial:
    """Translate ``p`` so that its coefficient of ``x^(n-1)`` vanishes."""
    n = p.degree
    if n < 2:
        return p
    return p.shift(-p[n - 1] / (n * p[n]))


# ---------------------------------------------------------------------------
# numeric route


def _scaled_matrix(germs, radius: float | None = None) -> tuple:
    coeffs = np.array([np.asarray(g.coefficients, dtype=complex) for g in germs])
    n = coeffs.shape[1]
    if radius is None:
        growth = 0.0
        for j in range(max(1, n // 2), n):
            col = np.max(np.abs(coeffs[:, j]))
            if col > 0:
                growth = max(growth, col ** (1.0 / j))
        radius = 1.0 / growth if growth > 0 else 1.0
    scaled = coeffs * radius ** np.arange(n)
    return scaled, radius


def series_rank(germs, tol: float = 1e-8, radius: float | None = None) -> int:
    """Numerical dimension of the span of ``germs`` (relative singular values)."""
    scaled, _ = _scaled_matrix(germs, radius)
    s = np.linalg.svd(scaled, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def _independent_subset(scaled: np.ndarray, r: int) -> list:
    _, _, piv = scipy.linalg.qr(scaled.T, pivoting=True, mode="economic")
    return sorted(piv[:r].tolist())


def _series_det(mat: list, m: int) -> np.ndarray:
    """Determinant of a square matrix of truncated series (Laplace with memo)."""
    size = len(mat)

    @lru_cache(maxsize=None)
    def det(row: int, cols: tuple) -> np.ndarray:
        if row == size:
            out = np.zeros(m, dtype=complex)
            out[0] = 1
            return out
        acc = np.zeros(m, dtype=complex)
        for pos, c in enumerate(cols):
            rest = cols[:pos] + cols[pos + 1 :]
            term = series_mul(mat[row][c], det(row + 1, rest), m)
            acc = acc - term if pos % 2 else acc + term
        return acc

    return det(0, tuple(range(size)))


def wronskian_cofactors(germs, radius: float = 1.0) -> list:
    """Series (in ``u = (x - x0)/radius``) of the y^(j) cofactors, j = 0..k."""
    k = len(germs)
    n = germs[0].truncation_order
    m = n - k
    if m < 2:
        raise ValueError("increase truncation")
    derivs = []
    for g in germs:
        c = np.asarray(g.coefficients, dtype=complex) * radius ** np.arange(n)
        rows = [c]
        for _ in range(k):
            c = c[1:] * np.arange(1, len(c))
            rows.append(c)
        derivs.append([r[:m] for r in rows])
    cof = []
    for j in range(k + 1):
        mat = [[derivs[i][r] for i in range(k)] for r in range(k + 1) if r != j]
        sign = -1 if j % 2 else 1
        cof.append(sign * _series_det(mat, m))
    return cof


def _growth_radius(series: list) -> float:
    m = len(series[0])
    growth = 0.0
    for a in series:
        mag = np.abs(a)
        for j in range(max(1, m // 2), m):
            if mag[j] > 0:
                growth = max(growth, mag[j] ** (1.0 / j))
    return 1.0 / growth if growth > 0 else 1.0


def _simultaneous_pade(monic: list, degree: int, tol: float):
    """Find Q, P_j of degree <= degree with Q*a_j - P_j = O(u^M) for all j."""
    k = len(monic)
    nunk = (degree + 1) * (k + 1)
    # high-order terms carry the most rounding noise; use about twice the
    # number of conditions needed
    m = min(len(monic[0]), 2 * (-(-nunk // k)) + 10)
    if k * m < nunk + 4:
        return None
    blocks = []
    for j, a in enumerate(monic):
        conv = np.zeros((m, degree + 1), dtype=complex)
        for i in range(degree + 1):
            conv[i:, i] = a[: m - i]
        pblock = np.zeros((m, (degree + 1) * k), dtype=complex)
        pblock[: degree + 1, j * (degree + 1) : (j + 1) * (degree + 1)] = -np.eye(degree + 1)
        blocks.append(np.hstack([conv, pblock]))
    A = np.vstack(blocks)
    colscale = np.max(np.abs(A), axis=0)
    colscale[colscale == 0] = 1
    _, s, vh = np.linalg.svd(A / colscale)
    v = vh[-1].conj() / colscale
    resid = np.abs(A @ v)
    size = np.abs(A) @ np.abs(v)
    if np.max(resid) > tol * max(np.max(size), 1e-300):
        return None
    q = v[: degree + 1]
    ps = [v[(degree + 1) * (j + 1) : (degree + 1) * (j + 2)] for j in range(k)]
    return q, ps


def _rationalize(coeffs: list, max_den: int, tol: float):
    """Recognise a numeric operator as a multiple of an integer one.

    The coefficient vector is divided by its smallest nonzero entry and a
    common denominator is built up entry by entry.  Denominators are capped
    so that every recognition is meaningful at the estimated accuracy
    ``tol * max|entry|``; the integer vector is accepted only if every
    entry lands within ``1e-4`` of an integer.
    """
    flat = np.concatenate(coeffs)
    scale = float(np.max(np.abs(flat)))
    if scale == 0:
        return None
    nz = np.abs(flat) > 1e3 * tol * scale
    pivot = flat[nz][np.argmin(np.abs(flat[nz]))]
    ratios = flat / pivot
    big = float(np.max(np.abs(ratios)))
    if np.max(np.abs(ratios.imag)) > 10 * tol * big:
        return None
    err = tol * big
    den = 1
    for x in sorted(ratios.real[nz], key=abs):
        y = x * den
        bound = min(max_den // den, int((0.01 / (err * den)) ** 0.5))
        if bound < 1:
            return None
        den *= Fraction(float(y)).limit_denominator(bound).denominator
    if den > max_den:
        return None
    ints = np.where(nz, np.round(ratios.real * den), 0)
    if np.max(np.abs(ratios.real * den - ints)) > 1e-4:
        return None
    out = []
    pos = 0
    for c in coeffs:
        out.append(ExactPolynomial([int(v) for v in ints[pos : pos + len(c)]]))
        pos += len(c)
    return LinearDifferentialOperator(out).normalized()


def wronskian_annihilator(
    germs,
    rank_tol: float = 1e-8,
    max_degree: int | None = None,
    fit_tol: float = 1e-9,
    rationalize: bool = True,
    max_den: int = 10**6,
):
    """Operator whose solution space is spanned by ``germs``.

    A maximal independent subset is chosen by pivoted QR of the scaled
    coefficient matrix; the operator comes from the Wronskian cofactors and
    its monic coefficients are fitted by a common-denominator Padé
    approximant.  Returns a :class:`LinearDifferentialOperator` when every
    coefficient is recognised as rational, a
    :class:`NumericDifferentialOperator` otherwise.
    """
    germs = list(germs)
    base = germs[0].base_point
    scaled, radius = _scaled_matrix(germs)
    s = np.linalg.svd(scaled, compute_uv=False)
    r = int(np.sum(s > rank_tol * s[0]))
    if r < len(s) and s[r - 1] < 1e3 * rank_tol * s[0]:
        raise ValueError("increase truncation")
    chosen = [germs[i] for i in _independent_subset(scaled, r)]
    cof = wronskian_cofactors(chosen, radius)
    lead = cof[-1]
    if abs(lead[0]) <= 1e-10 * np.max(np.abs(lead)):
        raise ValueError("base point is an apparent singularity; choose another")
    m = len(lead)
    monic = [series_div(c, lead, m) for c in cof[:-1]]
    # poles of the monic coefficients (apparent singularities included) may
    # sit closer than the critical values; rescale by their own growth
    rho = _growth_radius(monic)
    monic = [a * rho ** np.arange(m) for a in monic]
    dmax = 2 * len(germs) if max_degree is None else max_degree
    fit = None
    for d in range(dmax + 1):
        fit = _simultaneous_pade(monic, d, fit_tol)
        if fit is not None:
            break
    if fit is None:
        raise ValueError("increase truncation")
    q, ps = fit
    q = q * rho ** -np.arange(len(q))
    ps = [pj * rho ** -np.arange(len(pj)) for pj in ps]
    k = r
    # back from u = h / radius to h, then from h to x = x0 + h
    hscale = radius ** -np.arange(len(q))
    coeffs = [taylor_shift(pj * hscale * radius**j, -base) for j, pj in enumerate(ps)]
    coeffs.append(taylor_shift(q * hscale * radius**k, -base))
    numeric = NumericDifferentialOperator(coeffs)
    if rationalize:
        exact = _rationalize(numeric.to_complex(), max_den, fit_tol)
        if exact is not None:
            return exact
    return numeric


def _critical_values(c: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    if n < 2:
        return np.array([0j])
    dc = c[1:] * np.arange(1, n + 1)
    return np.polyval(c[::-1], np.roots(dc[::-1]))


def _fit_sampled(samples: np.ndarray, monic: np.ndarray, degree: int, tol: float):
    """Common-denominator fit ``Q a_j = P_j`` through sampled values.

    Each equation is scaled to unit norm, which balances samples taken on
    circles of very different radii.  Returns ``(Q, [P_j])`` or ``None``.
    """
    npts, k = monic.shape
    vander = samples[:, None] ** np.arange(degree + 1)
    size = np.max(np.abs(monic), axis=0)
    # an identically zero coefficient is pure noise: do not amplify it
    zero = size < 1e-12 * max(float(np.max(size)), 1e-300)
    live = [j for j in range(k) if not zero[j]]
    if not live:
        q = np.zeros(degree + 1, dtype=complex)
        q[0] = 1
        return q, [np.zeros(degree + 1, dtype=complex) for _ in range(k)]
    w = degree + 1
    A = np.zeros((npts * len(live), w * (len(live) + 1)), dtype=complex)
    for pos, j in enumerate(live):
        rows = slice(pos * npts, (pos + 1) * npts)
        A[rows, :w] = vander * monic[:, j, None]
        A[rows, w * (pos + 1) : w * (pos + 2)] = -vander
    A /= np.linalg.norm(A, axis=1)[:, None]
    _, s, vh = np.linalg.svd(A, full_matrices=False)
    if s[-1] > tol * s[0]:
        return None
    v = vh[-1].conj()
    ps = [np.zeros(w, dtype=complex) for _ in range(k)]
    for pos, j in enumerate(live):
        ps[j] = v[w * (pos + 1) : w * (pos + 2)]
    return v[:w], ps


def _sampled_monic(c: np.ndarray, points: np.ndarray, r: int, scale: float) -> np.ndarray:
    """Monic coefficients (in ``u = (x - centre)/scale``) of the span at each point."""
    fact = np.array([float(np.prod(range(1, j + 1))) for j in range(r + 1)])
    out = np.empty((len(points), r), dtype=complex)
    for i, x in enumerate(points):
        germs = power_series_inverses(c, x, r + 1)
        w = np.array([g.coefficients for g in germs], dtype=complex) * (scale ** np.arange(r + 1) * fact)
        # any r independent inverses span the same space; take the best r
        _, _, piv = scipy.linalg.qr(w[:, :r].T, pivoting=True, mode="economic")
        mat = w[sorted(piv[:r])].T
        cof = [(-1) ** j * np.linalg.det(np.delete(mat, j, axis=0)) for j in range(r + 1)]
        out[i] = np.array(cof[:r]) / cof[r]
    return out


def _mp_inverse_jets(c: list, x, r: int, guesses: np.ndarray) -> list:
    """Taylor coefficients ``g_0..g_r`` of every local inverse at ``x`` (mpmath)."""
    n = len(c) - 1
    dc = [c[k] * k for k in range(1, n + 1)]
    out = []
    for guess in guesses:
        t = mpmath.mpc(complex(guess))
        for _ in range(200):
            step = (mpmath.polyval(c[::-1], t) - x) / mpmath.polyval(dc[::-1], t)
            t -= step
            if abs(step) <= abs(t) * mpmath.eps * 4 or step == 0:
                break
        # Taylor coefficients of p at t, then reversion of w = sum b_k h^k
        b = list(c)
        for i in range(n):
            for k in range(n - 1, i - 1, -1):
                b[k] += t * b[k + 1]
        g = [mpmath.mpc(0)] * (r + 1)
        g[0] = t
        for m in range(1, r + 1):
            # coefficient of w^m in sum_k b_k h^k using g[1..m-1]
            acc = mpmath.mpc(0)
            power = [mpmath.mpc(0)] * (r + 1)
            power[0] = mpmath.mpc(1)
            for k in range(1, min(n, m) + 1):
                nxt = [mpmath.mpc(0)] * (r + 1)
                for i, pi in enumerate(power):
                    if pi == 0:
                        continue
                    for j in range(1, m - i + 1):
                        nxt[i + j] += pi * g[j]
                power = nxt
                acc += b[k] * power[m]
            g[m] = ((1 if m == 1 else 0) - acc) / b[1]
        out.append(g)
    return out


def _mp_sampled_monic(c: list, centre, scale, points: np.ndarray, r: int) -> list:
    cd = [complex(v) for v in c]
    fact = [mpmath.factorial(j) for j in range(r + 1)]
    rows = []
    for u in points:
        x = centre + scale * mpmath.mpc(complex(u))
        guesses = np.roots((np.array(cd) - np.eye(len(cd))[0] * complex(x))[::-1])
        jets = _mp_inverse_jets(c, x, r, guesses)
        w = [[g[j] * scale**j * fact[j] for j in range(r + 1)] for g in jets]
        approx = np.array([[complex(v) for v in row[:r]] for row in w])
        _, _, piv = scipy.linalg.qr(approx.T, pivoting=True, mode="economic")
        chosen = [w[i] for i in sorted(piv[:r])]
        cof = []
        for j in range(r + 1):
            mat = mpmath.matrix([[row[i] for row in chosen] for i in range(r + 1) if i != j])
            cof.append((-1) ** j * mpmath.det(mat) if r else mpmath.mpc(1))
        rows.append([cj / cof[r] for cj in cof[:r]])
    return rows


def _mp_fit(points: np.ndarray, monic: list, live: list, degree: int, tol):
    """Least-squares fit with ``Q(anchor) = 1``; ``None`` if the residual is too big."""
    w = degree + 1
    ncols = w * (len(live) + 1)
    need = 3 * ncols
    stride = max(1, len(points) * len(live) // need)
    eqs = [(i, j) for j in live for i in range(len(points))][::stride]
    A = mpmath.matrix(len(eqs) + 1, ncols)
    rhs = mpmath.matrix(len(eqs) + 1, 1)
    for row, (i, j) in enumerate(eqs):
        u = mpmath.mpc(complex(points[i]))
        pos = live.index(j)
        powers = [u**t for t in range(w)]
        vals = [monic[i][j] * pw for pw in powers] + [-pw for pw in powers]
        norm = mpmath.sqrt(mpmath.fsum(abs(v) ** 2 for v in vals))
        for t in range(w):
            A[row, t] = vals[t] / norm
            A[row, w * (pos + 1) + t] = vals[w + t] / norm
    anchor = mpmath.mpc(0.31, 0.17)
    for t in range(w):
        A[len(eqs), t] = anchor**t
    rhs[len(eqs)] = 1
    x, res = mpmath.qr_solve(A, rhs)
    if res > tol:
        return None
    k = len(monic[0])
    q = [x[t] for t in range(w)]
    ps = [[mpmath.mpc(0)] * w for _ in range(k)]
    for pos, j in enumerate(live):
        ps[j] = [x[w * (pos + 1) + t] for t in range(w)]
    return q, ps


def _mp_to_x(coeffs: list, scale, centre, power: int) -> np.ndarray:
    """``sum c_t u^t`` with ``u = (x - centre)/scale``, times ``scale**power``, in ``x``."""
    out = [v * scale ** (power - t) for t, v in enumerate(coeffs)]
    # Taylor shift h -> x - centre by repeated synthetic division
    n = len(out) - 1
    for i in range(n):
        for k in range(n - 1, i - 1, -1):
            out[k] -= centre * out[k + 1]
    return np.array([complex(v) for v in out])


def sampled_annihilator(
    coeffs,
    rank_tol: float = 1e-8,
    max_degree: int | None = None,
    fit_tol: float = 1e-11,
    rationalize: bool = True,
    max_den: int = 10**6,
    precision: int = 53,
):
    """Wronskian operator of the inverses of a polynomial, fitted from samples.

    The monic coefficients ``C_j / C_k`` do not depend on which basis of the
    span is used, so they can be evaluated from the full fibre at any
    regular point.  They are sampled on geometrically spaced circles around
    the critical values and fitted as rational functions; the fit is
    accepted only once it also matches on a circle beyond the outermost
    one, so apparent singularities far from the critical values are found.
    Unlike :func:`wronskian_annihilator` no single base point has to see
    every pole.

    In double precision an apparent singularity inside a tight cluster of
    critical values can cancel against a numerator zero to about ``1e-14``
    and go unseen.  With ``precision > 53`` (bits) the double fit only
    supplies a starting degree; samples and fit are then redone in
    mpmath.  Return types match :func:`wronskian_annihilator`.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    n = len(c) - 1
    if n < 1:
        raise ValueError("polynomial must have degree at least 1")
    r = series_rank(inverse_germs(c), rank_tol)
    values = _critical_values(c)
    centre = complex(np.mean(values))
    scale = max(1.0, float(np.max(np.abs(values - centre))))
    dmax = 3 * n if max_degree is None else max_degree
    per_circle = 2 * (dmax + 1) + 4
    ring = np.exp(2j * np.pi * (np.arange(per_circle) + 0.37) / per_circle)
    radii = [1.7]
    fit = None
    while radii[-1] < 1e8:
        radii = radii + [radii[-1] * 3.0, radii[-1] * 9.0]
        u = np.concatenate([rho * ring * np.exp(0.5j * m) for m, rho in enumerate(radii)])
        monic = _sampled_monic(c, centre + scale * u, r, scale)
        for d in range(dmax + 1):
            fit = _fit_sampled(u, monic, d, fit_tol)
            if fit is not None:
                break
        if fit is None:
            raise ValueError("no rational fit for the sampled coefficients")
        q, ps = fit
        check = radii[-1] * 5.0 * ring[::3] * np.exp(0.2j)
        want = _sampled_monic(c, centre + scale * check, r, scale)
        got = np.array([np.polyval(pj[::-1], check) for pj in ps]).T / np.polyval(q[::-1], check)[:, None]
        if np.max(np.abs(got - want)) <= 1e-7 * max(float(np.max(np.abs(want))), 1e-300):
            break
    else:
        raise ValueError("no rational fit for the sampled coefficients")
    if precision > 53:
        with mpmath.workprec(precision):
            cm = [mpmath.mpc(complex(v)) for v in coeffs]
            while cm and cm[-1] == 0:
                cm.pop()
            mono = _mp_sampled_monic(cm, mpmath.mpc(centre), mpmath.mpf(scale), u, r)
            size = [max(abs(row[j]) for row in mono) for j in range(r)]
            live = [j for j in range(r) if size[j] > mpmath.mpf(2) ** (-precision // 2) * max(size)]
            tol = mpmath.mpf(2) ** (-(precision * 3) // 4)
            for d in range(len(q) - 1, dmax + 1):
                fit = _mp_fit(u, mono, live, d, tol)
                if fit is not None:
                    break
            else:
                raise ValueError("no rational fit for the sampled coefficients")
            q, ps = fit
            cen, sc = mpmath.mpc(centre), mpmath.mpf(scale)
            out = [_mp_to_x(pj, sc, cen, j) for j, pj in enumerate(ps)]
            out.append(_mp_to_x(q, sc, cen, r))
        return _finish(out, rationalize, max_den)
    # u = h / scale, h = x - centre; d/du = scale d/dx
    hscale = scale ** -np.arange(len(q))
    out = [taylor_shift(pj * hscale * scale**j, -centre) for j, pj in enumerate(ps)]
    out.append(taylor_shift(q * hscale * scale**r, -centre))
    return _finish(out, rationalize, max_den, scale)


def _finish(coeffs: list, rationalize: bool, max_den: int, scale: float | None = None):
    coeffs = [np.array([complex(a) for a in c], dtype=complex) for c in coeffs]
    if scale is not None:
        # double round-off: parts far below the largest term on |x| = scale
        weights = [scale ** np.arange(len(c)) for c in coeffs]
        top = max(float(np.max(np.abs(c) * w)) for c, w in zip(coeffs, weights) if len(c))
        for c, w in zip(coeffs, weights):
            floor = 1e-14 * top / w
            c.real[np.abs(c.real) < floor] = 0
            c.imag[np.abs(c.imag) < floor] = 0
    numeric = NumericDifferentialOperator(coeffs)
    if rationalize:
        exact = _rationalize(numeric.to_complex(), max_den, 1e-9)
        if exact is not None:
            return exact
    return numeric


def inverse_germs(coeffs, order: int | None = None) -> list:
    """Local inverses of a polynomial at a well-conditioned regular base point.

    Candidates lie on circles around the centroid of the critical values.
    The chosen one maximises the Hadamard ratio of the leading Taylor
    coefficients of the inverses, i.e. it stays clear of critical values
    and of points where the inverses are nearly dependent.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    n = len(c) - 1
    if n < 1:
        raise ValueError("polynomial must have degree at least 1")
    if order is None:
        order = 4 * n + 10
    dc = c[1:] * np.arange(1, n + 1)
    crit = np.roots(dc[::-1]) if n > 1 else np.array([])
    values = np.polyval(c[::-1], crit) if len(crit) else np.array([0j])
    centre = np.mean(values)
    spread = max(1.0, float(np.max(np.abs(values - centre))))
    best, best_score = None, -1.0
    for ring in (0.5, 1.0, 1.5):
        for j in range(8):
            x0 = centre + ring * spread * np.exp(1j * (0.9 + j * np.pi / 4))
            if np.min(np.abs(values - x0)) < 0.2 * spread:
                continue
            germs = power_series_inverses(c, x0, n + 1)
            scaled, _ = _scaled_matrix(germs, np.min(np.abs(values - x0)))
            mat = scaled[:, :n]
            norms = np.prod(np.linalg.norm(mat, axis=1))
            score = abs(np.linalg.det(mat)) / norms if norms else 0.0
            if score > best_score:
                best, best_score = x0, score
    return power_series_inverses(c, best, order)


# ---------------------------------------------------------------------------
# affine changes of variable


def pullback_affine(
    L: LinearDifferentialOperator,
    phi_scale=1,
    phi_shift=0,
    psi_scale=1,
    psi_shift=0,
) -> LinearDifferentialOperator:
    """Operator for the inverses of ``psi o P o phi`` given ``L`` for ``P``.

    Here ``phi(x) = phi_scale*x + phi_shift`` and ``psi(x) = psi_scale*x +
    psi_shift``.  The inverses of the new polynomial are
    ``(sigma((x - psi_shift)/psi_scale) - phi_shift)/phi_scale``; a constant
    shift is only harmless when ``q_0 = 0``, otherwise the order goes up by
    one.  No normalisation is applied to the result.
    """
    a, b = as_fraction(phi_scale), as_fraction(phi_shift)
    c, d = as_fraction(psi_scale), as_fraction(psi_shift)
    if a == 0 or c == 0:
        raise ValueError("affine scales must be nonzero")
    inner = ExactPolynomial([-d / c, 1 / c])
    coeffs = [q.compose(inner) * c**j for j, q in enumerate(L.coeffs)]
    if b == 0 or coeffs[0].is_zero():
        return LinearDifferentialOperator(coeffs)
    # L(h) = -b q_0 for h = g - b; annihilate with q_0 (L h)' - q_0' (L h)
    q0 = coeffs[0]
    dq0 = q0.derivative()
    new = [ExactPolynomial()] * (len(coeffs) + 1)
    for j, q in enumerate(coeffs):
        new[j + 1] = new[j + 1] + q0 * q
        new[j] = new[j] + q0 * q.derivative() - dq0 * q
    return LinearDifferentialOperator(new)
