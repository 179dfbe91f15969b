import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dessin_rh import (
    ComplexPolynomial,
    ExactPolynomial,
    NoSolutionError,
    NotShabatError,
    ValencyData,
    enumerate_plane_trees,
    family_chebyshev,
    family_star,
    family_two_star,
    solve_shabat,
    verify_shabat,
)
from dessin_rh.shabat import cluster_radius, cluster_roots

QUARTIC = ExactPolynomial([0, 0, 0, 4, -1])


def close_set(found, expected, tol=1e-8):
    found = sorted(found, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    expected = sorted(expected, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    return len(found) == len(expected) and all(abs(a - b) < tol for a, b in zip(found, expected))


# -- families --------------------------------------------------------------------


def test_family_examples():
    assert family_chebyshev(3) == ExactPolynomial([0, -3, 0, 4])
    assert family_two_star(2) == ExactPolynomial([1, 0, -2, 0, 1])
    assert family_star(1) == ExactPolynomial([0, 1])
    for fam in (family_star, family_chebyshev, family_two_star):
        with pytest.raises(ValueError):
            fam(0)


def test_chebyshev_matches_cosine():
    for n in range(1, 9):
        T = family_chebyshev(n)
        for x in np.linspace(-1, 1, 7):
            assert float(T(Fraction(x))) == pytest.approx(np.cos(n * np.arccos(x)), abs=1e-12)


@pytest.mark.parametrize("n", range(1, 11))
def test_families_have_expected_valencies(n):
    assert verify_shabat(family_star(n)).valency_data() == ValencyData((n,), (1,) * n)
    # T_n = +-1 at cos(k pi / n): interior points are double, k = 0, n simple
    over_plus = (2,) * ((n - 1) // 2) + (1,) * (1 + (n % 2 == 0))
    over_minus = (2,) * (n // 2) + (1,) * (n % 2)
    cheb = verify_shabat(family_chebyshev(n)).valency_data()
    assert {cheb.alpha, cheb.beta} == {over_plus, over_minus}
    two = verify_shabat(family_two_star(n)).valency_data()
    assert two == ValencyData((2,) * n, (n,) + (1,) * n)


# -- verification ---------------------------------------------------------------------


def test_verify_quartic_tree():
    sol = verify_shabat(QUARTIC)
    assert close_set(sol.critical_values, [0, 27])
    black = dict((round(z.real, 6), m) for z, m in sol.black_vertices)
    assert black == {0.0: 3, 4.0: 1}
    white = [z for z, _ in sol.white_vertices]
    assert close_set(white, [3, -1 + 1j * 2**0.5, -1 - 1j * 2**0.5], 1e-6)
    assert sorted(m for _, m in sol.white_vertices) == [1, 1, 2]
    assert sol.residual < 1e-10


def test_verify_single_critical_value():
    sol = verify_shabat(ExactPolynomial([0, 0, 0, 1]))
    assert sol.valency_data() == ValencyData((3,), (1, 1, 1))
    assert abs(sol.critical_values[0]) < 1e-12


def test_verify_accepts_two_critical_values():
    # x^3 + x has critical values +-2i/(3 sqrt 3): a chain with three edges
    sol = verify_shabat(ExactPolynomial([0, 1, 0, 1]))
    v = 2 / (3 * 3**0.5)
    assert close_set(sol.critical_values, [1j * v, -1j * v])
    assert sol.valency_data() == ValencyData((2, 1), (2, 1))


def test_verify_rejects_three_critical_values():
    with pytest.raises(NotShabatError, match="not a Shabat polynomial"):
        verify_shabat(ExactPolynomial([0, 1, 0, 0, 1]))


def test_fixed_critical_values_fix_colouring():
    sol = verify_shabat(QUARTIC, critical_values=(27, 0))
    assert sol.valency_data() == ValencyData((2, 1, 1), (3, 1))


# -- solver -----------------------------------------------------------------------------


def test_solve_quartic_tree():
    sols = solve_shabat(ValencyData((3, 1), (2, 1, 1)), range(16))
    assert sols
    p = sols[0].poly
    # monic gauge: x^4 - (4/3) x^3, and 81 p(x/3) = -(4x^3 - x^4)
    assert np.allclose(p.coeffs, [0, 0, 0, -4 / 3, 1], atol=1e-9)
    q = np.polynomial.Polynomial(p.coeffs)(np.polynomial.Polynomial([0, 1 / 3])) * 81
    assert np.allclose(q.coef, [0, 0, 0, -4, 1], atol=1e-8)


def test_solve_star_puts_white_vertices_on_circle():
    sol = solve_shabat(ValencyData((5,), (1,) * 5), range(4))[0]
    radii = [abs(z) for z, _ in sol.white_vertices]
    assert max(radii) - min(radii) < 1e-8
    assert np.allclose(sol.poly.coeffs[:-1], 0, atol=1e-9)


def test_solve_quadratic():
    sol = solve_shabat(ValencyData((1, 1), (2,)), range(4))[0]
    assert sol.poly.degree == 2
    assert sol.valency_data() in (ValencyData((2,), (1, 1)), ValencyData((1, 1), (2,)))


def test_no_seed_means_no_solution():
    with pytest.raises(NoSolutionError, match="no solution found"):
        solve_shabat(ValencyData((3, 1), (2, 1, 1)), [])


def test_extended_precision_residual():
    sol = solve_shabat(ValencyData((3, 1), (2, 1, 1)), range(8), precision=106)[0]
    assert sol.residual < 1e-30


def test_valency_data_invariants():
    with pytest.raises(ValueError):
        ValencyData((3,), (1, 1))
    with pytest.raises(ValueError):
        ValencyData((2, 2), (2, 2))  # p + q != e + 1
    with pytest.raises(ValueError):
        ValencyData((0, 2), (1, 1))


@pytest.mark.parametrize("e", range(2, 7))
def test_solve_then_verify_round_trip(e):
    for val in {ValencyData.from_dessin(d) for d in enumerate_plane_trees(e)}:
        for sol in solve_shabat(val, range(32)):
            assert sol.poly.degree == e
            again = verify_shabat(sol.poly).valency_data()
            assert {again.alpha, again.beta} == {val.alpha, val.beta}
            # derivative has roots of multiplicity valency - 1 at the vertices
            crit = [m - 1 for _, m in sol.black_vertices + sol.white_vertices if m > 1]
            assert sum(crit) == e - 1


affine = st.complex_numbers(min_magnitude=0.3, max_magnitude=3, allow_nan=False, allow_infinity=False)
shift = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


SAMPLES = [
    QUARTIC,
    family_chebyshev(5),
    family_two_star(3),
    ExactPolynomial([0, 0, 0, Fraction(25, 9), Fraction(-10, 3), 1]),
]


@given(st.sampled_from(SAMPLES), affine, shift, affine, shift)
def test_affine_equivalence_preserves_valencies(p, a, b, c, d):
    base = verify_shabat(p).valency_data()
    P = np.polynomial.Polynomial([complex(x) for x in p.coeffs])
    q = c * P(np.polynomial.Polynomial([b, a])) + d
    val = verify_shabat(ComplexPolynomial(tuple(q.coef)), tol=1e-9).valency_data()
    assert {val.alpha, val.beta} == {base.alpha, base.beta}


# -- utilities ------------------------------------------------------------------------------


def test_cluster_roots_multiplicities():
    roots = np.roots(np.poly([1.0, 1.0, 1.0, -2.0, 0.5j]))
    groups = cluster_roots(roots, 1e-12)
    mult = {round(z.real, 4) + 1j * round(z.imag, 4): m for z, m in groups}
    assert mult == {1: 3, -2: 1, 0.5j: 1}
    assert cluster_radius(3, 1e-12) == pytest.approx(1e-4)
    assert cluster_radius(1, 1e-12) == 1e-6


def test_centered_and_rationalised_polynomials():
    p = ComplexPolynomial((0, 0, 0, -4 / 3, 1))
    c = p.centered()
    assert abs(c.coeffs[3]) < 1e-15
    for x in (0.3, 1.7 - 0.2j):
        assert abs(c(x) - p(x + 1 / 3)) < 1e-12
    assert p.to_exact() == ExactPolynomial([0, 0, 0, Fraction(-4, 3), 1])
    golden = (1 + 5**0.5) / 2
    assert ComplexPolynomial((golden, 1)).to_exact() is None
    assert ComplexPolynomial((1j, 1)).to_exact() is None


def test_complex_polynomial_trims_and_evaluates():
    p = ComplexPolynomial((1, 2, 0, 0))
    assert p.degree == 1 and p(cmath.sqrt(-1)) == 1 + 2j
