import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_monic
from dessin_rh import (
    ExactPolynomial,
    LinearDifferentialOperator,
    MultivariatePolynomial,
    UniversalOperator,
    fuchsian_annihilator,
    leading_coeff_factorization,
    pullback_affine,
    q_mk,
    specialize,
    universal_annihilator,
)
from dessin_rh.annihilator import check_annihilation
from dessin_rh.universal import (
    coefficient_names,
    coefficients_from_roots,
    determinant_cofactors,
    generic_discriminant,
    q_values,
    weighted_monomials,
)


def mpoly(expr: str, n: int) -> MultivariatePolynomial:
    names = coefficient_names(n)
    return MultivariatePolynomial.from_sympy(sympy.sympify(expr, locals={s: sympy.Symbol(s) for s in names}), names)


# -- Q_{m,k} ---------------------------------------------------------------------


def test_q_mk_examples():
    t1, t2 = sympy.symbols("t_1 t_2")
    assert sympy.simplify(q_mk(2, 1, 2).to_sympy() + 2 / (t1 - t2) ** 3) == 0
    assert sympy.simplify(q_mk(1, 1, 2).to_sympy() - 1 / (t1 - t2)) == 0
    assert sympy.simplify(q_mk(1, 2, 2).to_sympy() - 1 / (t2 - t1)) == 0
    with pytest.raises(ValueError):
        q_mk(1, 3, 2)
    with pytest.raises(ValueError):
        q_mk(0, 1, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_q_values_match_symbolic_q_mk(n):
    rng = random.Random(n)
    ts = [F(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(n)]
    while len(set(ts)) < n:
        ts = [F(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(n)]
    rows = q_values(ts, n)
    for m in range(1, n + 1):
        for k in range(1, n + 1):
            assert q_mk(m, k, n)(ts) == rows[m - 1][k - 1]


def test_q_mk_gives_root_derivatives():
    # implicit differentiation of P(t) = 0 in a_0: d^m t_k / da_0^m = (-1)^m Q_{m,k}
    t, a0 = sympy.symbols("t a_0")
    roots = [F(0), F(1), F(3)]
    a = coefficients_from_roots(roots)
    P = t**3 + a[2] * t**2 + a[1] * t + a0
    rows = q_values(roots, 3)
    for m in range(1, 4):
        deriv = sympy.idiff(P, t, a0, m)
        for k, root in enumerate(roots):
            value = deriv.subs({t: root, a0: a[0]})
            assert F(str(sympy.nsimplify(value))) == (-1) ** m * rows[m - 1][k]


def test_q_values_reject_repeated_roots():
    with pytest.raises(ZeroDivisionError):
        q_values([1, 1, 2], 3)


# -- small universal operators -------------------------------------------------------


def test_quadratic_operator_and_square_root():
    D = universal_annihilator(2)
    assert D[0].is_zero()
    assert specialize(D, ExactPolynomial([0, 0, 1])) == LinearDifferentialOperator(
        [ExactPolynomial(), ExactPolynomial([2]), ExactPolynomial([0, 4])]
    )
    assert str(specialize(D, ExactPolynomial([0, 0, 1]))) == "4*x*y'' + 2*y' = 0"


@pytest.mark.parametrize("n", [1, 6])
def test_unsupported_degrees(n):
    with pytest.raises(ValueError, match="unsupported degree"):
        universal_annihilator(n)


def test_specialize_rejects_mismatched_polynomials():
    D = universal_annihilator(3)
    with pytest.raises(ValueError, match="degree"):
        specialize(D, ExactPolynomial([1, 0, 1]))
    with pytest.raises(ValueError, match="monic"):
        specialize(D, ExactPolynomial([1, 0, 0, 2]))


def test_operator_validates_coefficients():
    names = coefficient_names(2)
    one = MultivariatePolynomial.constant(names, 1)
    with pytest.raises(ValueError):
        UniversalOperator(2, [one])
    with pytest.raises(ValueError):
        UniversalOperator(2, [one, MultivariatePolynomial(names)])
    with pytest.raises(ValueError):
        UniversalOperator(2, [one, MultivariatePolynomial.constant(coefficient_names(3), 1)])


def test_seed_does_not_change_the_result():
    assert universal_annihilator(3, seed=1) == universal_annihilator(3, seed=7)


# -- structure --------------------------------------------------------------------------


def weights_of(c: MultivariatePolynomial, n: int) -> set:
    return {sum(e * (n - j) for j, e in enumerate(exps)) for exps in c.terms}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_coefficients_are_weighted_homogeneous(n, quartic_operator):
    D = quartic_operator if n == 4 else universal_annihilator(n)
    top = weights_of(D[n], n)
    assert len(top) == 1
    (w,) = top
    for k in range(1, n + 1):
        assert weights_of(D[k], n) == {w - n * (n - k)}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_leading_coefficient_factorisation(n, quartic_operator):
    D = quartic_operator if n == 4 else universal_annihilator(n)
    disc, cof = leading_coeff_factorization(D)
    assert disc * cof == D[n]
    expected = {
        2: "1",
        3: "1",
        4: "45*a_1**2 + 8*a_0*a_2 + 14*a_2**3 - 47*a_1*a_2*a_3 - 3*a_0*a_3**2"
        " - 4*a_2**2*a_3**2 + 12*a_1*a_3**3",
    }[n]
    assert cof == mpoly(expected, n)


def test_discriminant_sign():
    assert generic_discriminant(2) == mpoly("a_1**2 - 4*a_0", 2)
    # squarefree real-rooted cubic: positive discriminant
    assert generic_discriminant(3)(coefficients_from_roots([0, 1, 2])) > 0


def test_cofactor_ratios_are_symmetric():
    ts = [F(2), F(-1), F(5), F(1, 2)]
    ref = determinant_cofactors(ts)
    for perm in ([1, 0, 2, 3], [3, 2, 1, 0], [0, 2, 3, 1]):
        other = determinant_cofactors([ts[i] for i in perm])
        assert all(ref[k] * other[4] == other[k] * ref[4] for k in range(5))
    assert ref[0] == 0


def test_weighted_monomials():
    assert weighted_monomials(2, 2) == ((0, 2), (1, 0))
    assert weighted_monomials(3, 1) == ((0, 0, 1),)
    assert weighted_monomials(3, -1) == ()


# -- specialisation ----------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_specialisations_annihilate_inverses(n, quartic_operator):
    D = quartic_operator if n == 4 else universal_annihilator(n)
    rng = random.Random(100 + n)
    for _ in range(20):
        p = random_monic(rng, n)
        assert check_annihilation(specialize(D, p), p)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_specialisation_matches_minimal_operator(n, quartic_operator):
    D = quartic_operator if n == 4 else universal_annihilator(n)
    rng = random.Random(200 + n)
    for _ in range(5):
        p = random_monic(rng, n)
        S, L = specialize(D, p), fuchsian_annihilator(p)
        if L.order == n:
            assert S.is_proportional(L)
        else:
            # e.g. (x - 1)^3 - 6: the inverses span only two dimensions
            assert L.order < n and check_annihilation(S, p)


def test_quartic_specialisation_is_reflected_tree_operator(quartic_operator):
    # t^4 - 4t^3 = -(4t^3 - t^4): the inverses are those of 4x^3 - x^4 at -x
    L = fuchsian_annihilator(ExactPolynomial([0, 0, 0, 4, -1]))
    reflected = pullback_affine(L, psi_scale=-1)
    assert specialize(quartic_operator, ExactPolynomial([0, 0, 0, -4, 1])).is_proportional(reflected)


def test_printed_quartic_fails_where_computed_succeeds(quartic_operator):
    from test_acceptance import printed_quartic

    printed = UniversalOperator(4, printed_quartic())
    p = ExactPolynomial([2, -1, 3, 1, 1])
    assert check_annihilation(specialize(quartic_operator, p), p)
    assert not check_annihilation(specialize(printed, p), p)
    diff = printed[2] - quartic_operator[2]
    assert diff == mpoly("224*a_1*a_2**3*a_3 - 493*a_1*a_2**2*a_3**3", 4) * F(60)


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@given(st.lists(coeffs, min_size=2, max_size=3))
def test_specialisation_annihilates_random_polynomials(cs):
    p = ExactPolynomial(list(cs) + [1])
    D = universal_annihilator(p.degree)
    assert check_annihilation(specialize(D, p), p)


# -- multivariate arithmetic -----------------------------------------------------------------


small = st.integers(-4, 4)


@given(st.lists(small, min_size=6, max_size=6), st.lists(small, min_size=6, max_size=6))
def test_polynomial_arithmetic_matches_sympy(u, v):
    names = coefficient_names(3)
    a0, a1, a2 = sympy.symbols(list(names))
    e1 = u[0] + u[1] * a0 + u[2] * a1 * a2 + u[3] * a2**2 + u[4] * a0 * a1 + u[5] * a1**3
    e2 = v[0] * a0 + v[1] * a1 + v[2] + v[3] * a2 * a0 + v[4] * a1**2 + v[5] * a2**3
    p, q = MultivariatePolynomial.from_sympy(e1, names), MultivariatePolynomial.from_sympy(e2, names)
    assert (p * q).to_sympy().expand() == sympy.expand(e1 * e2)
    assert (p - q).to_sympy().expand() == sympy.expand(e1 - e2)
    assert MultivariatePolynomial.from_sympy(p.to_sympy(), names) == p
    if not q.is_zero():
        assert (p * q).exact_div(q) == p
