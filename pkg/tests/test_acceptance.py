"""Acceptance criteria 1-10.  Each test records a PASS/FAIL line that is
printed in the terminal summary."""

import random
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest
import sympy

from conftest import ACCEPTANCE, random_monic
from dessin_rh import (
    ExactPolynomial,
    LinearDifferentialOperator,
    MultivariatePolynomial,
    classify_tree,
    dessins_isomorphic,
    enumerate_plane_trees,
    family_chebyshev,
    family_star,
    family_two_star,
    fuchsian_annihilator,
    has_linear_rep_dim_le_2,
    inverse_germs,
    inverse_span_order,
    leading_coeff_factorization,
    minimal_order,
    moebius_representation,
    operator_residual,
    recover_dessin,
    shabat_for_tree,
    specialize,
    universal_annihilator,
    verify_riemann_hilbert,
    wronskian_annihilator,
)
from dessin_rh.annihilator import check_annihilation
from dessin_rh.diffop import numeric_proportional
from dessin_rh.universal import coefficient_names

DATA = Path(__file__).parent / "data"


@contextmanager
def criterion(num: int, label: str, note: str = ""):
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE[num] = (False, label, note or type(exc).__name__)
        raise
    prev = ACCEPTANCE.get(num)
    if prev is None or prev[0]:
        ACCEPTANCE[num] = (True, label, note)


def mpoly(expr: str, n: int) -> MultivariatePolynomial:
    names = coefficient_names(n)
    syms = {s: sympy.Symbol(s) for s in names}
    return MultivariatePolynomial.from_sympy(sympy.sympify(expr, locals=syms), names)


def op(*qs) -> LinearDifferentialOperator:
    return LinearDifferentialOperator([ExactPolynomial(q) for q in qs])


# -- universal operators ----------------------------------------------------------


def test_criterion_1_quadratic_universal():
    with criterion(1, "D_2 exact"):
        start = time.perf_counter()
        D = universal_annihilator(2, seed=11)
        elapsed = time.perf_counter() - start
        assert D[2] == mpoly("a_1**2 - 4*a_0", 2)
        assert D[1] == mpoly("-2", 2)
        assert D == universal_annihilator(2)
        assert elapsed < 1.0


def test_criterion_2_cubic_universal():
    with criterion(2, "D_3 exact"):
        start = time.perf_counter()
        D = universal_annihilator(3, seed=11)
        elapsed = time.perf_counter() - start
        assert D[3] == mpoly("a_1**2*a_2**2 - 4*a_0*a_2**3 - 4*a_1**3 + 18*a_0*a_1*a_2 - 27*a_0**2", 3)
        assert D[2] == mpoly("-(6*a_2**3 - 27*a_1*a_2 + 81*a_0)", 3)
        assert D[1] == mpoly("-24", 3)
        assert elapsed < 10.0


def printed_quartic() -> list:
    coeffs = {}
    for line in (DATA / "quartic_operator.txt").read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        k, expr = line.split(":", 1)
        coeffs[int(k)] = mpoly(expr, 4)
    return [coeffs[k] for k in range(1, 5)]


def test_criterion_3_cofactor_and_runtime(quartic_operator, quartic_seconds):
    with criterion(3, "D_4 exact", "printed d^2 coefficient has two misprinted terms"):
        disc, cof = leading_coeff_factorization(quartic_operator)
        assert cof == mpoly(
            "45*a_1**2 + 8*a_0*a_2 + 14*a_2**3 - 47*a_1*a_2*a_3 - 3*a_0*a_3**2"
            " - 4*a_2**2*a_3**2 + 12*a_1*a_3**3",
            4,
        )
        printed = printed_quartic()
        for k in (1, 3, 4):
            assert quartic_operator[k] == printed[k - 1]
        assert quartic_seconds < 600


@pytest.mark.xfail(
    strict=True,
    reason="the printed d^2 coefficient does not annihilate the roots; the computed one does",
)
def test_criterion_3_matches_printed_display(quartic_operator):
    with criterion(3, "D_4 exact", "printed d^2 coefficient has two misprinted terms"):
        assert list(quartic_operator.coeffs) == printed_quartic()


# -- concrete annihilators ------------------------------------------------------------


def test_criterion_4_quartic_tree_operator():
    with criterion(4, "4x^3 - x^4 operator"):
        start = time.perf_counter()
        L = fuchsian_annihilator(ExactPolynomial([0, 0, 0, 4, -1]))
        elapsed = time.perf_counter() - start
        expected = op([], [0, 45], [0, -1920, 270], [0, 0, -3456, 208], [0, 0, 0, -864, 32])
        assert L.is_proportional(expected)
        assert L.order == 4
        assert elapsed < 5.0


def test_criterion_5_families():
    from fractions import Fraction as F

    with criterion(5, "star, Chebyshev, 2-star families"):
        for n in range(1, 11):
            assert fuchsian_annihilator(family_star(n)) == op([-1], [0, n])
        for n in range(1, 9):
            cheb = op([F(1, n * n)], [0, -1], [1, 0, -1])
            T = family_chebyshev(n)
            assert check_annihilation(cheb, T)
            L = fuchsian_annihilator(T)
            if n >= 3:
                assert L.is_proportional(cheb)
            else:
                # T_1 and T_2 have proportional inverses; the Chebyshev
                # equation still holds but is not minimal
                assert L.order == 1
        for m in range(1, 7):
            gauss = op([F(1, 4 * m) * (1 - F(1, m))], [F(1, 2), F(1, m) - F(3, 2)], [0, 1, -1])
            assert fuchsian_annihilator(family_two_star(m)).is_proportional(gauss)


# -- tree suites ------------------------------------------------------------------------


def test_criterion_6_moebius_trees():
    with criterion(6, "Moebius trees are stars and chains (e <= 8)"):
        for e in range(1, 9):
            for d in enumerate_plane_trees(e):
                rep = moebius_representation(d)
                assert (rep is not None) == (classify_tree(d).kind in ("star", "chain"))
                if rep is not None:
                    assert dessins_isomorphic(rep.induced_dessin(1e-9), d, allow_swap=False)


@pytest.fixture(scope="module")
def small_trees():
    start = time.perf_counter()
    out = [(d, shabat_for_tree(d)[0]) for e in range(1, 7) for d in enumerate_plane_trees(e)]
    return out, time.perf_counter() - start


def test_criterion_7_order_two_trees(small_trees):
    with criterion(7, "order <= 2 iff star, 2-star or chain (e <= 6)"):
        trees, solve_seconds = small_trees
        start = time.perf_counter()
        for d, sol in trees:
            order, _ = inverse_span_order(sol.poly, rank_tol=1e-8)
            assert (order <= 2) == has_linear_rep_dim_le_2(d), str(classify_tree(d))
        assert solve_seconds + time.perf_counter() - start < 1800


def test_criterion_8_monodromy_round_trip(small_trees):
    with criterion(8, "monodromy round trip (e <= 6)"):
        trees, _ = small_trees
        for d, sol in trees:
            ok, _ = verify_riemann_hilbert(d, sol.poly, 1e-10)
            assert ok
            result = recover_dessin(sol.poly, 1e-10)
            assert result.certificate < 1e-10
            assert result.sigma_0.compose(result.sigma_1).cycle_type() == (d.edges,)


# -- random polynomials ----------------------------------------------------------------


def test_criterion_9_cross_construction(quartic_operator):
    with criterion(9, "universal, Wronskian and exact operators agree"):
        rng = random.Random(9)
        ops = {3: universal_annihilator(3), 4: quartic_operator}
        for n in (3, 4):
            for _ in range(20):
                p = random_monic(rng, n)
                germs = inverse_germs(p.to_complex())
                S = specialize(ops[n], p)
                assert max(operator_residual(S, g) for g in germs) < 1e-9
                F = fuchsian_annihilator(p)
                W = wronskian_annihilator(germs)
                if isinstance(W, LinearDifferentialOperator):
                    assert W.is_proportional(F)
                else:
                    assert numeric_proportional(W, F, tol=1e-6)


def test_criterion_10_constant_solution():
    with criterion(10, "q_0 = 0 / order drop from the penultimate coefficient"):
        rng = random.Random(10)
        for i in range(50):
            n = 2 + i % 4
            assert fuchsian_annihilator(random_monic(rng, n))[0].is_zero()
            assert minimal_order(random_monic(rng, n, penultimate_zero=True)) < n


def test_residual_scale_sanity():
    # guards criterion 9 against a vacuous residual: a wrong operator must fail
    p = ExactPolynomial([2, -1, 3, 1])
    germs = inverse_germs(p.to_complex())
    wrong = op([1], [0, 1], [1])
    assert max(operator_residual(wrong, g) for g in germs) > 1e-3
    assert np.isfinite(max(operator_residual(specialize(universal_annihilator(3), p), g) for g in germs))
