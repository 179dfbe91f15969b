"""The universal operators D_2 and D_3 and what they specialise to.

D_n has coefficients polynomial in a_0 .. a_{n-1}; plugging in a monic
polynomial gives an operator in x = -a_0 that kills its inverses.
"""

from dessin_rh import ExactPolynomial, fuchsian_annihilator, leading_coeff_factorization, specialize, universal_annihilator
from dessin_rh.annihilator import check_annihilation

for n in (2, 3):
    D = universal_annihilator(n)
    print(f"D_{n}:")
    print(D.pretty())
    disc, cof = leading_coeff_factorization(D)
    print("leading coefficient = discriminant *", cof.to_sympy())
    print()

# t^3 - 3t is a chain: D_3 specialises to order 3, the minimal operator has order 2
p = ExactPolynomial([0, -3, 0, 1])
S = specialize(universal_annihilator(3), p)
print("specialised at t^3 - 3t:", S)
print("annihilates:", check_annihilation(S, p))
print("minimal operator:", fuchsian_annihilator(p))
