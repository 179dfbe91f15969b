"""Walk one plane tree through the whole pipeline.

Tree with black valencies (3, 1) and white valencies (2, 1, 1):
solve for its Shabat polynomial, build the operator killing the local
inverses, then loop around 0 and the other critical value to get the
tree back.
"""

from dessin_rh import (
    Dessin,
    ExactPolynomial,
    classify_tree,
    fuchsian_annihilator,
    recover_dessin,
    shabat_for_tree,
    verify_riemann_hilbert,
)

tree = Dessin.from_cycles([[0, 1, 2], [3]], [[2, 3]], 4)
print("tree:", classify_tree(tree))

sol, _ = shabat_for_tree(tree)
print("monic Shabat polynomial:", sol.poly.to_exact())
print("critical values:", [complex(round(v.real, 9), round(v.imag, 9)) for v in sol.critical_values])

# the same tree in integer normalisation
p = ExactPolynomial([0, 0, 0, 4, -1])
L = fuchsian_annihilator(p)
print("operator:", L)
print("order", L.order, "q_0 = 0:", L[0].is_zero())

res = recover_dessin(p)
print("sigma_0:", res.sigma_0.cycles(), "sigma_1:", res.sigma_1.cycles())
print("certificate:", f"{res.certificate:.1e}")
ok, _ = verify_riemann_hilbert(tree, p)
print("same tree back:", ok)
