"""Plane trees, their Shabat polynomials, and differential operators
annihilating the local inverses of polynomials."""

from .annihilator import (
    DegreeBoundExceeded,
    centered,
    check_annihilation,
    fuchsian_annihilator,
    inverse_germs,
    minimal_order,
    pullback_affine,
    sampled_annihilator,
    series_rank,
    wronskian_annihilator,
)
from .dessin import (
    Chain,
    Dessin,
    EulerData,
    Isomorphism,
    MoebiusRepresentation,
    MoebiusTransform,
    NotATreeError,
    NotConnectedError,
    Permutation,
    Star,
    TreeClass,
    TwoStar,
    canonical_form,
    classify_tree,
    dessins_isomorphic,
    enumerate_plane_trees,
    euler_data,
    has_linear_rep_dim_le_2,
    is_plane_tree,
    moebius_representation,
)
from .diffop import LinearDifferentialOperator, NumericDifferentialOperator, operator_residual
from .exact import ExactPolynomial, ExactRationalFunction
from .monodromy import (
    LoopSpec,
    MonodromyResult,
    TrackingError,
    annihilator_order,
    inverse_span_order,
    recover_dessin,
    shabat_for_tree,
    track_roots,
    verify_riemann_hilbert,
)
from .series import PowerSeriesGerm, power_series_inverses
from .shabat import (
    ComplexPolynomial,
    NoSolutionError,
    NotShabatError,
    ShabatSolution,
    ValencyData,
    family_chebyshev,
    family_star,
    family_two_star,
    solve_shabat,
    verify_shabat,
)
from .universal import (
    MultivariatePolynomial,
    SymbolicRationalFunction,
    UniversalOperator,
    leading_coeff_factorization,
    q_mk,
    specialize,
    universal_annihilator,
)

__version__ = "0.1.0"
