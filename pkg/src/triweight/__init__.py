"""Structure checks for bivariate product weights and a weighted spectral
Galerkin solver for the degenerate Helmholtz operator on the unit triangle.
"""

from .poly import (MatPoly2, NotDivisibleError, Poly2, X1, X2, format_poly,
                   linear_form, parse_poly)
from .weights import (BoundaryResult, DomainEdges, Edge, PearsonData,
                      SystemResult, WeightCheckError, WeightSpec,
                      WeightVerification, boundary_check,
                      differential_system_check, divergence_factor,
                      identity_matrix, pearson_check, triangle_edges,
                      triangle_matrix, verify_weight)
from .moments import (QuadratureRule, TriangleWeightParams, dirichlet_moment,
                      dirichlet_moment_exact, gauss_jacobi, integrate_poly,
                      mass, mass_exact, moment_ratio, triangle_rule)
from .linalg import (NoConvergenceError, NotSPDError, cholesky,
                     eig_generalized, solve_spd, sym_eig)
from .galerkin import (BasisSet, EigResult, FactorizationError, GramSet,
                       HELMHOLTZ_POTENTIAL, apply_helmholtz, assemble,
                       bilinear_form, build_basis, eigensolve, load_vector,
                       monomial_grams, sobolev_norm, sobolev_norm_squared,
                       solve_eig, solve_weak)

__version__ = "0.1.0"

__all__ = [
    "MatPoly2", "NotDivisibleError", "Poly2", "X1", "X2", "format_poly",
    "linear_form", "parse_poly",
    "BoundaryResult", "DomainEdges", "Edge", "PearsonData", "SystemResult",
    "WeightCheckError", "WeightSpec", "WeightVerification", "boundary_check",
    "differential_system_check", "divergence_factor", "identity_matrix",
    "pearson_check", "triangle_edges", "triangle_matrix", "verify_weight",
    "QuadratureRule", "TriangleWeightParams", "dirichlet_moment",
    "dirichlet_moment_exact", "gauss_jacobi", "integrate_poly", "mass",
    "mass_exact", "moment_ratio", "triangle_rule",
    "NoConvergenceError", "NotSPDError", "cholesky", "eig_generalized",
    "solve_spd", "sym_eig",
    "BasisSet", "EigResult", "FactorizationError", "GramSet",
    "HELMHOLTZ_POTENTIAL", "apply_helmholtz", "assemble", "bilinear_form",
    "build_basis", "eigensolve", "load_vector", "monomial_grams",
    "sobolev_norm", "sobolev_norm_squared", "solve_eig", "solve_weak",
    "__version__",
]
