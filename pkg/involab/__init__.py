"""Alternator subalgebras of algebras with involution in characteristic 2."""

from involab.algebras import (
    AlgebraElement,
    AlgebraWithInvolution,
    InvolutionType,
    IsotropyStatus,
    classify_type,
    isotropy_search,
    matrix_algebra_adjoint,
    quaternion,
    scalar_extend,
    sym_alt,
    tensor,
    twist_involution,
)
from involab.alternator import (
    AlternatorReport,
    AnisotropyProvenance,
    InseparableExtensionError,
    SymplecticInvolutionError,
    Verdict,
    alt_membership_check,
    alternator,
    brute_force_S,
    inseparable_jump,
    is_direct,
    septd_suite,
    totally_decomposable_anisotropic,
    verify_separable_descent,
)
from involab.fields import FieldElement, FieldTower, ParseError, parse_field
from involab.forms import BilinearForm, TSQuadraticForm, diagonalize, pfister
from involab.linalg import Matrix, Subspace, semilinear_kernel
from involab.scenarios import ScenarioError, load_scenario, run_scenario
from involab.suite import theorem_suite

__all__ = [
    "AlgebraElement",
    "AlgebraWithInvolution",
    "AlternatorReport",
    "AnisotropyProvenance",
    "BilinearForm",
    "FieldElement",
    "FieldTower",
    "InseparableExtensionError",
    "InvolutionType",
    "IsotropyStatus",
    "Matrix",
    "ParseError",
    "ScenarioError",
    "Subspace",
    "SymplecticInvolutionError",
    "TSQuadraticForm",
    "Verdict",
    "alt_membership_check",
    "alternator",
    "brute_force_S",
    "classify_type",
    "diagonalize",
    "inseparable_jump",
    "is_direct",
    "isotropy_search",
    "load_scenario",
    "matrix_algebra_adjoint",
    "parse_field",
    "pfister",
    "quaternion",
    "run_scenario",
    "scalar_extend",
    "semilinear_kernel",
    "septd_suite",
    "sym_alt",
    "tensor",
    "theorem_suite",
    "totally_decomposable_anisotropic",
    "twist_involution",
    "verify_separable_descent",
]
