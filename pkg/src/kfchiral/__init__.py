"""Exact equations, parameterizations and group actions for k-factor models and chirality varieties."""

from .poly import (
    MissingVariableError,
    Poly,
    Tag,
    VarKey,
    canonicalize,
    coloading,
    entry,
    loading,
    offdiag,
    param,
    subsetvar,
    sym_determinant,
    symoffdiag,
)
from .perm import (
    Permutation,
    act_poly,
    act_subset_coord,
    all_ksubsets,
    all_permutations,
    inversions_on,
    orbit_up_to_sign,
)
from .factor import (
    OffDiagMatrix,
    check_equations,
    find_commute_witness_fm,
    nonnoetherian_demo,
    offdiag_minor_polys,
    pentad_poly,
    pi_truncate,
    principal_submatrix,
    rank1_complete,
    rank_factorize,
    sample_offdiag_rank,
    tau_augment,
)
from .chirality import (
    ChiralityPoint,
    GeneralizedSystem,
    act_point,
    chirality_product,
    commute_witness_ch,
    generalized_point,
    pi_point,
    pluecker_polys,
    signed_lookup,
    tau_point,
    vandermonde_point,
)
from .reynolds import GroupAction, average, det_substitution_check, is_invariant, module_identity_check

__all__ = [
    "MissingVariableError",
    "Poly",
    "Tag",
    "VarKey",
    "canonicalize",
    "coloading",
    "entry",
    "loading",
    "offdiag",
    "param",
    "subsetvar",
    "sym_determinant",
    "symoffdiag",
    "Permutation",
    "act_poly",
    "act_subset_coord",
    "all_ksubsets",
    "all_permutations",
    "inversions_on",
    "orbit_up_to_sign",
    "OffDiagMatrix",
    "check_equations",
    "find_commute_witness_fm",
    "nonnoetherian_demo",
    "offdiag_minor_polys",
    "pentad_poly",
    "pi_truncate",
    "principal_submatrix",
    "rank1_complete",
    "rank_factorize",
    "sample_offdiag_rank",
    "tau_augment",
    "ChiralityPoint",
    "GeneralizedSystem",
    "act_point",
    "chirality_product",
    "commute_witness_ch",
    "generalized_point",
    "pi_point",
    "pluecker_polys",
    "signed_lookup",
    "tau_point",
    "vandermonde_point",
    "GroupAction",
    "average",
    "det_substitution_check",
    "is_invariant",
    "module_identity_check",
]

__version__ = "0.1.0"
