"""Exact construction and brute-force verification of difference families
over finite fields and Galois rings GR(4,n), and of the skew and symmetric
Hadamard matrices assembled from them."""

from .constructions import (
    CyclotomicDS,
    GaloisRingDDF,
    PreconditionError,
    block_symmetry_report,
    cyclotomic_difference_set,
    cyclotomic_family,
    galois_ring_ddf,
    szekeres_family,
    szekeres_inverse_identity,
    teichmuller_difference_set,
    unit_quotient_family,
)
from .designs import (
    Block,
    DesignParams,
    DifferenceFamily,
    VerificationReport,
    develop,
    difference_count,
    difference_table,
    one_rotational_design,
    verify,
    verify_gdd,
)
from .field import FieldCtx
from .galois import RingCtx, UnitDecomposition, graeffe_lift, unit_group_iso
from .groups import FiniteAbelianGroup, GroupIso, Subgroup, cosets, subgroup_generated
from .hadamard import (
    AssemblyError,
    SignMatrix,
    check_symmetric_conditions,
    equivalence_invariants,
    hadamard_failure,
    hadamard_from_difference_set,
    identity_checks,
    is_hadamard,
    is_skew,
    is_symmetric,
    skew_from_df,
    sylvester,
    symmetric_from_ddf,
)
from .search import Certificate, SearchBudget, SearchSpec, dedupe, search_ddf

__version__ = "0.1.0"

__all__ = [
    "AssemblyError",
    "Block",
    "Certificate",
    "CyclotomicDS",
    "DesignParams",
    "DifferenceFamily",
    "FieldCtx",
    "FiniteAbelianGroup",
    "GaloisRingDDF",
    "GroupIso",
    "PreconditionError",
    "RingCtx",
    "SearchBudget",
    "SearchSpec",
    "SignMatrix",
    "Subgroup",
    "UnitDecomposition",
    "VerificationReport",
    "block_symmetry_report",
    "check_symmetric_conditions",
    "cosets",
    "cyclotomic_difference_set",
    "cyclotomic_family",
    "dedupe",
    "develop",
    "difference_count",
    "difference_table",
    "equivalence_invariants",
    "galois_ring_ddf",
    "hadamard_failure",
    "graeffe_lift",
    "hadamard_from_difference_set",
    "identity_checks",
    "is_hadamard",
    "is_skew",
    "is_symmetric",
    "one_rotational_design",
    "search_ddf",
    "skew_from_df",
    "subgroup_generated",
    "sylvester",
    "symmetric_from_ddf",
    "szekeres_family",
    "szekeres_inverse_identity",
    "teichmuller_difference_set",
    "unit_group_iso",
    "unit_quotient_family",
    "verify",
    "verify_gdd",
]
