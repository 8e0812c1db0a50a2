"""Generalized m-gonal forms: local and global representability, p-adic
stability machinery, and exceptional-set censuses."""

from .arith import (
    INFINITY,
    PAdicContext,
    brute_force_congruence,
    hensel_liftable,
    hensel_refine,
    hilbert_symbol,
    is_prime,
    ord_and_unit,
    ordp,
    square_class,
)
from .census import (
    ExceptionalReport,
    RegularityVerdict,
    ScalingResult,
    ScalingRow,
    exceptional_set,
    regularity_check,
    scaling_experiment,
)
from .errors import (
    AnomalyWarning,
    ContractError,
    InputError,
    MgonalError,
    ResourceError,
)
from .localrep import (
    LocalRepresentation,
    LocalVerdict,
    is_locally_universal,
    locally_represents,
    locally_represents_at,
    relevant_primes,
)
from .polygonal import (
    MgonalForm,
    TargetDecomposition,
    Witness,
    coefficient_gcd,
    decompose_target,
    evaluate,
    invert_polygonal,
    polygonal_number,
    represents,
)
from .quadratic import (
    Eq2Verdict,
    HEXAGONAL_PLANE,
    HYPERBOLIC_PLANE,
    JordanDecomposition,
    ReducedQuadratic,
    bareiss_determinant,
    eq2_context,
    eq2_residual,
    eq2_stability_depth,
    gram_from_json,
    gram_to_json,
    is_isotropic,
    jordan_decompose,
    reduced_quadratic,
    represents_locally_diagonal,
)
from .theorem import (
    AdmissiblePair,
    AdmissibleSearch,
    KConstant,
    StabilityExponent,
    admissible_k,
    bad_primes,
    eq2_rhs,
    k_constant,
    k_stability_exponent,
    unit_deficient_primes,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
