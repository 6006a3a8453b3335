"""clusterforge: exact cluster-algebra and preprojective-algebra computations."""

from .laurent import (
    EvaluationError,
    InexactDivisionError,
    LaurentError,
    LaurentPoly,
    Monomial,
    VariableMismatchError,
)
from .cluster import (
    ClusterError,
    ExchangeMatrix,
    LaurentPhenomenonError,
    MutationClass,
    Seed,
    builtin_seed,
    cluster_monomials,
    explore,
    is_finite_type,
    mutate_matrix,
    mutate_seed,
    mutation_class_to_dot,
)
from .nmatrix import (
    NMatrix,
    NMatrixError,
    Word,
    generator,
    generic_unitriangular,
    isotropy_defect,
    minor,
    product,
    verify_quadric_relation,
)
from .prepmod import (
    DoubleQuiver,
    PreprojectiveAlgebra,
    PrepmodError,
    QuiverRep,
    ResourceCapError,
    build_algebra_basis,
    build_complete_rigid,
    cartan_pairing,
    check_relation,
    direct_sum,
    dynkin_quiver,
    exchange_matrix_from_sequences,
    ext1_dim,
    functor_E,
    functor_E_dagger,
    functor_E_word,
    hom_dim,
    injective_rep,
    is_isomorphic,
    is_rigid,
    simple_rep,
    socle_series,
    socle_top,
    zero_rep,
)
from .phi import (
    ChiResult,
    ChiTable,
    ChiUndeterminedError,
    FlagCounter,
    PhiError,
    PhiReport,
    chi,
    count_flags,
    count_flags_mod_p,
    phi_eval,
    positivity_check,
    verify_multiplication,
)

__version__ = "0.1.0"
