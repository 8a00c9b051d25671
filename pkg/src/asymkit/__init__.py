"""asymkit: classify pure quantum states under symmetric dynamics.

The library decides which pure states can be interconverted when the
dynamics is constrained to commute with a group action.  The working
invariant is the characteristic function g -> <psi|U(g)|psi>, which is
Fourier-dual to the family of per-irrep reduction matrices; equivalence,
one-way convertibility, and asymptotic rate conditions are all decided on
this data, with independent brute-force oracles for cross-checking.
"""

from .asymptotic import (
    AsymptoticReport,
    LieAlgebraBasis,
    charfn_hessian_check,
    check_reversible_asymptotic,
    commutator_subalgebra,
    covariance,
    generator_expectations,
)
from .catalog import (
    builtin_group,
    builtin_names,
    cyclic_group,
    cyclic_irreps,
    regular_representation,
)
from .charfn import (
    CharFn,
    FiniteSymmetry,
    IrrepReduction,
    PureState,
    SU2Symmetry,
    U1Symmetry,
    char_fn,
    charfn_from_reduction,
    embed_state,
    reduction,
    reduction_from_charfn,
    state_power,
    sym_group,
    tensor_state,
)
from .deciders import (
    OneDimRep,
    PDFunction,
    Verdict,
    convertible,
    embed_pair,
    g_equiv,
    max_invariant_fidelity,
    one_dim_reps,
    positive_definite_check,
    unitary_g_equiv,
)
from .errors import (
    AsymkitError,
    ConfigurationError,
    ConsistencyError,
    DecompositionError,
    FormatError,
    UnknownIrrepError,
    UnsupportedGroupError,
    ValidationError,
)
from .groups import (
    FiniteGroup,
    SU2Group,
    U1Group,
    check_group_axioms,
    conjugacy_classes,
    haar_average,
    inverse,
    multiply,
)
from .oracle import (
    construct_invariant_unitary_witness,
    gram_orbit_equality,
    orbit_gram,
    random_invariant_unitary,
    verify_pd_witness,
)
from .reps import (
    FiniteRep,
    Irrep,
    IrrepTable,
    IsotypicDecomposition,
    SU2Rep,
    U1Rep,
    check_representation,
    decompose,
    direct_sum_rep,
    invariant_unitary,
    isotypic_projector,
    rep_power,
    spin_generators,
    tensor_rep,
)

__version__ = "0.1.0"
