"""decolab: bipartite entanglement under passive vacuum decoherence.

Simulates beam-splitter-type amplitude damping on truncated Fock spaces,
evaluates moment-based and spectrum-based entanglement criteria, inverts the
damping map to exhibit finite-strength disentanglement, and provides the
closed-form two-qubit concurrences under one- and two-sided damping.
"""

from .channels import (
    DampingChannel,
    KrausSet,
    apply_channel,
    beam_splitter_unitary,
    coherent_bath_evolve,
    damping_kraus,
    displacement_op,
    inverse_damping,
    is_physical,
)
from .entanglement import (
    ConcurrenceResult,
    NegativityResult,
    c1_closed,
    c2_closed,
    c2_unbalanced,
    log_negativity,
    partial_transpose,
    sde_threshold,
    wootters_concurrence,
)
from .errors import DecolabError, NumericalFailure, ValidationFailure
from .experiments import (
    ModePlan,
    RegressionCase,
    SdeHit,
    SeparableSpec,
    SweepRecord,
    forward_sweep,
    inverse_sweep,
    load_regression_case,
    load_state,
    random_separable,
    save_state,
    sde_search,
    sweep_to_csv,
)
from .fock import (
    BipartiteState,
    Mode,
    ModeDims,
    QubitPure,
    annihilation_op,
    coherent_state,
    creation_op,
    embed_op,
    embed_state,
    number_op,
    partial_trace,
    pure_to_state,
    qubit_state,
    qubit_vector,
)
from .moments import (
    MomentMatrixSpec,
    MultiIndex3,
    MultiIndex4,
    Ordering,
    Verdict,
    WitnessReport,
    build_matrix,
    graded_indices,
    hz_first_order,
    nom_element,
    scaling_matrix,
    sv_element,
    witness_from_det,
)
from .numerics import (
    det,
    herm_eigvals,
    kron,
    matrix_exp,
    sqrtm_psd,
    trace_norm,
)

__version__ = "0.1.0"
