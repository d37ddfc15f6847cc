"""Yang-Baxter gates from the Tracy-Singh product: construction, realization
as circuits, and Turaev braid invariants."""

from .braids import (
    BraidWord,
    EnhancedPair,
    boxtimes_pair,
    braid_rep,
    check_enhanced_pair,
    explore_swap_form,
    turaev_invariant,
    verify_product_formula,
)
from .circuit import (
    Circuit,
    Factor,
    Factorization,
    PlacedGate,
    iterate_realization,
    realize_boxtimes,
    sandwich_realization,
    simulate,
)
from .gates import (
    EntanglementClass,
    Gate,
    builtin_gates,
    classify_entangling,
    get_builtin,
    tensor_factor,
    unitarity_residual,
    ybe_residual,
)
from .linalg import (
    approx_eq,
    commutation_matrix,
    kron,
    matmul,
    middle_swap,
    partial_trace_second,
)
from .tracy_singh import (
    BlockPartition,
    PartitionedMatrix,
    boxtimes_power,
    canonical_partition,
    tracy_singh,
    ts_via_commutation,
)

__version__ = "0.1.0"
