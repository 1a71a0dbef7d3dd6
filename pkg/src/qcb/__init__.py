"""qcb: a verification lab for input-dimension continuity bounds of quantum
channel information quantities."""

from .linalg import (
    ContractError,
    Rng,
    SizeError,
    SubsystemShape,
    hermitian_eig,
    operator_norm,
    partial_trace,
    positive_part,
    random_isometry,
    random_pure,
    random_state,
    support_dim,
    tensor,
    trace_norm,
)
from .entropic import (
    DensityMatrix,
    cmi,
    entropy,
    g,
    h2,
    maximally_mixed,
    mutual_information,
    pure_density,
    random_density,
    relative_entropy,
)
from .ensembles import (
    Ensemble,
    average_state,
    ensemble,
    ensemble_distance,
    holevo_quantity,
    qc_state,
    random_ensemble,
    uniform_ensemble,
)
from .channels import (
    Channel,
    ChannelPairRep,
    apply,
    apply_on,
    choi,
    complementary,
    completely_depolarizing,
    erasure_channel,
    erasure_stinespring,
    from_kraus,
    identity_channel,
    load_channel,
    pair_common_rep,
    random_channel,
    save_channel,
    stinespring,
    unitary_channel,
)
from .distances import (
    DiamondConvergenceError,
    DistanceInterval,
    bures_distance,
    diamond_norm,
    erasure_bures_upper,
    probe_trace_norm,
)
from .capacities import (
    CapacityValue,
    coherent_info,
    ea_capacity,
    erasure_capacities,
    holevo_cap_heuristic,
    mutual_info_of_channel,
    private_oneshot_objective,
)
from .bounds import (
    BoundReport,
    check_almost_convexity,
    check_auxiliary,
    check_ensemble_continuity,
    check_prop1,
    check_prop2,
    check_prop3,
    check_prop4,
    check_prop5_erasure,
    rhs_ea_capacity,
    rhs_prop1,
    rhs_prop2,
    rhs_prop3,
    rhs_prop4,
    rhs_prop5,
    rhs_prop5_log,
    tightness_ratio,
)

__version__ = "0.1.0"
