"""swapnet: edge-swap network formation games with communication interests.

Build game instances, run selfish swap dynamics, verify equilibria,
generate the known lower-bound families, and check structural bounds
against brute-force oracles at desk scale.
"""

from .errors import (
    BudgetExhausted,
    CertificateMismatch,
    DisconnectedGraph,
    DisconnectingSwap,
    InstanceFormatError,
    InvalidSwap,
    NotInEquilibrium,
    ParameterOutOfDomain,
    PreconditionViolated,
    ReconstructionFailed,
    SwapnetError,
)
from .model import (
    Cost,
    CostVersion,
    Edge,
    GameInstance,
    ImprovingStep,
    Swap,
    ValidationReport,
    all_private_costs,
    apply_step,
    distances_from,
    private_cost,
    social_cost,
    validate_instance,
)
from .dynamics import (
    SINGLE,
    DynamicsTrace,
    EquilibriumMode,
    EquilibriumReport,
    Fingerprint,
    Scheduler,
    best_response,
    canonical_state,
    enumerate_improving_swaps,
    is_equilibrium,
    run_dynamics,
    state_digest,
)
from .constructions import (
    GeneratedInstance,
    build_equilibrium_alg1,
    gen_avg_path,
    gen_circle_lb,
    gen_cycling_instance,
    gen_general_poa,
    gen_poa_lb,
)
from .analysis import (
    BoundCheck,
    BoundsReport,
    MaxArrangement,
    PoAPoSReport,
    TraversalStats,
    arrangement_stats,
    brute_force_optimum,
    build_max_arrangement,
    check_bounds,
    empirical_poa_pos,
    enumerate_labeled_trees,
    find_t_configuration,
    max_independent_set,
)
from .files import (
    dumps_instance,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    loads_instance,
    save_instance,
)

__version__ = "0.1.0"
