"""Bayesian Hamiltonian learning with information-guided experiment design.

Learns an unknown Hamiltonian from a finite candidate set by iterating
measure / Bayes-update, where each iteration's initial state, measurement
basis and evolution time are chosen either statically (baseline), by grid
search, or by simulated annealing on the conditional-entropy cost.
"""

from .bayes import (
    DegenerateEvidenceError,
    PghFailureError,
    RunStatus,
    Status,
    bayes_update,
    check_status,
    init_weights,
    pgh_time,
)
from .harness import (
    MODE_BASELINE,
    MODE_GRID_ADAPTIVE,
    MODE_OPTIMIZED,
    RunRecord,
    StaticAngles,
    SuiteSummary,
    best_static_baseline,
    emit_results,
    get_preset,
    run_single,
    run_suite,
    set_a,
    set_b,
)
from .info import (
    CqState,
    build_cq_state,
    conditional_entropy_cost,
    joint_distribution,
    mi_via_density_matrices,
    mutual_information,
)
from .linalg import (
    hermitian,
    hermitian_eig,
    mat_exp_hamiltonian,
    shannon_entropy,
    spectral_norm,
    von_neumann_entropy,
)
from .model import (
    ControlParams,
    DegenerateHypothesesError,
    HypothesisSet,
    initial_state,
    outcome_probs,
    outcome_probs_all,
    sample_outcome,
    w_matrix,
)
from .optimize import AnnealConfig, GridSpec, ParamRanges, anneal, grid_search, neighbor
from .rng import RandomStream, seed_split

__version__ = "0.1.0"
