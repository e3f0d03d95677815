"""EPR correlation model ladder: classical, transition, and quantum models
with a Bell-inequality harness, disk partitions, branch counting,
actualization pointers, a seeded trial runner, emitters, and an exhibit
service."""

__version__ = "0.1.0"

from .angles import (
    AngleSetting,
    OutcomePair,
    bell_angles,
    choose_setting,
    setting_from_indices,
)
from .bell import BellReport, bell_counts, bell_terms
from .branching import (
    BranchDistribution,
    BranchNode,
    most_common_r,
    refined_branch_tree,
    simulate_sequences,
    tree_probabilities,
    typical_window,
    typicality_fraction,
    world_count,
)
from .geometry import (
    DISK_RADIUS,
    GridSpec,
    Partition,
    Region,
    cross_section_arcs,
    diamond_counts,
    diamond_counts_closed_form,
    diamond_partition,
    grid_counts,
    grid_partition,
    grid_spec_for_delta,
)
from .models import (
    ProbabilityTable,
    curve_table,
    prob_classical,
    prob_grid,
    prob_internal,
    prob_quantum,
    prob_transition,
    single_pbs_probs,
)
from .actualization import (
    ActPointer,
    act_failure_experiment,
    act_outcome,
    act_statistics,
    sample_act,
)
from .trials import TrialLog, analyze, export_log, load_log, run_trials

__all__ = [name for name in dir() if not name.startswith("_")]
