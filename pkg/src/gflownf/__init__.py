"""Extended-MBQC open graphs, gflow normal forms and branch simulation."""

from .opengraph import (
    ExtendedOpenGraph,
    Graph,
    OpenGraphError,
    Plane,
    induced_edge_count,
    odd_neighbourhood,
    parse_open_graph,
    parse_open_graph_document,
    serialize_open_graph,
    symmetric_difference,
)
from .gflow import (
    CorrectiveMaps,
    CycleError,
    DependencyOrder,
    Gflow,
    VerificationReport,
    check_input_planes,
    check_normal_form,
    corrective_maps,
    extensivity_order,
    parse_gflow,
    serialize_gflow,
    verify_gflow,
)
from .search import (
    GflowEnumeration,
    brute_force_enumerate,
    exists_normal_form,
    find_gflow,
)
from .normal_forms import (
    PromotionResult,
    check_balanced_nf,
    check_defect_bound,
    focus,
    promote_all,
    promote_input_y,
    promote_input_z,
)
from .sim import (
    BranchLimitError,
    BranchResult,
    DeterminismReport,
    Pattern,
    Statevector,
    apply_correction,
    basis_state,
    check_determinism,
    extract_isometry,
    measure,
    pattern_from_gflow,
    prepare,
    run_all_branches,
    run_branch,
    strip_corrections,
)

__all__ = [name for name in dir() if not name.startswith("_")]
