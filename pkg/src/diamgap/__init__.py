"""diamgap: graphs whose diameter separates orthogonal-vector instances.

Build, for k-wise orthogonal-vector instances, a graph whose diameter
is at most k when no orthogonal tuple exists and at least 2k-1 between
two designated vertices when one does.  Explicit constructions cover
k in {4, 5}; the configuration machinery and the symbolic bounded
search handle general k.
"""

from .certify import (
    BudgetExceeded,
    SearchCertificate,
    bounded_search,
    endpoint_separation,
    reachable_sets,
)
from .configs import (
    Configuration,
    EdgeConstraint,
    FullOp,
    IllegalHalfOp,
    InvalidIntermediate,
    NodeDel,
    NodeIns,
    PathConstructionFailed,
    VecDel,
    VecIns,
    apply_full_op,
    apply_ops,
    bridge_constraint,
    canonicalize,
    connecting_path,
    count_vertices_bound,
    inverse_full_op,
    is_valid,
    random_valid_configuration,
    required_arrays,
)
from .graphs import (
    DiameterResult,
    Disconnected,
    Graph,
    bfs,
    contract_zero_edges,
    dump_graph,
    exact_diameter,
    from_edges,
    load_graph,
    two_approx,
    zero_one_bfs,
)
from .ovcore import (
    GenerationFailed,
    NoCommonCoordinate,
    OvInstance,
    OvWitness,
    common_one_coordinate,
    generate_no_instance,
    generate_yes_instance,
    read_instance,
    solve_kov_bruteforce,
    write_instance,
)
from .smallk import (
    GadgetIndex,
    WrongK,
    build_index,
    build_k4_graph,
    build_k5_graph,
    compact_bfs_levels,
    compact_endpoint_distance,
    endpoint_pair,
    vertex_bounds,
)
from .stacks import (
    StackTooLong,
    common_coord_array,
    satisfies,
    satisfies_bruteforce,
    split_pair_satisfies,
)

__version__ = "0.1.0"
