"""Exact hard-core model statistics and occupancy-fraction linear programs on small regular graphs."""

from .graph import (
    FamilySpec,
    Graph,
    canonical_label,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    enumerate_nonisomorphic,
    generalized_petersen,
    generate,
    induced_subgraph,
    is_triangle_free,
    naive_cubic_tf_corpus,
    parse_graph6,
    regular_degree,
    write_graph6,
)
from .hardcore import (
    Polynomial,
    independence_number,
    independence_polynomial,
    local_graph_distribution,
    neighborly_residual,
    occupancy_fraction,
    vertex_probabilities,
    y_distribution,
)
from .lp import (
    build_lp_cubic,
    build_lp_general,
    build_lp_trianglefree,
    check_complementary_slackness,
    dual_candidate,
    dual_of,
    simplex_solve,
)
from .bounds import (
    branch_index,
    conjecture_reference,
    cubic_bound,
    lambert_w,
    log_partition_bound,
    reference_occupancy,
    scan_check,
    shearer,
    t3_polynomial,
    tf_alpha_bound,
    tf_bound,
)

__version__ = "0.1.0"
