"""SI-cascade simulation and infection-path source localization."""

from srcloc._core import (  # noqa: F401
    CandidatePath,
    Cascade,
    Estimate,
    Network,
    Observation,
    candidate_path,
    from_edges,
    generate_ba,
    generate_er,
    generate_line,
    generate_regular_tree,
    line_detection_probability,
    line_expected_distance_bound,
    load_edge_list,
    localize_graph,
    localize_tree,
    min_timestamp_estimator,
    naive_line_stats,
    network_from_spec,
    random_tree,
    reduced_search_space,
    regular_tree_bound,
    sample_observers,
    sigma_diff_pmf,
    simulate_si,
)

__all__ = [
    "CandidatePath",
    "Cascade",
    "Estimate",
    "Network",
    "Observation",
    "candidate_path",
    "from_edges",
    "generate_ba",
    "generate_er",
    "generate_line",
    "generate_regular_tree",
    "line_detection_probability",
    "line_expected_distance_bound",
    "load_edge_list",
    "localize_graph",
    "localize_tree",
    "min_timestamp_estimator",
    "naive_line_stats",
    "network_from_spec",
    "random_tree",
    "reduced_search_space",
    "regular_tree_bound",
    "sample_observers",
    "sigma_diff_pmf",
    "simulate_si",
]
