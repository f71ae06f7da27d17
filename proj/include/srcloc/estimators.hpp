#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "srcloc/diffusion.hpp"
#include "srcloc/graph.hpp"
#include "srcloc/lip.hpp"

namespace srcloc {

/// Result of a source-localization run. `tied` lists every feasible candidate
/// attaining the winning score; `source` is the lowest-id element of `tied`.
/// When every candidate is infeasible the estimate falls back to the
/// minimum-timestamp observer and `used_fallback` is set (`tied` stays empty,
/// score/log_likelihood are meaningless).
struct Estimate {
  NodeId source = -1;
  std::int64_t score = 0;  // aggregate delay of the winner
  double log_likelihood = -std::numeric_limits<double>::infinity();
  std::vector<NodeId> search_region;  // ascending
  std::vector<NodeId> feasible;       // ascending
  std::vector<NodeId> tied;           // ascending, subset of feasible
  bool used_fallback = false;
};

/// BFS tree whose labels gate the admission of observers: a sampled node is
/// only attached through an edge whose label precedes its timestamp.
struct TimeLabeledBfsTree {
  static constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();

  RootedTree tree;
  std::vector<std::int64_t> sigma;      // dense; valid on reached nodes
  std::vector<NodeId> reached_sampled;  // ascending
};

/// Candidate region around the earliest observer s0: BFS over the cascading
/// tree T(s0, S) that expands s0's children unconditionally and thereafter
/// only unsampled nodes. With a single observer there is no second observer
/// to bound the walk, so the expansion runs over the plain BFS tree and
/// covers the whole component.
std::vector<NodeId> reduced_search_space(const Network& g, const Observation& obs);

/// Tree-exact localization: evaluate every candidate root in the reduced
/// region by message passing and return the minimum aggregate delay. When
/// `full_sampled_set` is false the per-candidate trees span only the
/// observers inside the reduced region.
Estimate localize_tree(const Network& g, const Observation& obs, double p,
                       bool full_sampled_set = false);

/// Time-labeled BFS from `root`. Unsampled nodes extend the label by one;
/// a sampled node v discovered through (w, v) is admitted only if
/// sigma_w < t_v, otherwise it stays unvisited and a later edge may admit it.
/// Stops once every observer is admitted.
TimeLabeledBfsTree time_labeled_bfs(const Network& g, NodeId root, const Observation& obs);

/// General-graph heuristic: per candidate root, build the time-labeled BFS
/// tree, drop the candidate if it reaches fewer than theta * |S| observers,
/// otherwise prune the tree to its reached observers and score it by message
/// passing. If every candidate is dropped the pass reruns once with theta
/// halved before falling back to the earliest observer.
Estimate localize_graph(const Network& g, const Observation& obs, double p,
                        double theta = 0.95);

/// Baseline: an observer with the minimum timestamp, ties resolved by a fair
/// seeded draw among the minimizers.
NodeId min_timestamp_estimator(const Observation& obs, std::uint64_t seed);

}  // namespace srcloc
