#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "srcloc/diffusion.hpp"
#include "srcloc/graph.hpp"

namespace srcloc {

/// Directed tree rooted at a candidate source, pruned so that every leaf is
/// an observer. `nodes` is discovery order (root first); parent is dense and
/// valid on in-tree nodes; children are stored flat in CSR form.
struct CascadingTree {
  NodeId root = -1;
  std::vector<NodeId> nodes;
  std::vector<NodeId> parent;
  std::vector<char> in_tree;
  std::vector<NodeId> sampled_in_tree;  // ascending
  std::int64_t edge_count = 0;

  std::vector<std::int32_t> child_off;  // per node: start index into child_data
  std::vector<NodeId> child_data;

  bool contains(NodeId u) const { return in_tree[u] != 0; }
  std::span<const NodeId> children_of(NodeId u) const {
    return {child_data.data() + child_off[u],
            static_cast<std::size_t>(child_off[u + 1] - child_off[u])};
  }
};

/// Observation flattened to dense per-node arrays for hot loops.
struct DenseObservation {
  std::vector<char> is_sampled;
  std::vector<std::int64_t> time;
};
DenseObservation densify(const Observation& obs, std::int32_t node_count);

/// Output of the delay-minimizing pass: tau[u] is the latest feasible
/// infection slot of u given its observed descendants, and aggregate_delay is
/// the minimum total transmission delay over the tree's edges.
struct MessagePassingResult {
  std::vector<std::int64_t> tau;  // dense; valid on in-tree nodes
  std::int64_t aggregate_delay = 0;
};

/// Restrict a BFS tree to the union of root-to-terminal paths. Terminals must
/// all be reached by the tree.
CascadingTree prune_to_terminals(const RootedTree& t, const std::vector<NodeId>& terminals);
CascadingTree prune_to_terminals(const BfsFrame& t, const std::vector<NodeId>& terminals);

/// BFS tree from `root` pruned to span `sampled` (unique on tree graphs).
CascadingTree build_cascading_tree(const Network& g, NodeId root,
                                   const std::vector<NodeId>& sampled);

/// Bottom-up pass over the cascading tree. Leaves take their observed slot;
/// an internal node takes min(children) - 1, clamped to its own observation
/// when it is sampled. Returns nullopt exactly when no integer labeling with
/// unit-minimum edge delays matches the observations. Children are processed
/// before parents by walking discovery order in reverse, so deep chains do
/// not recurse.
std::optional<MessagePassingResult> message_passing(const CascadingTree& ct,
                                                    const Observation& obs);
std::optional<MessagePassingResult> message_passing(const CascadingTree& ct,
                                                    const DenseObservation& obs);

/// Log-likelihood of the best labeling: delays are geometric(p), so
/// (a - |E|) * log(1-p) + |E| * log p. For p = 1 this degenerates to an
/// indicator of every delay being exactly 1.
double path_log_likelihood(const MessagePassingResult& mp, std::int64_t edge_count,
                           double p);

/// Independent oracle: enumerate every integer labeling of the unsampled
/// nodes inside the box [min_t - edge_count - slack, max_t], keep those
/// satisfying the ordering constraints, and return the minimal total delay.
/// Throws if the search would exceed a hard state cap.
std::optional<std::int64_t> brute_force_lip(const CascadingTree& ct,
                                            const Observation& obs,
                                            std::int64_t slack);

}  // namespace srcloc
