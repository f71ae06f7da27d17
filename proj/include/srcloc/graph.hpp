#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace srcloc {

using NodeId = std::int32_t;

/// Undirected simple graph over dense node ids [0, node_count).
/// Adjacency lists are sorted ascending so every traversal is deterministic.
struct Network {
  std::int32_t node_count = 0;
  std::vector<std::vector<NodeId>> adjacency;
  std::int64_t edge_count = 0;
  bool is_tree = false;

  int degree(NodeId u) const { return static_cast<int>(adjacency[u].size()); }
  bool has_node(NodeId u) const { return u >= 0 && u < node_count; }
};

/// BFS tree: parent/depth are -1 for nodes the root cannot reach; `order`
/// lists reached nodes in discovery order (root first).
struct RootedTree {
  NodeId root = -1;
  std::vector<NodeId> parent;
  std::vector<std::int32_t> depth;
  std::vector<std::vector<NodeId>> children;
  std::vector<NodeId> order;

  bool reached(NodeId u) const { return depth[u] >= 0; }
};

/// Allocation-lean BFS skeleton (no children lists) for hot loops.
struct BfsFrame {
  NodeId root = -1;
  std::vector<NodeId> parent;
  std::vector<std::int32_t> depth;
  std::vector<NodeId> order;

  bool reached(NodeId u) const { return depth[u] >= 0; }
};

/// Simple path, endpoints included.
struct NodePath {
  std::vector<NodeId> nodes;

  std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

/// Minimal subtree of a tree graph spanning a terminal set.
struct SteinerSubtree {
  std::vector<NodeId> nodes;                        // ascending
  std::vector<std::pair<NodeId, NodeId>> edges;     // (min, max) pairs, sorted
};

/// Edge-list file plus the label -> dense-id mapping it induced.
struct LabeledNetwork {
  Network net;
  std::vector<std::string> labels;  // labels[id] = original token
};

/// Build a Network from an edge list. Endpoints must be in range and
/// self-loops are rejected; duplicate edges are collapsed.
Network from_edges(std::int32_t node_count,
                   const std::vector<std::pair<NodeId, NodeId>>& edges);

/// Parse a whitespace-separated edge list ('#' lines ignored). Node labels
/// are mapped to dense ids in first-appearance order.
LabeledNetwork load_edge_list(const std::string& path);

/// Deterministic BFS tree: neighbors are explored in ascending id order.
RootedTree bfs_tree(const Network& g, NodeId root);
BfsFrame bfs_frame(const Network& g, NodeId root);

/// Hop distance from src to every node (-1 if unreachable).
std::vector<std::int32_t> bfs_distances(const Network& g, NodeId src);

/// Unique simple path between two nodes of a tree graph, inclusive.
NodePath tree_path(const Network& g, NodeId u, NodeId v);

/// Union of all pairwise tree paths within `terminals`.
SteinerSubtree steiner_tree(const Network& g, const std::vector<NodeId>& terminals);

/// Number of nodes of `sampled` lying on the tree path from u to v,
/// endpoints included. `sampled` must be sorted ascending.
int sampled_distance(const Network& g, NodeId u, NodeId v,
                     const std::vector<NodeId>& sampled);

}  // namespace srcloc
