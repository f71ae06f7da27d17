#include "srcloc/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace srcloc {

namespace {

bool connected_from(const Network& g, NodeId start) {
  if (g.node_count == 0) return false;
  std::vector<char> seen(g.node_count, 0);
  std::deque<NodeId> queue{start};
  seen[start] = 1;
  std::int64_t visited = 1;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.adjacency[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        queue.push_back(v);
      }
    }
  }
  return visited == g.node_count;
}

}  // namespace

Network from_edges(std::int32_t node_count,
                   const std::vector<std::pair<NodeId, NodeId>>& edges) {
  if (node_count < 0) throw std::invalid_argument("node_count must be non-negative");
  Network g;
  g.node_count = node_count;
  g.adjacency.assign(node_count, {});
  for (const auto& [a, b] : edges) {
    if (!g.has_node(a) || !g.has_node(b))
      throw std::invalid_argument("edge endpoint out of range");
    if (a == b) throw std::invalid_argument("self-loops are not allowed");
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
  }
  g.edge_count = 0;
  for (auto& nbrs : g.adjacency) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    g.edge_count += static_cast<std::int64_t>(nbrs.size());
  }
  g.edge_count /= 2;
  g.is_tree = node_count >= 1 && g.edge_count == node_count - 1 && connected_from(g, 0);
  return g;
}

LabeledNetwork load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open edge list: " + path);

  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<std::pair<NodeId, NodeId>> edges;

  auto intern = [&](const std::string& tok) {
    auto it = ids.find(tok);
    if (it != ids.end()) return it->second;
    NodeId id = static_cast<NodeId>(labels.size());
    ids.emplace(tok, id);
    labels.push_back(tok);
    return id;
  };

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!(ss >> a >> b)) continue;
    NodeId ia = intern(a);
    NodeId ib = intern(b);
    if (ia == ib) continue;  // ignore self-loops in external data
    edges.emplace_back(ia, ib);
  }
  LabeledNetwork out;
  out.net = from_edges(static_cast<std::int32_t>(labels.size()), edges);
  out.labels = std::move(labels);
  return out;
}

RootedTree bfs_tree(const Network& g, NodeId root) {
  if (!g.has_node(root)) throw std::invalid_argument("bfs_tree: root out of range");
  RootedTree t;
  t.root = root;
  t.parent.assign(g.node_count, -1);
  t.depth.assign(g.node_count, -1);
  t.children.assign(g.node_count, {});
  t.order.reserve(g.node_count);

  std::deque<NodeId> queue{root};
  t.depth[root] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    t.order.push_back(u);
    for (NodeId v : g.adjacency[u]) {
      if (t.depth[v] < 0 && v != root) {
        t.depth[v] = t.depth[u] + 1;
        t.parent[v] = u;
        t.children[u].push_back(v);
        queue.push_back(v);
      }
    }
  }
  return t;
}

BfsFrame bfs_frame(const Network& g, NodeId root) {
  if (!g.has_node(root)) throw std::invalid_argument("bfs_frame: root out of range");
  BfsFrame t;
  t.root = root;
  t.parent.assign(g.node_count, -1);
  t.depth.assign(g.node_count, -1);
  t.order.reserve(g.node_count);
  t.order.push_back(root);
  t.depth[root] = 0;
  for (std::size_t head = 0; head < t.order.size(); ++head) {
    NodeId u = t.order[head];
    for (NodeId v : g.adjacency[u]) {
      if (t.depth[v] < 0 && v != root) {
        t.depth[v] = t.depth[u] + 1;
        t.parent[v] = u;
        t.order.push_back(v);
      }
    }
  }
  return t;
}

std::vector<std::int32_t> bfs_distances(const Network& g, NodeId src) {
  return bfs_frame(g, src).depth;
}

NodePath tree_path(const Network& g, NodeId u, NodeId v) {
  if (!g.is_tree) throw std::logic_error("tree_path requires a tree graph");
  if (!g.has_node(u) || !g.has_node(v))
    throw std::invalid_argument("tree_path: node out of range");
  RootedTree t = bfs_tree(g, u);
  if (!t.reached(v)) throw std::invalid_argument("tree_path: endpoints disconnected");
  NodePath p;
  for (NodeId w = v; w != -1; w = t.parent[w]) p.nodes.push_back(w);
  std::reverse(p.nodes.begin(), p.nodes.end());
  return p;
}

SteinerSubtree steiner_tree(const Network& g, const std::vector<NodeId>& terminals) {
  if (!g.is_tree) throw std::logic_error("steiner_tree requires a tree graph");
  if (terminals.empty()) throw std::invalid_argument("steiner_tree: empty terminal set");
  for (NodeId s : terminals)
    if (!g.has_node(s)) throw std::invalid_argument("steiner_tree: terminal out of range");

  NodeId root = terminals.front();
  RootedTree t = bfs_tree(g, root);
  std::vector<char> kept(g.node_count, 0);
  kept[root] = 1;
  SteinerSubtree out;
  for (NodeId s : terminals) {
    if (!t.reached(s)) throw std::invalid_argument("steiner_tree: terminal disconnected");
    // Walk toward the root until we rejoin the already-kept subtree.
    for (NodeId w = s; !kept[w]; w = t.parent[w]) {
      kept[w] = 1;
      out.edges.emplace_back(std::min(w, t.parent[w]), std::max(w, t.parent[w]));
    }
  }
  for (NodeId u = 0; u < g.node_count; ++u)
    if (kept[u]) out.nodes.push_back(u);
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

int sampled_distance(const Network& g, NodeId u, NodeId v,
                     const std::vector<NodeId>& sampled) {
  NodePath p = tree_path(g, u, v);
  int count = 0;
  for (NodeId w : p.nodes)
    if (std::binary_search(sampled.begin(), sampled.end(), w)) ++count;
  return count;
}

}  // namespace srcloc
