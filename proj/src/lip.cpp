#include "srcloc/lip.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace srcloc {

DenseObservation densify(const Observation& obs, std::int32_t node_count) {
  DenseObservation d;
  d.is_sampled.assign(node_count, 0);
  d.time.assign(node_count, 0);
  for (std::size_t i = 0; i < obs.sampled.size(); ++i) {
    NodeId u = obs.sampled[i];
    if (u < 0 || u >= node_count)
      throw std::invalid_argument("densify: observer id out of range");
    d.is_sampled[u] = 1;
    d.time[u] = obs.timestamps[i];
  }
  return d;
}

namespace {

template <typename Tree>
CascadingTree prune_core(const Tree& t, const std::vector<NodeId>& terminals) {
  if (terminals.empty())
    throw std::invalid_argument("prune_to_terminals: empty terminal set");
  const std::size_t n = t.parent.size();
  CascadingTree ct;
  ct.root = t.root;
  ct.in_tree.assign(n, 0);
  ct.in_tree[t.root] = 1;

  std::vector<NodeId> sampled(terminals);
  std::sort(sampled.begin(), sampled.end());
  sampled.erase(std::unique(sampled.begin(), sampled.end()), sampled.end());
  for (NodeId s : sampled) {
    if (s < 0 || static_cast<std::size_t>(s) >= n || !t.reached(s))
      throw std::invalid_argument("prune_to_terminals: terminal not reached by tree");
    for (NodeId w = s; !ct.in_tree[w]; w = t.parent[w]) ct.in_tree[w] = 1;
  }

  ct.parent.assign(n, -1);
  ct.child_off.assign(n + 1, 0);
  for (NodeId u : t.order) {
    if (!ct.in_tree[u]) continue;
    ct.nodes.push_back(u);
    ct.parent[u] = t.parent[u];
    if (u != ct.root) ++ct.child_off[t.parent[u] + 1];
  }
  for (std::size_t u = 1; u <= n; ++u) ct.child_off[u] += ct.child_off[u - 1];
  ct.child_data.assign(ct.nodes.size() > 0 ? ct.nodes.size() - 1 : 0, -1);
  std::vector<std::int32_t> cursor(ct.child_off.begin(), ct.child_off.end() - 1);
  for (NodeId u : ct.nodes)
    if (u != ct.root) ct.child_data[cursor[ct.parent[u]]++] = u;

  ct.sampled_in_tree = std::move(sampled);
  ct.edge_count = static_cast<std::int64_t>(ct.nodes.size()) - 1;
  return ct;
}

}  // namespace

CascadingTree prune_to_terminals(const RootedTree& t, const std::vector<NodeId>& terminals) {
  return prune_core(t, terminals);
}

CascadingTree prune_to_terminals(const BfsFrame& t, const std::vector<NodeId>& terminals) {
  return prune_core(t, terminals);
}

CascadingTree build_cascading_tree(const Network& g, NodeId root,
                                   const std::vector<NodeId>& sampled) {
  if (sampled.empty())
    throw std::invalid_argument("build_cascading_tree: empty sampled set");
  return prune_to_terminals(bfs_frame(g, root), sampled);
}

std::optional<MessagePassingResult> message_passing(const CascadingTree& ct,
                                                    const Observation& obs) {
  return message_passing(ct, densify(obs, static_cast<std::int32_t>(ct.parent.size())));
}

std::optional<MessagePassingResult> message_passing(const CascadingTree& ct,
                                                    const DenseObservation& obs) {
  const std::size_t n = ct.parent.size();
  for (NodeId s : ct.sampled_in_tree)
    if (!obs.is_sampled[s])
      throw std::invalid_argument("message_passing: sampled node lacks a timestamp");

  MessagePassingResult mp;
  mp.tau.assign(n, 0);
  std::vector<std::int64_t> agg(n, 0);

  for (auto it = ct.nodes.rbegin(); it != ct.nodes.rend(); ++it) {
    NodeId u = *it;
    auto kids = ct.children_of(u);
    if (kids.empty()) {
      if (!obs.is_sampled[u])
        throw std::logic_error("message_passing: cascading tree leaf is not sampled");
      mp.tau[u] = obs.time[u];
      agg[u] = 0;
      continue;
    }
    std::int64_t m = std::numeric_limits<std::int64_t>::max();
    for (NodeId j : kids) m = std::min(m, mp.tau[j]);
    std::int64_t tau = m - 1;
    if (obs.is_sampled[u]) {
      if (tau < obs.time[u]) return std::nullopt;  // no permitted labeling
      tau = obs.time[u];
    }
    std::int64_t a = 0;
    for (NodeId j : kids) a += agg[j] + mp.tau[j] - tau;
    mp.tau[u] = tau;
    agg[u] = a;
  }
  mp.aggregate_delay = agg[ct.root];
  return mp;
}

double path_log_likelihood(const MessagePassingResult& mp, std::int64_t edge_count,
                           double p) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("path_log_likelihood: p must be in (0, 1]");
  if (p == 1.0) {
    return mp.aggregate_delay == edge_count
               ? 0.0
               : -std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(mp.aggregate_delay - edge_count) * std::log1p(-p) +
         static_cast<double>(edge_count) * std::log(p);
}

std::optional<std::int64_t> brute_force_lip(const CascadingTree& ct,
                                            const Observation& obs,
                                            std::int64_t slack) {
  if (slack < 0) throw std::invalid_argument("brute_force_lip: slack must be >= 0");
  const std::size_t n = ct.parent.size();
  std::vector<char> is_sampled(n, 0);
  std::vector<std::int64_t> t_of(n, 0);
  std::int64_t min_t = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_t = std::numeric_limits<std::int64_t>::min();
  for (NodeId s : ct.sampled_in_tree) {
    auto ts = obs.time_of(s);
    if (!ts) throw std::invalid_argument("brute_force_lip: sampled node lacks a timestamp");
    is_sampled[s] = 1;
    t_of[s] = *ts;
    min_t = std::min(min_t, *ts);
    max_t = std::max(max_t, *ts);
  }
  std::int64_t free_count = static_cast<std::int64_t>(ct.nodes.size()) -
                            static_cast<std::int64_t>(ct.sampled_in_tree.size());
  if (free_count > 10)
    throw std::logic_error("brute_force_lip: too many free nodes");

  const std::int64_t lo = min_t - ct.edge_count - slack;
  const std::int64_t hi = max_t;
  constexpr std::int64_t kStateCap = 50'000'000;
  std::int64_t states = 0;

  std::vector<std::int64_t> value(n, 0);
  std::optional<std::int64_t> best;

  std::function<void(std::size_t, std::int64_t)> go = [&](std::size_t i,
                                                          std::int64_t delay_sum) {
    if (i == ct.nodes.size()) {
      if (!best || delay_sum < *best) best = delay_sum;
      return;
    }
    NodeId u = ct.nodes[i];
    NodeId par = (u == ct.root) ? -1 : ct.parent[u];
    std::int64_t floor_v = (par == -1) ? lo : value[par] + 1;
    std::int64_t from = is_sampled[u] ? t_of[u] : std::max(lo, floor_v);
    std::int64_t to = is_sampled[u] ? t_of[u] : hi;
    if (is_sampled[u] && par != -1 && t_of[u] < floor_v) return;  // infeasible branch
    for (std::int64_t v = from; v <= to; ++v) {
      if (++states > kStateCap)
        throw std::logic_error("brute_force_lip: search space above cap");
      value[u] = v;
      go(i + 1, delay_sum + (par == -1 ? 0 : v - value[par]));
    }
  };
  go(0, 0);
  return best;
}

}  // namespace srcloc
