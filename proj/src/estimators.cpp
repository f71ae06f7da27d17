#include "srcloc/estimators.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include "srcloc/parallel.hpp"
#include "srcloc/rng.hpp"

namespace srcloc {

namespace {

NodeId earliest_observer(const Observation& obs) {
  NodeId s0 = obs.sampled.front();
  std::int64_t best = obs.timestamps.front();
  for (std::size_t i = 1; i < obs.sampled.size(); ++i) {
    if (obs.timestamps[i] < best) {
      best = obs.timestamps[i];
      s0 = obs.sampled[i];
    }
  }
  return s0;  // sampled ids ascend, so the first minimum has the lowest id
}

struct Candidate {
  NodeId node = -1;
  bool feasible = false;
  std::int64_t score = 0;
  std::int64_t edges = 0;
};

Estimate pick_winner(std::vector<Candidate> candidates, std::vector<NodeId> region,
                     double p, NodeId fallback) {
  Estimate est;
  est.search_region = std::move(region);
  std::int64_t best = 0;
  bool any = false;
  for (const Candidate& c : candidates) {
    if (!c.feasible) continue;
    est.feasible.push_back(c.node);
    if (!any || c.score < best) {
      best = c.score;
      any = true;
    }
  }
  if (!any) {
    est.source = fallback;
    est.used_fallback = true;
    return est;
  }
  for (const Candidate& c : candidates) {
    if (c.feasible && c.score == best) est.tied.push_back(c.node);
  }
  est.score = best;
  est.source = est.tied.front();
  for (const Candidate& c : candidates) {
    if (c.node == est.source) {
      MessagePassingResult mp;
      mp.aggregate_delay = c.score;
      est.log_likelihood = path_log_likelihood(mp, c.edges, p);
      break;
    }
  }
  return est;
}

}  // namespace

std::vector<NodeId> reduced_search_space(const Network& g, const Observation& obs) {
  if (!g.is_tree) throw std::logic_error("reduced_search_space requires a tree graph");
  if (obs.empty()) throw std::invalid_argument("reduced_search_space: no observers");

  NodeId s0 = earliest_observer(obs);
  RootedTree bt;
  CascadingTree ct;
  std::function<std::span<const NodeId>(NodeId)> kids;
  if (obs.size() == 1) {
    bt = bfs_tree(g, s0);
    kids = [&bt](NodeId u) {
      return std::span<const NodeId>(bt.children[u].data(), bt.children[u].size());
    };
  } else {
    ct = build_cascading_tree(g, s0, obs.sampled);
    kids = [&ct](NodeId u) { return ct.children_of(u); };
  }

  std::vector<NodeId> region{s0};
  std::deque<NodeId> queue(kids(s0).begin(), kids(s0).end());
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    region.push_back(u);
    if (!obs.contains(u))
      for (NodeId v : kids(u)) queue.push_back(v);
  }
  std::sort(region.begin(), region.end());
  return region;
}

Estimate localize_tree(const Network& g, const Observation& obs, double p,
                       bool full_sampled_set) {
  if (obs.empty()) throw std::invalid_argument("localize_tree: no observers");
  std::vector<NodeId> region = reduced_search_space(g, obs);

  Observation local;
  const Observation* used = &obs;
  if (!full_sampled_set) {
    for (std::size_t i = 0; i < obs.sampled.size(); ++i) {
      if (std::binary_search(region.begin(), region.end(), obs.sampled[i])) {
        local.sampled.push_back(obs.sampled[i]);
        local.timestamps.push_back(obs.timestamps[i]);
      }
    }
    used = &local;
  }

  DenseObservation dense = densify(*used, g.node_count);
  std::vector<Candidate> candidates(region.size());
  for (std::size_t i = 0; i < region.size(); ++i) {
    NodeId u = region[i];
    CascadingTree ct = build_cascading_tree(g, u, used->sampled);
    auto mp = message_passing(ct, dense);
    candidates[i].node = u;
    if (mp) {
      candidates[i].feasible = true;
      candidates[i].score = mp->aggregate_delay;
      candidates[i].edges = ct.edge_count;
    }
  }
  return pick_winner(std::move(candidates), std::move(region), p, earliest_observer(obs));
}

TimeLabeledBfsTree time_labeled_bfs(const Network& g, NodeId root, const Observation& obs) {
  if (!g.has_node(root)) throw std::invalid_argument("time_labeled_bfs: root out of range");
  TimeLabeledBfsTree out;
  out.tree.root = root;
  out.tree.parent.assign(g.node_count, -1);
  out.tree.depth.assign(g.node_count, -1);
  out.tree.children.assign(g.node_count, {});
  out.sigma.assign(g.node_count, TimeLabeledBfsTree::kNegInf);

  auto t_root = obs.time_of(root);
  out.sigma[root] = t_root ? *t_root : TimeLabeledBfsTree::kNegInf;
  out.tree.depth[root] = 0;
  if (t_root) out.reached_sampled.push_back(root);

  std::deque<NodeId> queue{root};
  while (!queue.empty()) {
    NodeId w = queue.front();
    queue.pop_front();
    out.tree.order.push_back(w);
    for (NodeId v : g.adjacency[w]) {
      if (out.tree.depth[v] >= 0) continue;  // already admitted
      auto tv = obs.time_of(v);
      if (tv) {
        if (out.sigma[w] >= *tv) continue;  // stays unvisited; another edge may admit it
        out.sigma[v] = *tv;
        out.reached_sampled.push_back(v);
      } else {
        out.sigma[v] = out.sigma[w] == TimeLabeledBfsTree::kNegInf
                           ? TimeLabeledBfsTree::kNegInf
                           : out.sigma[w] + 1;
      }
      out.tree.depth[v] = out.tree.depth[w] + 1;
      out.tree.parent[v] = w;
      out.tree.children[w].push_back(v);
      queue.push_back(v);
    }
  }
  std::sort(out.reached_sampled.begin(), out.reached_sampled.end());
  return out;
}

Estimate localize_graph(const Network& g, const Observation& obs, double p, double theta) {
  if (obs.empty()) throw std::invalid_argument("localize_graph: no observers");
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("localize_graph: theta must be in (0, 1)");

  std::vector<NodeId> region(g.node_count);
  for (NodeId u = 0; u < g.node_count; ++u) region[u] = u;
  DenseObservation dense = densify(obs, g.node_count);

  auto attempt = [&](double th) {
    std::vector<Candidate> candidates(g.node_count);
    parallel_for(static_cast<std::size_t>(g.node_count), [&](std::size_t i) {
      NodeId u = static_cast<NodeId>(i);
      candidates[i].node = u;
      TimeLabeledBfsTree tlb = time_labeled_bfs(g, u, obs);
      if (static_cast<double>(tlb.reached_sampled.size()) <
          th * static_cast<double>(obs.size()))
        return;
      CascadingTree ct = prune_to_terminals(tlb.tree, tlb.reached_sampled);
      auto mp = message_passing(ct, dense);
      if (!mp) return;
      candidates[i].feasible = true;
      candidates[i].score = mp->aggregate_delay;
      candidates[i].edges = ct.edge_count;
    });
    return candidates;
  };

  std::vector<Candidate> candidates = attempt(theta);
  bool any = std::any_of(candidates.begin(), candidates.end(),
                         [](const Candidate& c) { return c.feasible; });
  if (!any) candidates = attempt(theta / 2.0);  // screening too strict; retry once
  return pick_winner(std::move(candidates), std::move(region), p, earliest_observer(obs));
}

NodeId min_timestamp_estimator(const Observation& obs, std::uint64_t seed) {
  if (obs.empty()) throw std::invalid_argument("min_timestamp_estimator: no observers");
  std::int64_t best = obs.timestamps.front();
  for (std::int64_t t : obs.timestamps) best = std::min(best, t);
  std::vector<NodeId> minimizers;
  for (std::size_t i = 0; i < obs.sampled.size(); ++i)
    if (obs.timestamps[i] == best) minimizers.push_back(obs.sampled[i]);
  if (minimizers.size() == 1) return minimizers.front();
  Rng rng(seed);
  return minimizers[rng.next_below(minimizers.size())];
}

}  // namespace srcloc
