#include "srcloc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace srcloc {

namespace {

void check_prob(double v, const char* name) {
  if (!(v > 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(name) + " must be in (0, 1]");
}

}  // namespace

LineTheory::LineTheory(double p_, double q_) : p(p_), q(q_) {
  check_prob(p, "p");
  check_prob(q, "q");
  a = p * q;
  b = 1.0 - p + p * q;
  c = 1.0 - p;
}

double line_detection_probability(double p, double q) {
  check_prob(p, "p");
  check_prob(q, "q");
  double pq = p * q;
  return q + (1.0 - q) * pq * (pq + 3.0 - 3.0 * p) /
                 ((pq + 2.0 - 2.0 * p) * (pq + 1.0 - p));
}

double line_expected_distance_bound(double p, double q) {
  check_prob(p, "p");
  check_prob(q, "q");
  double pq = p * q;
  double tail = 2.0 * (1.0 - p + pq) * (1.0 - p) * (1.0 - p) /
                (pq * (2.0 - 2.0 * p + pq) * (2.0 - 2.0 * p + pq));
  return (1.0 - q) * std::min(1.0 / q, tail);
}

double sigma_diff_pmf(double p, double q, std::int64_t n) {
  LineTheory th(p, q);
  double ratio = th.c / th.b;
  return th.a * th.a / (th.b * th.b - th.c * th.c) *
         std::pow(ratio, static_cast<double>(std::llabs(n)));
}

RegularTreeBound regular_tree_bound(int degree, double p, double q, int horizon) {
  if (degree < 3) throw std::invalid_argument("regular_tree_bound: degree must be >= 3");
  if (horizon < 1) throw std::invalid_argument("regular_tree_bound: horizon must be >= 1");
  check_prob(p, "p");
  check_prob(q, "q");

  RegularTreeBound out;
  out.degree = degree;
  out.p = p;
  out.q = q;
  out.horizon = horizon;

  auto h = [&](double x) {
    return std::pow(1.0 - p + p * (1.0 - q) * x, degree - 1);
  };

  double x = 1.0;
  out.x_seq.push_back(x);
  for (int i = horizon - 1; i >= 1; --i) {
    x = h(x);
    out.x_seq.push_back(x);
  }
  out.x1 = x;
  out.bound = 1.0 - (1.0 - q) * std::pow(1.0 - p + p * (1.0 - q) * out.x1, degree);

  double fx = 1.0;
  for (long step = 0; step < 1'000'000; ++step) {
    double next = h(fx);
    if (std::fabs(next - fx) < 1e-12) {
      fx = next;
      break;
    }
    fx = next;
  }
  out.x_star = fx;
  return out;
}

std::pair<double, double> naive_line_stats(double q) {
  check_prob(q, "q");
  return {q, (1.0 - q) / q};
}

bool CandidatePath::contains(NodeId u) const {
  return std::find(path_nodes.begin(), path_nodes.end(), u) != path_nodes.end();
}

CandidatePath candidate_path(const Network& g, NodeId v_star, const Observation& obs) {
  if (!g.is_tree) throw std::logic_error("candidate_path requires a tree graph");
  if (obs.empty()) throw std::invalid_argument("candidate_path: no observers");
  if (obs.contains(v_star))
    throw std::logic_error("candidate_path: the source is itself observed");

  BfsFrame from_v = bfs_frame(g, v_star);
  std::vector<char> is_sampled(g.node_count, 0);
  for (NodeId s : obs.sampled) is_sampled[s] = 1;

  CandidatePath cp;
  // Observers whose path from v* carries no other observer.
  for (NodeId s : obs.sampled) {
    int seen = 0;
    for (NodeId w = s; w != -1; w = from_v.parent[w])
      if (is_sampled[w]) ++seen;
    if (seen == 1) cp.u_set.push_back(s);
  }
  if (cp.u_set.empty())
    throw std::invalid_argument("candidate_path: no observers reachable from the source");

  auto path_from = [](const BfsFrame& t, NodeId s) {
    std::vector<NodeId> path;
    for (NodeId w = s; w != -1; w = t.parent[w]) path.push_back(w);
    std::reverse(path.begin(), path.end());
    return path;  // root first
  };

  auto common_prefix = [&](const BfsFrame& t, const std::vector<NodeId>& targets) {
    std::vector<NodeId> prefix = path_from(t, targets.front());
    for (std::size_t i = 1; i < targets.size(); ++i) {
      std::vector<NodeId> other = path_from(t, targets[i]);
      std::size_t k = 0;
      while (k < prefix.size() && k < other.size() && prefix[k] == other[k]) ++k;
      prefix.resize(k);
    }
    return prefix;
  };

  std::vector<NodeId> toward = common_prefix(from_v, cp.u_set);
  cp.anchor = toward.back();  // farthest node from v* common to all U-paths

  BfsFrame from_anchor = bfs_frame(g, cp.anchor);
  std::int64_t best = 0;
  bool first = true;
  for (NodeId s : cp.u_set) {
    std::int64_t key = *obs.time_of(s) - from_anchor.depth[s];
    if (first || key < best) {
      best = key;
      first = false;
    }
  }
  for (NodeId s : cp.u_set)
    if (*obs.time_of(s) - from_anchor.depth[s] == best) cp.u_star_set.push_back(s);

  cp.path_nodes = common_prefix(from_anchor, cp.u_star_set);
  cp.length = static_cast<int>(cp.path_nodes.size()) - 1;
  return cp;
}

std::int64_t LineRealization::m_tilde() const {
  std::int64_t s1 = sigma1();
  std::int64_t s2 = sigma2();
  if (s1 < s2) return left_distance;
  if (s1 > s2) return right_distance;
  return 0;
}

std::optional<LineRealization> line_realization(const Network& line, NodeId v_star,
                                                const Observation& obs) {
  if (!line.has_node(v_star)) throw std::invalid_argument("line_realization: bad node");
  NodeId left = -1, right = -1;
  for (NodeId u = v_star - 1; u >= 0; --u)
    if (obs.contains(u)) {
      left = u;
      break;
    }
  for (NodeId u = v_star + 1; u < line.node_count; ++u)
    if (obs.contains(u)) {
      right = u;
      break;
    }
  if (left < 0 || right < 0) return std::nullopt;
  LineRealization r;
  r.left_distance = v_star - left;
  r.right_distance = right - v_star;
  r.left_time = *obs.time_of(left);
  r.right_time = *obs.time_of(right);
  return r;
}

std::int64_t line_error_from_sigmas(const LineRealization& r) {
  std::int64_t diff = std::llabs(r.sigma1() - r.sigma2());
  return std::min(diff / 2, r.m_tilde());
}

}  // namespace srcloc
