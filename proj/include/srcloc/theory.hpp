#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "srcloc/diffusion.hpp"
#include "srcloc/graph.hpp"

namespace srcloc {

/// Constants of the infinite-line analysis: a = pq, b = 1-p+pq, c = 1-p.
struct LineTheory {
  double p, q, a, b, c;
  LineTheory(double p_, double q_);
};

/// Closed-form probability that the infection-path estimator hits the true
/// source on the infinite line with observer density q.
double line_detection_probability(double p, double q);

/// Closed-form upper bound on the expected hop error on the infinite line.
double line_expected_distance_bound(double p, double q);

/// pmf of the difference of the two shifted observer timestamps on the line:
/// a^2/(b^2-c^2) * (c/b)^|n|.
double sigma_diff_pmf(double p, double q, std::int64_t n);

/// Lower bound on P(error <= horizon) on the infinite degree-g tree,
/// computed by the backward iteration x_D = 1, x_i = h(x_{i+1}),
/// h(x) = (1-p+p(1-q)x)^(g-1), plus the fixed point of h.
struct RegularTreeBound {
  int degree = 3;
  double p = 0.5, q = 0.5;
  int horizon = 1;
  std::vector<double> x_seq;  // x_D down to x_1
  double x1 = 1.0;
  double x_star = 1.0;
  double bound = 0.0;
};
RegularTreeBound regular_tree_bound(int degree, double p, double q, int horizon);

/// (detection probability, expected distance) of the minimum-timestamp
/// baseline on the infinite line: (q, (1-q)/q).
std::pair<double, double> naive_line_stats(double q);

/// The path that provably contains the estimator when the source is not
/// observed: anchor = farthest node from v* common to all paths toward the
/// distance-1 observers U; the path runs from the anchor toward the
/// observers minimizing t_s - d(anchor, s).
struct CandidatePath {
  NodeId anchor = -1;
  std::vector<NodeId> u_set;       // observers at sampled-distance 1 from v*
  std::vector<NodeId> u_star_set;  // subset minimizing t_s - d(anchor, s)
  std::vector<NodeId> path_nodes;  // ordered from the anchor
  int length = 0;

  bool contains(NodeId u) const;
};
CandidatePath candidate_path(const Network& g, NodeId v_star, const Observation& obs);

/// One line-graph trial reduced to the quantities the closed forms consume:
/// distances and timestamps of the nearest observers on each side.
struct LineRealization {
  std::int64_t left_distance = 0;   // L1
  std::int64_t right_distance = 0;  // L2
  std::int64_t left_time = 0;       // t1
  std::int64_t right_time = 0;      // t2

  std::int64_t sigma1() const { return left_time - left_distance; }
  std::int64_t sigma2() const { return right_time - right_distance; }
  std::int64_t m_tilde() const;  // candidate-path length
};

/// Extract the realization for a line network whose node ids are positions
/// 0..n-1. Empty when either side of v_star has no observer.
std::optional<LineRealization> line_realization(const Network& line, NodeId v_star,
                                                const Observation& obs);

/// Hop error of the infection-path estimator on the line, as a function of
/// the realization: min(floor(|sigma1-sigma2| / 2), m_tilde).
std::int64_t line_error_from_sigmas(const LineRealization& r);

}  // namespace srcloc
