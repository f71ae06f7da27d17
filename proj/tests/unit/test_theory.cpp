#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "srcloc/diffusion.hpp"
#include "srcloc/estimators.hpp"
#include "srcloc/harness.hpp"
#include "srcloc/lip.hpp"
#include "srcloc/rng.hpp"
#include "srcloc/theory.hpp"

using namespace srcloc;

namespace {

Observation make_obs(std::vector<NodeId> nodes, std::vector<std::int64_t> times) {
  Observation obs;
  obs.sampled = std::move(nodes);
  obs.timestamps = std::move(times);
  return obs;
}

}  // namespace

TEST_CASE("line detection probability") {
  CHECK(line_detection_probability(0.3, 1.0) == doctest::Approx(1.0));
  CHECK(line_detection_probability(0.5, 0.5) == doctest::Approx(0.73333333333));
  CHECK(line_detection_probability(0.5, 0.2) == doctest::Approx(0.39393939394));
}

TEST_CASE("line expected distance bound") {
  CHECK(line_expected_distance_bound(0.5, 1.0) == doctest::Approx(0.0));
  CHECK(line_expected_distance_bound(0.5, 0.5) == doctest::Approx(0.48));
  CHECK(line_expected_distance_bound(0.9, 0.1) == doctest::Approx(0.451843044));
}

TEST_CASE("sigma difference pmf") {
  CHECK(sigma_diff_pmf(0.5, 0.5, 0) == doctest::Approx(0.2));
  for (int n = 1; n <= 6; ++n)
    CHECK(sigma_diff_pmf(0.4, 0.3, n) == doctest::Approx(sigma_diff_pmf(0.4, 0.3, -n)));
  double total = 0;
  for (int n = -2000; n <= 2000; ++n) total += sigma_diff_pmf(0.5, 0.5, n);
  CHECK(total >= 1.0 - 1e-9);
  CHECK(total <= 1.0 + 1e-9);
}

TEST_CASE("regular tree bound") {
  RegularTreeBound b1 = regular_tree_bound(3, 0.5, 0.5, 1);
  CHECK(b1.x1 == doctest::Approx(1.0));
  CHECK(b1.bound == doctest::Approx(0.7890625));
  CHECK(b1.x_star == doctest::Approx(0.3431457505).epsilon(1e-9));

  double prev = 2.0;
  for (int horizon = 1; horizon <= 10; ++horizon) {
    RegularTreeBound b = regular_tree_bound(3, 0.5, 0.5, horizon);
    CHECK(b.x1 < prev);
    prev = b.x1;
    CHECK(b.x1 >= b.x_star - 1e-12);
  }

  // h is increasing and convex on [0, 1].
  auto h = [](double x) { return std::pow(0.5 + 0.25 * x, 2); };
  double step = 0.05;
  for (double x = 0.0; x + 2 * step <= 1.0; x += step) {
    CHECK(h(x + step) > h(x));
    CHECK(h(x + 2 * step) - h(x + step) > h(x + step) - h(x));
  }
}

TEST_CASE("naive line stats and the small-q ratio") {
  auto [rate1, mean1] = naive_line_stats(1.0);
  CHECK(rate1 == doctest::Approx(1.0));
  CHECK(mean1 == doctest::Approx(0.0));
  auto [rate2, mean2] = naive_line_stats(0.5);
  CHECK(rate2 == doctest::Approx(0.5));
  CHECK(mean2 == doctest::Approx(1.0));

  double q = 1e-4, p = 0.5;
  double ratio = line_detection_probability(p, q) / q;
  CHECK(std::fabs(ratio - (1.0 + 3.0 * p / (2.0 * (1.0 - p)))) <
        0.01 * (1.0 + 3.0 * p / (2.0 * (1.0 - p))));
}

TEST_CASE("candidate path on the line example") {
  Network line = generate_line(7);
  Observation obs = make_obs({1, 5}, {2, 4});
  CandidatePath cp = candidate_path(line, 3, obs);
  CHECK(cp.anchor == 3);
  CHECK(cp.u_set == std::vector<NodeId>{1, 5});
  CHECK(cp.u_star_set == std::vector<NodeId>{1});
  CHECK(cp.path_nodes == std::vector<NodeId>{3, 2, 1});
  CHECK(cp.length == 2);
}

TEST_CASE("candidate path degenerates under symmetric observations") {
  Network line = generate_line(7);
  Observation obs = make_obs({1, 5}, {2, 2});
  CandidatePath cp = candidate_path(line, 3, obs);
  CHECK(cp.u_star_set == std::vector<NodeId>{1, 5});
  CHECK(cp.path_nodes == std::vector<NodeId>{3});
  CHECK(cp.length == 0);
}

TEST_CASE("candidate path anchor sits at the source with observers in two branches") {
  Network tree = generate_regular_tree(3, 2);
  Observation obs = make_obs({1, 2}, {1, 1});
  CandidatePath cp = candidate_path(tree, 0, obs);
  CHECK(cp.anchor == 0);
  CHECK(cp.path_nodes.front() == 0);

  CHECK_THROWS_AS(candidate_path(tree, 1, obs), std::logic_error);  // observed source
}

TEST_CASE("line realization error formula") {
  LineRealization r;
  r.left_distance = 3;
  r.right_distance = 4;
  r.left_time = 3;  // sigma1 = 0
  r.right_time = 4;  // sigma2 = 0
  CHECK(line_error_from_sigmas(r) == 0);

  r.left_distance = 2;
  r.left_time = 2;   // sigma1 = 0
  r.right_distance = 2;
  r.right_time = 4;  // sigma2 = 2, m_tilde = 2
  CHECK(r.m_tilde() == 2);
  CHECK(line_error_from_sigmas(r) == 1);

  r.right_time = 11;  // sigma2 = 9
  CHECK(line_error_from_sigmas(r) == 2);  // clamped by the path length
}

TEST_CASE("line realization extraction") {
  Network line = generate_line(9);
  Observation obs = make_obs({1, 6}, {5, 9});
  auto r = line_realization(line, 4, obs);
  REQUIRE(r.has_value());
  CHECK(r->left_distance == 3);
  CHECK(r->right_distance == 2);
  CHECK(r->left_time == 5);
  CHECK(r->right_time == 9);
  CHECK_FALSE(line_realization(line, 0, obs).has_value());
}

TEST_CASE("candidate path properties on simulated trees") {
  Rng rng(404);
  long checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 8 + static_cast<int>(rng.next_below(80));
    Network g = random_tree(n, rng.next_u64());
    NodeId src = static_cast<NodeId>(rng.next_below(n));
    Cascade c = simulate_si(g, DiffusionConfig{0.5, 0, src}, rng.next_u64());
    Observation obs = sample_observers(c, 0.4, rng.next_u64());
    if (obs.empty() || obs.contains(src)) continue;
    ++checked;
    CandidatePath cp = candidate_path(g, src, obs);

    // Interior path nodes are unobserved.
    for (std::size_t i = 0; i + 1 < cp.path_nodes.size(); ++i)
      CHECK_FALSE(obs.contains(cp.path_nodes[i]));

    // An observed endpoint closes the path: none of the distance-1 observers
    // lies beyond it.
    NodeId end = cp.path_nodes.back();
    if (obs.contains(end) && cp.path_nodes.size() > 1) {
      RootedTree from_prev = bfs_tree(g, cp.path_nodes[cp.path_nodes.size() - 2]);
      for (NodeId s : cp.u_set) {
        if (s == end) continue;
        bool beyond = false;
        for (NodeId w = s; w != -1; w = from_prev.parent[w])
          if (w == end) {
            beyond = true;
            break;
          }
        CHECK_FALSE(beyond);
      }
    }

    // Running message passing from the anchor pins the path labels to
    // i + min over U of (t - d(anchor, .)).
    CascadingTree ct = build_cascading_tree(g, cp.anchor, obs.sampled);
    auto mp = message_passing(ct, obs);
    REQUIRE(mp.has_value());
    std::vector<std::int32_t> d_anchor = bfs_distances(g, cp.anchor);
    std::int64_t base = std::numeric_limits<std::int64_t>::max();
    for (NodeId s : cp.u_set)
      base = std::min(base, *obs.time_of(s) - d_anchor[s]);
    for (std::size_t i = 0; i < cp.path_nodes.size(); ++i)
      CHECK(mp->tau[cp.path_nodes[i]] == base + static_cast<std::int64_t>(i));

    // The estimator stays on the path.
    Estimate est = localize_tree(g, obs, 0.5, true);
    CHECK(cp.contains(est.source));
  }
  CHECK(checked > 20);
}
