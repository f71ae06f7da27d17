#include <stdexcept>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "srcloc/harness.hpp"

using namespace srcloc;

TEST_CASE("line generator") {
  CHECK(generate_line(2).edge_count == 1);
  Network g = generate_line(5);
  CHECK(g.edge_count == 4);
  for (NodeId u = 1; u < 4; ++u) CHECK(g.degree(u) == 2);
  CHECK(generate_line(2001).is_tree);
  CHECK_THROWS_AS(generate_line(1), std::invalid_argument);
}

TEST_CASE("regular tree generator") {
  CHECK(generate_regular_tree(3, 1).node_count == 4);
  Network g = generate_regular_tree(3, 2);
  CHECK(g.node_count == 10);
  CHECK(g.is_tree);
  for (NodeId u = 0; u < g.node_count; ++u)
    if (g.degree(u) > 1) CHECK(g.degree(u) == 3);

  Network g5 = generate_regular_tree(5, 3);
  for (NodeId u = 0; u < g5.node_count; ++u)
    if (g5.degree(u) > 1) CHECK(g5.degree(u) == 5);
}

TEST_CASE("erdos-renyi generator") {
  Network g = generate_er(1024, 10487, 3);
  CHECK(g.node_count == 1024);
  CHECK(g.edge_count == 10487);

  Network again = generate_er(1024, 10487, 3);
  CHECK(g.adjacency == again.adjacency);
  Network other = generate_er(1024, 10487, 4);
  CHECK(g.adjacency != other.adjacency);

  Network sparse = generate_er(64, 63, 5);
  CHECK(sparse.edge_count == 63);
  CHECK_THROWS_AS(generate_er(4, 7, 1), std::invalid_argument);
}

TEST_CASE("preferential attachment generator") {
  Network g = generate_ba(1024, 4, 9);
  CHECK(g.node_count == 1024);
  CHECK(g.edge_count == 4080);

  Network tree = generate_ba(200, 1, 2);
  CHECK(tree.is_tree);

  Network again = generate_ba(1024, 4, 9);
  CHECK(g.adjacency == again.adjacency);
}

TEST_CASE("network spec parsing") {
  CHECK(network_from_spec("gen:line:10").node_count == 10);
  CHECK(network_from_spec("gen:rt:3:2").node_count == 10);
  CHECK(network_from_spec("gen:er:50:100:1").edge_count == 100);
  CHECK(network_from_spec("gen:ba:50:2:1").node_count == 50);
  CHECK_THROWS_AS(network_from_spec("gen:ring:5"), std::invalid_argument);
  CHECK_THROWS_AS(network_from_spec("gen:line"), std::invalid_argument);
}

TEST_CASE("chi-square upper tail") {
  CHECK(chi_square_pvalue(3.841, 1) == doctest::Approx(0.05001).epsilon(1e-3));
  CHECK(chi_square_pvalue(40.75, 17) == doctest::Approx(0.0010133).epsilon(1e-3));
  CHECK(chi_square_pvalue(16.0, 17) == doctest::Approx(0.523835).epsilon(1e-4));
  CHECK(chi_square_pvalue(0.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("sweep on a fully observed line detects every source") {
  SweepConfig cfg;
  cfg.network = "gen:line:51";
  cfg.p_values = {0.5};
  cfg.q_values = {1.0};
  cfg.trials = 40;
  cfg.master_seed = 5;
  cfg.estimators = {"inf", "min"};
  std::vector<SweepCell> cells = run_sweep(cfg);
  REQUIRE(cells.size() == 2);
  for (const SweepCell& c : cells) {
    CHECK(c.detect_rate == doctest::Approx(1.0));
    CHECK(c.mean_dist == doctest::Approx(0.0));
  }
}

TEST_CASE("min estimator sweep statistics") {
  SweepConfig cfg;
  cfg.network = "gen:line:501";
  cfg.p_values = {0.5};
  cfg.q_values = {0.5};
  cfg.trials = 2000;
  cfg.master_seed = 11;
  cfg.estimators = {"min"};
  std::vector<SweepCell> cells = run_sweep(cfg);
  REQUIRE(cells.size() == 1);
  // The min-timestamp side is biased toward the nearer observer, so the mean
  // sits below (1-q)*E[L]. 0.715 comes from an independent Monte Carlo of the
  // two-sided geometric model.
  CHECK(cells[0].mean_dist == doctest::Approx(0.715).epsilon(0.09));
  CHECK(cells[0].detect_rate == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("sweep output is byte-stable and config files parse") {
  const char* cfg_path = "sweep_cfg_test.json";
  {
    std::ofstream out(cfg_path);
    out << R"({"network":"gen:line:101","p":0.5,"q":[0.3,0.6],"trials":50,)"
        << R"("seed":7,"estimators":["inf","min"]})";
  }
  SweepConfig cfg = sweep_config_from_file(cfg_path);
  std::remove(cfg_path);
  CHECK(cfg.q_values.size() == 2);
  CHECK(cfg.trials == 50);

  std::string a = sweep_csv(run_sweep(cfg));
  std::string b = sweep_csv(run_sweep(cfg));
  CHECK(a == b);
  CHECK(a.rfind("p,q,estimator,trials,mean_dist,detect_rate,stderr,resampled\n", 0) == 0);
}

TEST_CASE("validate dispatcher") {
  ValidateParams prm;
  prm.trials = 25;
  prm.seed = 3;
  ValidateOutcome out = validate("oracle-lip", prm);
  CHECK(out.pass);
  CHECK_THROWS_AS(validate("nope", prm), std::invalid_argument);
}

TEST_CASE("per-trial records are line-delimited json") {
  SweepConfig cfg;
  cfg.network = "gen:line:51";
  cfg.p_values = {0.5};
  cfg.q_values = {0.5};
  cfg.trials = 12;
  cfg.master_seed = 3;
  cfg.estimators = {"inf", "min"};
  cfg.records_path = "records_test.jsonl";
  run_sweep(cfg);
  std::ifstream in(cfg.records_path);
  REQUIRE(in.good());
  long lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(line.find("\"true_source\"") != std::string::npos);
    CHECK(line.find("\"estimates\"") != std::string::npos);
  }
  in.close();
  std::remove(cfg.records_path.c_str());
  CHECK(lines == 12);
}

TEST_CASE("worker count never changes sweep output") {
  SweepConfig cfg;
  cfg.network = "gen:rt:3:5";
  cfg.p_values = {0.5};
  cfg.q_values = {0.4};
  cfg.trials = 80;
  cfg.master_seed = 21;
  cfg.estimators = {"inf", "min"};
  setenv("SRCLOC_THREADS", "1", 1);
  std::string serial = sweep_csv(run_sweep(cfg));
  setenv("SRCLOC_THREADS", "4", 1);
  std::string wide = sweep_csv(run_sweep(cfg));
  unsetenv("SRCLOC_THREADS");
  CHECK(serial == wide);
}

TEST_CASE("line detection tracks the closed form across a q grid") {
  ValidateParams prm;
  prm.p = 0.5;
  prm.trials = 1500;
  prm.seed = 97;
  for (double q : {0.2, 0.4, 0.6, 0.8}) {
    prm.q = q;
    LineTheorem2Report r = validate_line_theorem2(prm);
    double se = std::sqrt(r.expected_rate * (1 - r.expected_rate) / prm.trials);
    CHECK(std::fabs(r.detect_rate - r.expected_rate) <= 3 * se);
  }
}

TEST_CASE("sweep supports the full-sampled-set estimator mode") {
  SweepConfig cfg;
  cfg.network = "gen:line:101";
  cfg.p_values = {0.5};
  cfg.q_values = {0.5};
  cfg.trials = 60;
  cfg.master_seed = 13;
  cfg.estimators = {"inf"};
  cfg.full_sampled_set = true;
  std::vector<SweepCell> full = run_sweep(cfg);
  cfg.full_sampled_set = false;
  std::vector<SweepCell> reduced = run_sweep(cfg);
  REQUIRE(full.size() == 1);
  REQUIRE(reduced.size() == 1);
  CHECK(full[0].detect_rate > 0.5);
  CHECK(reduced[0].detect_rate > 0.5);
}
