#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "srcloc/diffusion.hpp"
#include "srcloc/estimators.hpp"
#include "srcloc/harness.hpp"
#include "srcloc/theory.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SI-cascade simulation and source localization from partial timestamps"};
  app.require_subcommand(1);

  // simulate
  std::string sim_graph, sim_out;
  int sim_source = 0;
  double sim_p = 0.5;
  std::uint64_t sim_seed = 1;
  std::int64_t sim_t0 = 0;
  auto* sim = app.add_subcommand("simulate", "Run one SI cascade to completion");
  sim->add_option("--graph", sim_graph, "edge-list file or gen:<spec>")->required();
  sim->add_option("--source", sim_source, "source node id")->required();
  sim->add_option("--p", sim_p, "per-slot infection probability")->required();
  sim->add_option("--seed", sim_seed, "rng seed")->required();
  sim->add_option("--t0", sim_t0, "starting slot");
  sim->add_option("--out", sim_out, "write the cascade as JSON");

  // observe
  std::string obs_cascade, obs_out;
  double obs_q = 0.5;
  std::uint64_t obs_seed = 1;
  auto* obs_cmd = app.add_subcommand("observe", "Sample observers from a cascade");
  obs_cmd->add_option("--cascade", obs_cascade, "cascade JSON file")->required();
  obs_cmd->add_option("--q", obs_q, "sampling probability")->required();
  obs_cmd->add_option("--seed", obs_seed, "rng seed")->required();
  obs_cmd->add_option("--out", obs_out, "observation JSON output")->required();

  // estimate
  std::string est_graph, est_obs, est_method = "auto";
  double est_p = 0.5, est_theta = 0.95;
  bool est_full = false;
  std::uint64_t est_seed = 0;
  auto* est_cmd = app.add_subcommand("estimate", "Locate the source from an observation");
  est_cmd->add_option("--graph", est_graph, "edge-list file or gen:<spec>")->required();
  est_cmd->add_option("--obs", est_obs, "observation JSON file")->required();
  est_cmd->add_option("--p", est_p, "per-slot infection probability")->required();
  est_cmd->add_option("--theta", est_theta, "observer-coverage threshold");
  est_cmd->add_option("--method", est_method, "tree|graph|min (default: by topology)");
  est_cmd->add_flag("--full-sampled-set", est_full,
                    "span all observers instead of those in the reduced region");
  est_cmd->add_option("--seed", est_seed, "tie-break seed for the min estimator");

  // sweep
  std::string sweep_config;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a seeded experiment grid");
  sweep_cmd->add_option("--config", sweep_config, "JSON sweep config")->required();

  // theory
  std::string th_kind;
  double th_p = 0.5, th_q = 0.5;
  int th_g = 3, th_depth_bound = 1;
  auto* th_cmd = app.add_subcommand("theory", "Print closed-form values");
  th_cmd->add_option("--kind", th_kind, "line|tree|min")->required();
  th_cmd->add_option("--p", th_p, "infection probability");
  th_cmd->add_option("--q", th_q, "sampling probability");
  th_cmd->add_option("--g", th_g, "tree degree");
  th_cmd->add_option("--depth-bound", th_depth_bound, "distance bound for the tree kind");

  // validate
  std::string val_kind;
  srcloc::ValidateParams val;
  auto* val_cmd = app.add_subcommand("validate", "Monte-Carlo check against closed forms");
  val_cmd
      ->add_option("--kind", val_kind,
                   "line-theorem2|tree-theorem3|prop6|oracle-lip|candidate-path|"
                   "reduced-search|pgf-pmf|prop5")
      ->required();
  val_cmd->add_option("--trials", val.trials, "trial count")->required();
  val_cmd->add_option("--seed", val.seed, "master seed")->required();
  val_cmd->add_option("--p", val.p, "infection probability");
  val_cmd->add_option("--q", val.q, "sampling probability");
  val_cmd->add_option("--g", val.degree, "tree degree");
  val_cmd->add_option("--depth-bound", val.horizon, "distance bound");
  val_cmd->add_option("--depth", val.depth, "generated tree depth");
  val_cmd->add_option("--theta", val.theta, "observer-coverage threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      srcloc::Network g = srcloc::network_from_spec(sim_graph);
      srcloc::Cascade c = srcloc::simulate_si(
          g, srcloc::DiffusionConfig{sim_p, sim_t0, sim_source}, sim_seed);
      std::int64_t infected = 0, t_max = c.t0;
      for (srcloc::NodeId u = 0; u < g.node_count; ++u)
        if (c.infected(u)) {
          ++infected;
          t_max = std::max(t_max, c.first_infection[u]);
        }
      std::printf("infected %lld nodes over slots [%lld, %lld]\n",
                  static_cast<long long>(infected), static_cast<long long>(c.t0),
                  static_cast<long long>(t_max));
      if (!sim_out.empty()) spit(sim_out, srcloc::cascade_to_json(c));
    } else if (*obs_cmd) {
      srcloc::Cascade c = srcloc::cascade_from_json(slurp(obs_cascade));
      srcloc::Observation o = srcloc::sample_observers(c, obs_q, obs_seed);
      spit(obs_out, srcloc::observation_to_json(o));
      std::printf("sampled %zu observers\n", o.size());
    } else if (*est_cmd) {
      srcloc::Network g = srcloc::network_from_spec(est_graph);
      srcloc::Observation o = srcloc::observation_from_json(slurp(est_obs));
      std::string method = est_method;
      if (method == "auto") method = g.is_tree ? "tree" : "graph";
      if (method == "min") {
        std::printf("%d\n", srcloc::min_timestamp_estimator(o, est_seed));
      } else {
        srcloc::Estimate est = method == "tree"
                                   ? srcloc::localize_tree(g, o, est_p, est_full)
                                   : srcloc::localize_graph(g, o, est_p, est_theta);
        std::printf("%d %lld\n", est.source, static_cast<long long>(est.score));
        if (est.used_fallback)
          std::fprintf(stderr, "warning: no feasible candidate; returned the earliest observer\n");
      }
    } else if (*sweep_cmd) {
      srcloc::SweepConfig cfg = srcloc::sweep_config_from_file(sweep_config);
      std::vector<srcloc::SweepCell> cells = srcloc::run_sweep(cfg);
      std::string csv = srcloc::sweep_csv(cells);
      if (cfg.out_csv.empty()) std::fputs(csv.c_str(), stdout);
    } else if (*th_cmd) {
      if (th_kind == "line") {
        std::printf("detection_probability %.10f\n",
                    srcloc::line_detection_probability(th_p, th_q));
        std::printf("expected_distance_bound %.10f\n",
                    srcloc::line_expected_distance_bound(th_p, th_q));
      } else if (th_kind == "tree") {
        srcloc::RegularTreeBound b =
            srcloc::regular_tree_bound(th_g, th_p, th_q, th_depth_bound);
        std::printf("bound %.10f\nx1 %.10f\nx_star %.10f\n", b.bound, b.x1, b.x_star);
      } else if (th_kind == "min") {
        auto [rate, mean] = srcloc::naive_line_stats(th_q);
        std::printf("detection_probability %.10f\nexpected_distance %.10f\n", rate, mean);
      } else {
        throw std::invalid_argument("theory: unknown kind " + th_kind);
      }
    } else if (*val_cmd) {
      srcloc::ValidateOutcome out = srcloc::validate(val_kind, val);
      std::printf("%s\n", out.details_json.c_str());
      return out.pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
