#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srcloc/diffusion.hpp"
#include "srcloc/estimators.hpp"
#include "srcloc/graph.hpp"
#include "srcloc/theory.hpp"

namespace srcloc {

// ---------------------------------------------------------------- generators

Network generate_line(int n);
Network generate_regular_tree(int degree, int depth);
Network generate_er(int n, std::int64_t edges, std::uint64_t seed);
Network generate_ba(int n, int attach, std::uint64_t seed);

/// Uniform-attachment random tree (node i picks a parent among 0..i-1).
Network random_tree(int n, std::uint64_t seed);

/// "gen:line:<n>", "gen:rt:<g>:<depth>", "gen:er:<n>:<m>:<seed>",
/// "gen:ba:<n>:<m>:<seed>", or a path to an edge-list file.
Network network_from_spec(const std::string& spec);

// --------------------------------------------------------------------- sweep

struct SweepConfig {
  std::string network;  // generator spec or edge-list path
  std::vector<double> p_values;
  std::vector<double> q_values;
  int trials = 500;
  std::uint64_t master_seed = 1;
  std::vector<std::string> estimators{"inf"};  // "inf" and/or "min"
  double theta = 0.95;
  bool full_sampled_set = false;
  std::string out_csv;       // optional; CSV text is returned either way
  std::string records_path;  // optional JSONL of per-trial records
};

struct SweepCell {
  double p = 0.5, q = 0.5;
  std::string estimator;
  int trials = 0;
  double mean_dist = 0.0;
  double detect_rate = 0.0;
  double stderr_mean = 0.0;
  std::int64_t resampled = 0;  // empty observer sets redrawn
};

std::vector<SweepCell> run_sweep(const SweepConfig& cfg);
std::string sweep_csv(const std::vector<SweepCell>& cells);
SweepConfig sweep_config_from_file(const std::string& path);

// ----------------------------------------------------------------- validates

struct ValidateParams {
  double p = 0.5;
  double q = 0.5;
  long trials = 10000;
  std::uint64_t seed = 1;
  int degree = 3;
  int horizon = 1;   // distance bound checked on regular trees
  int depth = 10;    // generated tree depth
  double theta = 0.95;
};

struct LineTheorem2Report {
  long trials = 0;
  double detect_rate = 0.0;        // true source attains the optimal score
  double detect_rate_point = 0.0;  // lowest-id winner equals the source
  double expected_rate = 0.0;      // closed form
  double mean_distance = 0.0;
  double distance_bound = 0.0;  // closed-form bound on the mean
  double mean_stderr = 0.0;
  std::int64_t resampled = 0;
  long source_observed_violations = 0;  // v* observed but not returned
};
LineTheorem2Report validate_line_theorem2(const ValidateParams& prm);

struct TreeTheorem3Report {
  long trials = 0;
  std::vector<double> within;  // within[D] = empirical P(d <= D), D = 0..3
  std::vector<double> bounds;  // bounds[D] = closed-form lower bound, D = 1..3 (index 0 unused)
  double flagged_fraction = 0.0;  // candidate path touched the depth boundary
  std::int64_t resampled = 0;
  long source_observed_violations = 0;
};
TreeTheorem3Report validate_tree_theorem3(const ValidateParams& prm);

struct Prop6Report {
  long trials = 0;
  double min_rate = 0.0;
  double min_mean = 0.0;
  double inf_mean = 0.0;
  long dominance_violations = 0;      // trials with d_inf > d_min (returned source)
  long dominance_violations_tie = 0;  // same, measured at the nearest tied optimum
  std::int64_t resampled = 0;
  long source_observed_violations = 0;
};
Prop6Report validate_prop6(const ValidateParams& prm);

struct OracleLipReport {
  long trials = 0;
  long mismatches = 0;
  double seconds = 0.0;
};
OracleLipReport validate_oracle_lip(const ValidateParams& prm);

struct CandidatePathReport {
  long tree_trials = 0;
  long on_path = 0;        // estimator landed on the candidate path
  long line_trials = 0;
  long formula_matches = 0;  // index formula reproduced the error exactly
  long line_skipped = 0;     // no observer on one side of the source
};
CandidatePathReport validate_candidate_path(const ValidateParams& prm);

struct ReducedSearchReport {
  long trials = 0;
  long agree = 0;  // exhaustive scan and reduced-region scan fully agree
};
ReducedSearchReport validate_reduced_search(const ValidateParams& prm);

struct PgfReport {
  long realizations = 0;
  double chi2 = 0.0;
  double p_value = 0.0;
  int bins = 0;
};
PgfReport validate_pgf_pmf(const ValidateParams& prm);

struct Prop5Report {
  long applicable = 0;  // trials with the source observed
  long tree_violations = 0;
  long graph_violations = 0;
};
Prop5Report validate_prop5(const ValidateParams& prm);

/// String-kind dispatcher used by the CLI; returns pass/fail plus a JSON blob.
struct ValidateOutcome {
  std::string kind;
  bool pass = false;
  std::string details_json;
};
ValidateOutcome validate(const std::string& kind, const ValidateParams& prm);

// ------------------------------------------------------------------ utilities

/// Upper-tail probability of a chi-square statistic.
double chi_square_pvalue(double chi2, int dof);

}  // namespace srcloc
