#include "srcloc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "srcloc/parallel.hpp"
#include "srcloc/rng.hpp"

namespace srcloc {

// ---------------------------------------------------------------- generators

Network generate_line(int n) {
  if (n < 2) throw std::invalid_argument("generate_line: n must be >= 2");
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n - 1);
  for (NodeId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return from_edges(n, edges);
}

Network generate_regular_tree(int degree, int depth) {
  if (degree < 3) throw std::invalid_argument("generate_regular_tree: degree must be >= 3");
  if (depth < 1) throw std::invalid_argument("generate_regular_tree: depth must be >= 1");
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> level{0};
  NodeId next = 1;
  for (int d = 0; d < depth; ++d) {
    std::vector<NodeId> below;
    for (NodeId u : level) {
      int fanout = (d == 0) ? degree : degree - 1;
      for (int k = 0; k < fanout; ++k) {
        edges.emplace_back(u, next);
        below.push_back(next);
        ++next;
      }
    }
    level = std::move(below);
  }
  return from_edges(next, edges);
}

Network generate_er(int n, std::int64_t edges, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_er: n must be >= 1");
  std::int64_t max_edges = static_cast<std::int64_t>(n) * (n - 1) / 2;
  if (edges < 0 || edges > max_edges)
    throw std::invalid_argument("generate_er: edge count out of range");
  Rng rng(seed);
  std::set<std::pair<NodeId, NodeId>> chosen;
  while (static_cast<std::int64_t>(chosen.size()) < edges) {
    NodeId u = static_cast<NodeId>(rng.next_below(n));
    NodeId v = static_cast<NodeId>(rng.next_below(n));
    if (u == v) continue;
    chosen.emplace(std::min(u, v), std::max(u, v));
  }
  std::vector<std::pair<NodeId, NodeId>> list(chosen.begin(), chosen.end());
  return from_edges(n, list);
}

Network generate_ba(int n, int attach, std::uint64_t seed) {
  if (attach < 1) throw std::invalid_argument("generate_ba: attach must be >= 1");
  if (n <= attach) throw std::invalid_argument("generate_ba: n must exceed attach");
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> chances;  // node id repeated once per unit of degree
  for (NodeId v = attach; v < n; ++v) {
    std::vector<NodeId> targets;
    if (v == attach) {
      for (NodeId u = 0; u < attach; ++u) targets.push_back(u);
    } else {
      std::set<NodeId> picked;
      while (static_cast<int>(picked.size()) < attach)
        picked.insert(chances[rng.next_below(chances.size())]);
      targets.assign(picked.begin(), picked.end());
    }
    for (NodeId u : targets) {
      edges.emplace_back(u, v);
      chances.push_back(u);
      chances.push_back(v);
    }
  }
  return from_edges(n, edges);
}

Network random_tree(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_tree: n must be >= 1");
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 1; v < n; ++v)
    edges.emplace_back(static_cast<NodeId>(rng.next_below(v)), v);
  return from_edges(n, edges);
}

Network network_from_spec(const std::string& spec) {
  if (spec.rfind("gen:", 0) != 0) return load_edge_list(spec).net;
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  auto want = [&](std::size_t k) {
    if (parts.size() != k)
      throw std::invalid_argument("network_from_spec: malformed spec " + spec);
  };
  if (parts.size() < 2) throw std::invalid_argument("network_from_spec: malformed spec " + spec);
  const std::string& kind = parts[1];
  if (kind == "line") {
    want(3);
    return generate_line(std::stoi(parts[2]));
  }
  if (kind == "rt") {
    want(4);
    return generate_regular_tree(std::stoi(parts[2]), std::stoi(parts[3]));
  }
  if (kind == "er") {
    want(5);
    return generate_er(std::stoi(parts[2]), std::stoll(parts[3]), std::stoull(parts[4]));
  }
  if (kind == "ba") {
    want(5);
    return generate_ba(std::stoi(parts[2]), std::stoi(parts[3]), std::stoull(parts[4]));
  }
  throw std::invalid_argument("network_from_spec: unknown generator " + spec);
}

// ------------------------------------------------------------------- helpers

namespace {

struct TrialDraw {
  Cascade cascade;
  Observation obs;
  std::uint64_t stream = 0;  // seed of the successful attempt
  int attempts = 1;
};

// One reproducible trial: simulate, then sample observers; an empty observer
// set redraws the whole trial with the next derived seed.
TrialDraw draw_trial(const Network& g, NodeId source, double p, double q,
                     std::uint64_t trial_seed) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::uint64_t s = derive_seed(trial_seed, attempt);
    Cascade c = simulate_si(g, DiffusionConfig{p, 0, source}, derive_seed(s, 0));
    Observation obs = sample_observers(c, q, derive_seed(s, 1));
    if (!obs.empty()) return {std::move(c), std::move(obs), s, attempt + 1};
  }
  throw std::runtime_error("draw_trial: observer sampling kept coming up empty");
}

std::vector<NodeId> largest_component(const Network& g) {
  std::vector<std::int32_t> comp(g.node_count, -1);
  std::int32_t n_comp = 0;
  std::vector<std::int64_t> sizes;
  for (NodeId u = 0; u < g.node_count; ++u) {
    if (comp[u] >= 0) continue;
    std::vector<NodeId> stack{u};
    comp[u] = n_comp;
    std::int64_t size = 0;
    while (!stack.empty()) {
      NodeId w = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId v : g.adjacency[w])
        if (comp[v] < 0) {
          comp[v] = n_comp;
          stack.push_back(v);
        }
    }
    sizes.push_back(size);
    ++n_comp;
  }
  std::int32_t best = 0;
  for (std::int32_t i = 1; i < n_comp; ++i)
    if (sizes[i] > sizes[best]) best = i;
  std::vector<NodeId> nodes;
  for (NodeId u = 0; u < g.node_count; ++u)
    if (comp[u] == best) nodes.push_back(u);
  return nodes;
}

double sample_stderr(double sum, double sum_sq, long n) {
  if (n < 2) return 0.0;
  double mean = sum / n;
  double var = (sum_sq - n * mean * mean) / (n - 1);
  if (var < 0) var = 0;
  return std::sqrt(var / n);
}

}  // namespace

// --------------------------------------------------------------------- sweep

SweepConfig sweep_config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sweep config: " + path);
  nlohmann::json j = nlohmann::json::parse(in);

  SweepConfig cfg;
  cfg.network = j.at("network").get<std::string>();
  auto read_list = [&](const char* key, std::vector<double>& out) {
    const auto& v = j.at(key);
    if (v.is_array())
      out = v.get<std::vector<double>>();
    else
      out = {v.get<double>()};
  };
  read_list("p", cfg.p_values);
  read_list("q", cfg.q_values);
  cfg.trials = j.value("trials", 500);
  cfg.master_seed = j.value("seed", static_cast<std::uint64_t>(1));
  if (j.contains("estimators"))
    cfg.estimators = j.at("estimators").get<std::vector<std::string>>();
  cfg.theta = j.value("theta", 0.95);
  cfg.full_sampled_set = j.value("full_sampled_set", false);
  cfg.out_csv = j.value("out", std::string{});
  cfg.records_path = j.value("records", std::string{});
  return cfg;
}

std::vector<SweepCell> run_sweep(const SweepConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
  if (cfg.p_values.empty() || cfg.q_values.empty())
    throw std::invalid_argument("run_sweep: empty parameter grid");
  for (double v : cfg.p_values)
    if (!(v > 0 && v <= 1)) throw std::invalid_argument("run_sweep: p outside (0, 1]");
  for (double v : cfg.q_values)
    if (!(v > 0 && v <= 1)) throw std::invalid_argument("run_sweep: q outside (0, 1]");
  for (const std::string& e : cfg.estimators)
    if (e != "inf" && e != "min")
      throw std::invalid_argument("run_sweep: unknown estimator " + e);

  Network g = network_from_spec(cfg.network);
  std::vector<NodeId> pool;
  if (cfg.network.rfind("gen:rt:", 0) == 0) {
    for (NodeId u = 0; u < g.node_count; ++u)
      if (g.degree(u) > 1) pool.push_back(u);  // trial sources: internal nodes
  } else {
    pool = largest_component(g);
  }
  if (pool.empty()) throw std::invalid_argument("run_sweep: no eligible source nodes");

  const std::size_t n_est = cfg.estimators.size();
  std::vector<SweepCell> cells;
  std::ofstream records;
  if (!cfg.records_path.empty()) {
    records.open(cfg.records_path);
    if (!records)
      throw std::runtime_error("run_sweep: cannot write records to " + cfg.records_path);
  }

  std::size_t cell_index = 0;
  for (double p : cfg.p_values) {
    for (double q : cfg.q_values) {
      std::uint64_t cell_seed = derive_seed(cfg.master_seed, cell_index++);
      std::vector<std::int32_t> dist(cfg.trials * n_est, 0);
      std::vector<std::int64_t> resampled(cfg.trials, 0);
      std::vector<std::string> record_lines(cfg.trials);

      parallel_for(static_cast<std::size_t>(cfg.trials), [&](std::size_t t) {
        auto started = std::chrono::steady_clock::now();
        std::uint64_t trial_seed = derive_seed(cell_seed, t);
        Rng pick(derive_seed(trial_seed, 7));
        NodeId source = pool[pick.next_below(pool.size())];
        TrialDraw draw = draw_trial(g, source, p, q, trial_seed);
        resampled[t] = draw.attempts - 1;
        std::vector<std::int32_t> d_from_source = bfs_distances(g, source);

        nlohmann::json rec;
        std::size_t feasible_count = 0;
        for (std::size_t e = 0; e < n_est; ++e) {
          NodeId guess;
          if (cfg.estimators[e] == "min") {
            guess = min_timestamp_estimator(draw.obs, derive_seed(draw.stream, 2));
          } else if (g.is_tree) {
            Estimate est = localize_tree(g, draw.obs, p, cfg.full_sampled_set);
            guess = est.source;
            feasible_count = est.feasible.size();
          } else {
            Estimate est = localize_graph(g, draw.obs, p, cfg.theta);
            guess = est.source;
            feasible_count = est.feasible.size();
          }
          dist[t * n_est + e] = d_from_source[guess];
          if (records.is_open())
            rec["estimates"][cfg.estimators[e]] = {{"node", guess},
                                                   {"distance", d_from_source[guess]}};
        }
        if (records.is_open()) {
          rec["trial"] = t;
          rec["p"] = p;
          rec["q"] = q;
          rec["true_source"] = source;
          rec["sampled"] = draw.obs.size();
          rec["feasible"] = feasible_count;
          rec["resampled"] = draw.attempts - 1;
          rec["wall_ms"] = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - started)
                               .count();
          record_lines[t] = rec.dump();
        }
      });

      std::int64_t total_resampled = 0;
      for (std::int64_t r : resampled) total_resampled += r;
      for (std::size_t e = 0; e < n_est; ++e) {
        SweepCell cell;
        cell.p = p;
        cell.q = q;
        cell.estimator = cfg.estimators[e];
        cell.trials = cfg.trials;
        double sum = 0, sum_sq = 0;
        long detects = 0;
        for (int t = 0; t < cfg.trials; ++t) {
          double d = dist[t * n_est + e];
          sum += d;
          sum_sq += d * d;
          if (d == 0) ++detects;
        }
        cell.mean_dist = sum / cfg.trials;
        cell.detect_rate = static_cast<double>(detects) / cfg.trials;
        cell.stderr_mean = sample_stderr(sum, sum_sq, cfg.trials);
        cell.resampled = total_resampled;
        cells.push_back(cell);
      }
      if (records.is_open())
        for (const std::string& line : record_lines) records << line << '\n';
    }
  }

  if (!cfg.out_csv.empty()) {
    std::ofstream out(cfg.out_csv);
    if (!out) throw std::runtime_error("run_sweep: cannot write CSV to " + cfg.out_csv);
    out << sweep_csv(cells);
  }
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::string text = "p,q,estimator,trials,mean_dist,detect_rate,stderr,resampled\n";
  char row[256];
  for (const SweepCell& c : cells) {
    std::snprintf(row, sizeof(row), "%.6g,%.6g,%s,%d,%.6f,%.6f,%.6f,%lld\n", c.p, c.q,
                  c.estimator.c_str(), c.trials, c.mean_dist, c.detect_rate,
                  c.stderr_mean, static_cast<long long>(c.resampled));
    text += row;
  }
  return text;
}

// ----------------------------------------------------------------- validates

LineTheorem2Report validate_line_theorem2(const ValidateParams& prm) {
  const int n = 2001;
  Network g = generate_line(n);
  const NodeId v_star = n / 2;  // centered source keeps boundary mass negligible

  std::vector<char> tie_hit(prm.trials, 0), point_hit(prm.trials, 0), viol(prm.trials, 0);
  std::vector<std::int32_t> dist(prm.trials, 0);
  std::vector<std::int32_t> redraws(prm.trials, 0);

  parallel_for(static_cast<std::size_t>(prm.trials), [&](std::size_t t) {
    TrialDraw draw = draw_trial(g, v_star, prm.p, prm.q, derive_seed(prm.seed, t));
    redraws[t] = draw.attempts - 1;
    Estimate est = localize_tree(g, draw.obs, prm.p, true);
    tie_hit[t] = std::binary_search(est.tied.begin(), est.tied.end(), v_star);
    point_hit[t] = est.source == v_star;
    dist[t] = std::abs(est.source - v_star);
    viol[t] = draw.obs.contains(v_star) && est.source != v_star;
  });

  LineTheorem2Report rep;
  rep.trials = prm.trials;
  double sum = 0, sum_sq = 0;
  for (long t = 0; t < prm.trials; ++t) {
    rep.detect_rate += tie_hit[t];
    rep.detect_rate_point += point_hit[t];
    sum += dist[t];
    sum_sq += static_cast<double>(dist[t]) * dist[t];
    rep.resampled += redraws[t];
    rep.source_observed_violations += viol[t];
  }
  rep.detect_rate /= prm.trials;
  rep.detect_rate_point /= prm.trials;
  rep.mean_distance = sum / prm.trials;
  rep.mean_stderr = sample_stderr(sum, sum_sq, prm.trials);
  rep.expected_rate = line_detection_probability(prm.p, prm.q);
  rep.distance_bound = line_expected_distance_bound(prm.p, prm.q);
  return rep;
}

TreeTheorem3Report validate_tree_theorem3(const ValidateParams& prm) {
  Network g = generate_regular_tree(prm.degree, prm.depth);
  const NodeId v_star = 0;  // root: the deepest boundary is depth `depth` everywhere
  std::vector<std::int32_t> depth_of = bfs_distances(g, v_star);

  std::vector<std::int32_t> dist(prm.trials, 0), redraws(prm.trials, 0);
  std::vector<char> flagged(prm.trials, 0), viol(prm.trials, 0);

  parallel_for(static_cast<std::size_t>(prm.trials), [&](std::size_t t) {
    TrialDraw draw = draw_trial(g, v_star, prm.p, prm.q, derive_seed(prm.seed, t));
    redraws[t] = draw.attempts - 1;
    Estimate est = localize_tree(g, draw.obs, prm.p, true);
    dist[t] = depth_of[est.source];
    if (draw.obs.contains(v_star)) {
      viol[t] = est.source != v_star;
    } else {
      CandidatePath cp = candidate_path(g, v_star, draw.obs);
      for (NodeId u : cp.path_nodes)
        if (depth_of[u] == prm.depth) flagged[t] = 1;
    }
  });

  TreeTheorem3Report rep;
  rep.trials = prm.trials;
  rep.within.assign(4, 0.0);
  rep.bounds.assign(4, 0.0);
  long flags = 0;
  for (long t = 0; t < prm.trials; ++t) {
    for (int d_cap = 0; d_cap <= 3; ++d_cap)
      if (dist[t] <= d_cap) rep.within[d_cap] += 1.0;
    flags += flagged[t];
    rep.resampled += redraws[t];
    rep.source_observed_violations += viol[t];
  }
  for (int d_cap = 0; d_cap <= 3; ++d_cap) rep.within[d_cap] /= prm.trials;
  for (int d_cap = 1; d_cap <= 3; ++d_cap)
    rep.bounds[d_cap] = regular_tree_bound(prm.degree, prm.p, prm.q, d_cap).bound;
  rep.flagged_fraction = static_cast<double>(flags) / prm.trials;
  return rep;
}

Prop6Report validate_prop6(const ValidateParams& prm) {
  const int n = 2001;
  Network g = generate_line(n);
  const NodeId v_star = n / 2;

  std::vector<std::int32_t> d_inf(prm.trials, 0), d_tie(prm.trials, 0),
      d_min(prm.trials, 0), redraws(prm.trials, 0);
  std::vector<char> min_hit(prm.trials, 0), viol(prm.trials, 0);

  parallel_for(static_cast<std::size_t>(prm.trials), [&](std::size_t t) {
    TrialDraw draw = draw_trial(g, v_star, prm.p, prm.q, derive_seed(prm.seed, t));
    redraws[t] = draw.attempts - 1;
    Estimate est = localize_tree(g, draw.obs, prm.p, true);
    NodeId naive = min_timestamp_estimator(draw.obs, derive_seed(draw.stream, 2));
    d_inf[t] = std::abs(est.source - v_star);
    d_tie[t] = d_inf[t];
    for (NodeId u : est.tied)
      d_tie[t] = std::min(d_tie[t], std::abs(u - v_star));
    d_min[t] = std::abs(naive - v_star);
    min_hit[t] = naive == v_star;
    viol[t] = draw.obs.contains(v_star) && est.source != v_star;
  });

  Prop6Report rep;
  rep.trials = prm.trials;
  double sum_min = 0, sum_inf = 0;
  for (long t = 0; t < prm.trials; ++t) {
    rep.min_rate += min_hit[t];
    sum_min += d_min[t];
    sum_inf += d_inf[t];
    if (d_inf[t] > d_min[t]) ++rep.dominance_violations;
    if (d_tie[t] > d_min[t]) ++rep.dominance_violations_tie;
    rep.resampled += redraws[t];
    rep.source_observed_violations += viol[t];
  }
  rep.min_rate /= prm.trials;
  rep.min_mean = sum_min / prm.trials;
  rep.inf_mean = sum_inf / prm.trials;
  return rep;
}

OracleLipReport validate_oracle_lip(const ValidateParams& prm) {
  auto started = std::chrono::steady_clock::now();
  OracleLipReport rep;
  rep.trials = prm.trials;

  for (long i = 0; i < prm.trials; ++i) {
    Rng rng(derive_seed(prm.seed, i));
    Network g;
    NodeId root = 0;
    std::vector<NodeId> sampled;
    CascadingTree ct;
    for (int attempt = 0; attempt < 500; ++attempt) {
      int n = 3 + static_cast<int>(rng.next_below(7));  // 3..9 nodes
      g = random_tree(n, rng.next_u64());
      root = static_cast<NodeId>(rng.next_below(n));
      sampled.clear();
      for (NodeId u = 0; u < n; ++u)
        if (rng.bernoulli(0.5)) sampled.push_back(u);
      if (sampled.empty()) continue;
      ct = build_cascading_tree(g, root, sampled);
      if (static_cast<std::int64_t>(ct.nodes.size()) -
              static_cast<std::int64_t>(ct.sampled_in_tree.size()) >=
          2)
        break;  // want at least two free nodes
    }
    std::vector<std::int32_t> depth = bfs_distances(g, root);
    Observation obs;
    for (NodeId s : sampled) {
      obs.sampled.push_back(s);
      obs.timestamps.push_back(depth[s] + static_cast<std::int64_t>(rng.next_below(7)) - 3);
    }
    auto mp = message_passing(ct, obs);
    auto oracle = brute_force_lip(ct, obs, 3);
    bool match = mp.has_value() == oracle.has_value() &&
                 (!mp || mp->aggregate_delay == *oracle);
    if (!match) ++rep.mismatches;
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

namespace {

// Redraw until the observer set is non-empty and excludes the source.
TrialDraw draw_trial_source_unobserved(const Network& g, NodeId source, double p,
                                       double q, std::uint64_t trial_seed) {
  for (int attempt = 0; attempt < 2000; ++attempt) {
    std::uint64_t s = derive_seed(trial_seed, attempt);
    Cascade c = simulate_si(g, DiffusionConfig{p, 0, source}, derive_seed(s, 0));
    Observation obs = sample_observers(c, q, derive_seed(s, 1));
    if (!obs.empty() && !obs.contains(source)) return {std::move(c), std::move(obs), s, attempt + 1};
  }
  throw std::runtime_error("draw_trial_source_unobserved: conditioning failed");
}

}  // namespace

CandidatePathReport validate_candidate_path(const ValidateParams& prm) {
  CandidatePathReport rep;
  rep.tree_trials = prm.trials;

  std::vector<char> hit(prm.trials, 0);
  parallel_for(static_cast<std::size_t>(prm.trials), [&](std::size_t t) {
    std::uint64_t seed = derive_seed(prm.seed, t);
    Rng rng(seed);
    int n = 5 + static_cast<int>(rng.next_below(196));  // 5..200 nodes
    Network g = random_tree(n, rng.next_u64());
    NodeId v_star = static_cast<NodeId>(rng.next_below(n));
    TrialDraw draw = draw_trial_source_unobserved(g, v_star, prm.p, prm.q, seed);
    Estimate est = localize_tree(g, draw.obs, prm.p, true);
    CandidatePath cp = candidate_path(g, v_star, draw.obs);
    hit[t] = cp.contains(est.source);
  });
  for (long t = 0; t < prm.trials; ++t) rep.on_path += hit[t];

  // Line half: the index formula must reproduce the realized error exactly.
  const int line_n = 501;
  Network line = generate_line(line_n);
  const NodeId center = line_n / 2;
  long line_trials = prm.trials;
  std::vector<char> match(line_trials, 0), skipped(line_trials, 0);
  parallel_for(static_cast<std::size_t>(line_trials), [&](std::size_t t) {
    std::uint64_t seed = derive_seed(derive_seed(prm.seed, 0x11E5ULL), t);
    TrialDraw draw = draw_trial_source_unobserved(line, center, prm.p, prm.q, seed);
    auto real = line_realization(line, center, draw.obs);
    if (!real) {
      skipped[t] = 1;
      return;
    }
    Estimate est = localize_tree(line, draw.obs, prm.p, true);
    std::int64_t nearest_tied = std::numeric_limits<std::int64_t>::max();
    for (NodeId u : est.tied)
      nearest_tied = std::min<std::int64_t>(nearest_tied, std::abs(u - center));
    match[t] = nearest_tied == line_error_from_sigmas(*real);
  });
  for (long t = 0; t < line_trials; ++t) {
    if (skipped[t])
      ++rep.line_skipped;
    else {
      ++rep.line_trials;
      rep.formula_matches += match[t];
    }
  }
  return rep;
}

ReducedSearchReport validate_reduced_search(const ValidateParams& prm) {
  ReducedSearchReport rep;
  rep.trials = prm.trials;
  std::vector<char> ok(prm.trials, 0);

  parallel_for(static_cast<std::size_t>(prm.trials), [&](std::size_t t) {
    std::uint64_t seed = derive_seed(prm.seed, t);
    Rng rng(seed);
    int n = 5 + static_cast<int>(rng.next_below(196));
    Network g = random_tree(n, rng.next_u64());
    NodeId v_star = static_cast<NodeId>(rng.next_below(n));
    TrialDraw draw = draw_trial(g, v_star, prm.p, prm.q, seed);

    Estimate est = localize_tree(g, draw.obs, prm.p, true);

    double best = -std::numeric_limits<double>::infinity();
    std::vector<NodeId> tied;
    std::vector<double> ll(n, -std::numeric_limits<double>::infinity());
    for (NodeId u = 0; u < n; ++u) {
      CascadingTree ct = build_cascading_tree(g, u, draw.obs.sampled);
      auto mp = message_passing(ct, draw.obs);
      if (!mp) continue;
      ll[u] = path_log_likelihood(*mp, ct.edge_count, prm.p);
      best = std::max(best, ll[u]);
    }
    for (NodeId u = 0; u < n; ++u)
      if (ll[u] == best) tied.push_back(u);

    ok[t] = !est.used_fallback && est.log_likelihood == best && est.tied == tied;
  });
  for (long t = 0; t < prm.trials; ++t) rep.agree += ok[t];
  return rep;
}

PgfReport validate_pgf_pmf(const ValidateParams& prm) {
  const int n = 2001;
  Network g = generate_line(n);
  const NodeId v_star = n / 2;
  const long target = prm.trials;

  std::vector<std::int64_t> diffs;
  diffs.reserve(target);
  long idx = 0;
  const std::size_t chunk = 8192;
  while (static_cast<long>(diffs.size()) < target) {
    std::vector<std::int64_t> slot(chunk, std::numeric_limits<std::int64_t>::max());
    long base = idx;
    parallel_for(chunk, [&](std::size_t k) {
      std::uint64_t seed = derive_seed(prm.seed, base + static_cast<long>(k));
      TrialDraw draw = draw_trial(g, v_star, prm.p, prm.q, seed);
      if (draw.obs.contains(v_star)) return;  // realization conditions on an unobserved source
      auto real = line_realization(g, v_star, draw.obs);
      if (!real) return;
      slot[k] = real->sigma1() - real->sigma2();
    });
    idx += chunk;
    for (std::size_t k = 0; k < chunk && static_cast<long>(diffs.size()) < target; ++k)
      if (slot[k] != std::numeric_limits<std::int64_t>::max()) diffs.push_back(slot[k]);
  }

  // Bins -8..8 plus one overflow bin.
  const int half = 8;
  const int bins = 2 * half + 2;
  std::vector<double> observed(bins, 0.0), expected(bins, 0.0);
  for (std::int64_t d : diffs) {
    if (std::llabs(d) <= half)
      observed[static_cast<int>(d) + half] += 1.0;
    else
      observed[bins - 1] += 1.0;
  }
  double mass = 0.0;
  for (int v = -half; v <= half; ++v) {
    double pm = sigma_diff_pmf(prm.p, prm.q, v);
    expected[v + half] = pm * target;
    mass += pm;
  }
  expected[bins - 1] = (1.0 - mass) * target;

  PgfReport rep;
  rep.realizations = target;
  rep.bins = bins;
  for (int b = 0; b < bins; ++b) {
    double diff = observed[b] - expected[b];
    rep.chi2 += diff * diff / expected[b];
  }
  rep.p_value = chi_square_pvalue(rep.chi2, bins - 1);
  return rep;
}

Prop5Report validate_prop5(const ValidateParams& prm) {
  // |S| < 1/(1-theta) keeps the screening exact: dropping any observer
  // already fails the threshold, so candidates must explain all of them.
  int cap = static_cast<int>(1.0 / (1.0 - prm.theta)) - 1;
  if (cap < 9)
    throw std::invalid_argument(
        "validate_prop5: theta below 0.9 leaves no tree size with exact screening");
  Prop5Report rep;
  long idx = 0;
  while (rep.applicable < prm.trials && idx < prm.trials * 80) {
    std::uint64_t seed = derive_seed(prm.seed, idx++);
    Rng rng(seed);
    int n = 8 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cap - 7)));
    Network g = random_tree(n, rng.next_u64());
    NodeId v_star = static_cast<NodeId>(rng.next_below(n));
    TrialDraw draw = draw_trial(g, v_star, prm.p, prm.q, seed);
    if (!draw.obs.contains(v_star)) continue;
    ++rep.applicable;
    Estimate full = localize_tree(g, draw.obs, prm.p, true);
    Estimate reduced = localize_tree(g, draw.obs, prm.p, false);
    if (full.source != v_star || reduced.source != v_star) ++rep.tree_violations;
    Estimate graph = localize_graph(g, draw.obs, prm.p, prm.theta);
    if (graph.source != v_star) ++rep.graph_violations;
  }
  return rep;
}

// ------------------------------------------------------------------ utilities

namespace {

double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum, ap = a;
  for (int i = 0; i < 2000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 2000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chi_square_pvalue(double chi2, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_pvalue: dof must be >= 1");
  if (chi2 <= 0.0) return 1.0;
  double a = dof / 2.0, x = chi2 / 2.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

ValidateOutcome validate(const std::string& kind, const ValidateParams& prm) {
  ValidateOutcome out;
  out.kind = kind;
  nlohmann::json j;
  j["kind"] = kind;

  if (kind == "line-theorem2") {
    LineTheorem2Report r = validate_line_theorem2(prm);
    out.pass = std::fabs(r.detect_rate - r.expected_rate) <= 0.02 &&
               r.mean_distance <= r.distance_bound + 0.05 &&
               r.source_observed_violations == 0;
    j["trials"] = r.trials;
    j["detect_rate"] = r.detect_rate;
    j["detect_rate_point"] = r.detect_rate_point;
    j["expected_rate"] = r.expected_rate;
    j["mean_distance"] = r.mean_distance;
    j["distance_bound"] = r.distance_bound;
    j["resampled"] = r.resampled;
    j["source_observed_violations"] = r.source_observed_violations;
  } else if (kind == "tree-theorem3") {
    TreeTheorem3Report r = validate_tree_theorem3(prm);
    out.pass = r.flagged_fraction < 0.01 && r.source_observed_violations == 0;
    for (int d_cap = 1; d_cap <= 3; ++d_cap)
      out.pass = out.pass && r.within[d_cap] >= r.bounds[d_cap] - 0.02;
    j["trials"] = r.trials;
    j["within"] = r.within;
    j["bounds"] = r.bounds;
    j["flagged_fraction"] = r.flagged_fraction;
    j["source_observed_violations"] = r.source_observed_violations;
  } else if (kind == "prop6") {
    Prop6Report r = validate_prop6(prm);
    double expect_mean = (1.0 - prm.q) / prm.q;
    out.pass = std::fabs(r.min_rate - prm.q) <= 0.02 &&
               std::fabs(r.min_mean - expect_mean) <= 0.05 * expect_mean &&
               r.dominance_violations == 0 && r.source_observed_violations == 0;
    j["trials"] = r.trials;
    j["min_rate"] = r.min_rate;
    j["min_mean"] = r.min_mean;
    j["expected_min_mean"] = expect_mean;
    j["inf_mean"] = r.inf_mean;
    j["dominance_violations"] = r.dominance_violations;
    j["dominance_violations_tie"] = r.dominance_violations_tie;
  } else if (kind == "oracle-lip") {
    OracleLipReport r = validate_oracle_lip(prm);
    out.pass = r.mismatches == 0;
    j["trials"] = r.trials;
    j["mismatches"] = r.mismatches;
    j["seconds"] = r.seconds;
  } else if (kind == "candidate-path") {
    CandidatePathReport r = validate_candidate_path(prm);
    out.pass = r.on_path == r.tree_trials && r.formula_matches == r.line_trials;
    j["tree_trials"] = r.tree_trials;
    j["on_path"] = r.on_path;
    j["line_trials"] = r.line_trials;
    j["formula_matches"] = r.formula_matches;
    j["line_skipped"] = r.line_skipped;
  } else if (kind == "reduced-search") {
    ReducedSearchReport r = validate_reduced_search(prm);
    out.pass = r.agree == r.trials;
    j["trials"] = r.trials;
    j["agree"] = r.agree;
  } else if (kind == "pgf-pmf") {
    PgfReport r = validate_pgf_pmf(prm);
    out.pass = r.p_value > 1e-3;
    j["realizations"] = r.realizations;
    j["chi2"] = r.chi2;
    j["p_value"] = r.p_value;
  } else if (kind == "prop5") {
    Prop5Report r = validate_prop5(prm);
    out.pass = r.applicable == prm.trials && r.tree_violations == 0 &&
               r.graph_violations == 0;
    j["applicable"] = r.applicable;
    j["tree_violations"] = r.tree_violations;
    j["graph_violations"] = r.graph_violations;
  } else {
    throw std::invalid_argument("validate: unknown kind " + kind);
  }
  j["pass"] = out.pass;
  out.details_json = j.dump();
  return out;
}

}  // namespace srcloc
