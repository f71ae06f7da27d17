#include "srcloc/diffusion.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "srcloc/rng.hpp"

namespace srcloc {

bool Observation::contains(NodeId u) const {
  return std::binary_search(sampled.begin(), sampled.end(), u);
}

std::optional<std::int64_t> Observation::time_of(NodeId u) const {
  auto it = std::lower_bound(sampled.begin(), sampled.end(), u);
  if (it == sampled.end() || *it != u) return std::nullopt;
  return timestamps[static_cast<std::size_t>(it - sampled.begin())];
}

Cascade simulate_si(const Network& g, const DiffusionConfig& cfg, std::uint64_t seed) {
  if (!(cfg.p > 0.0 && cfg.p <= 1.0))
    throw std::invalid_argument("simulate_si: p must be in (0, 1]");
  if (!g.has_node(cfg.source))
    throw std::invalid_argument("simulate_si: source out of range");

  Cascade c;
  c.source = cfg.source;
  c.t0 = cfg.t0;
  c.first_infection.assign(g.node_count, Cascade::kNever);
  c.infection_parent.assign(g.node_count, -1);
  c.first_infection[cfg.source] = cfg.t0;

  std::int64_t component_size = 0;
  for (std::int32_t d : bfs_distances(g, cfg.source))
    if (d >= 0) ++component_size;

  Rng rng(seed);
  // Susceptible nodes adjacent to at least one infected node, kept sorted so
  // draw order is fixed.
  std::vector<NodeId> boundary;
  std::vector<char> in_boundary(g.node_count, 0);
  for (NodeId v : g.adjacency[cfg.source]) {
    boundary.push_back(v);
    in_boundary[v] = 1;
  }

  std::int64_t infected_count = 1;
  std::int64_t t = cfg.t0;
  std::vector<NodeId> newly;
  while (infected_count < component_size) {
    ++t;
    newly.clear();
    for (NodeId u : boundary) {
      NodeId parent = -1;
      for (NodeId v : g.adjacency[u]) {
        if (c.infected(v) && rng.bernoulli(cfg.p) && parent == -1) parent = v;
      }
      if (parent != -1) {
        newly.push_back(u);
        c.infection_parent[u] = parent;
      }
    }
    // Apply this slot's infections simultaneously, then grow the boundary.
    for (NodeId u : newly) {
      c.first_infection[u] = t;
      ++infected_count;
    }
    if (!newly.empty()) {
      boundary.erase(std::remove_if(boundary.begin(), boundary.end(),
                                    [&](NodeId u) { return c.infected(u); }),
                     boundary.end());
      std::size_t mid = boundary.size();
      for (NodeId u : newly)
        for (NodeId v : g.adjacency[u])
          if (!c.infected(v) && !in_boundary[v]) {
            in_boundary[v] = 1;
            boundary.push_back(v);
          }
      std::sort(boundary.begin() + mid, boundary.end());
      std::inplace_merge(boundary.begin(), boundary.begin() + mid, boundary.end());
    }
  }
  return c;
}

Observation sample_observers(const Cascade& c, double q, std::uint64_t seed) {
  if (!(q > 0.0 && q <= 1.0))
    throw std::invalid_argument("sample_observers: q must be in (0, 1]");
  Rng rng(seed);
  Observation obs;
  for (NodeId u = 0; u < static_cast<NodeId>(c.first_infection.size()); ++u) {
    if (!c.infected(u)) continue;
    if (rng.bernoulli(q)) {
      obs.sampled.push_back(u);
      obs.timestamps.push_back(c.first_infection[u]);
    }
  }
  return obs;
}

std::string observation_to_json(const Observation& obs) {
  nlohmann::json j;
  j["nodes"] = obs.sampled;
  nlohmann::json ts = nlohmann::json::object();
  for (std::size_t i = 0; i < obs.sampled.size(); ++i)
    ts[std::to_string(obs.sampled[i])] = obs.timestamps[i];
  j["timestamps"] = ts;
  return j.dump(2);
}

Observation observation_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Observation obs;
  std::vector<NodeId> nodes = j.at("nodes").get<std::vector<NodeId>>();
  std::sort(nodes.begin(), nodes.end());
  const auto& ts = j.at("timestamps");
  for (NodeId u : nodes) {
    obs.sampled.push_back(u);
    obs.timestamps.push_back(ts.at(std::to_string(u)).get<std::int64_t>());
  }
  return obs;
}

std::string cascade_to_json(const Cascade& c) {
  nlohmann::json j;
  j["source"] = c.source;
  j["t0"] = c.t0;
  nlohmann::json inf = nlohmann::json::array();
  nlohmann::json par = nlohmann::json::array();
  for (std::size_t u = 0; u < c.first_infection.size(); ++u) {
    if (c.first_infection[u] == Cascade::kNever)
      inf.push_back(nullptr);
    else
      inf.push_back(c.first_infection[u]);
    par.push_back(c.infection_parent[u]);
  }
  j["first_infection"] = inf;
  j["infection_parent"] = par;
  return j.dump(2);
}

Cascade cascade_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Cascade c;
  c.source = j.at("source").get<NodeId>();
  c.t0 = j.at("t0").get<std::int64_t>();
  for (const auto& v : j.at("first_infection"))
    c.first_infection.push_back(v.is_null() ? Cascade::kNever : v.get<std::int64_t>());
  c.infection_parent = j.at("infection_parent").get<std::vector<NodeId>>();
  return c;
}

}  // namespace srcloc
