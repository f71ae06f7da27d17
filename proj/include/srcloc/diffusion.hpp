#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "srcloc/graph.hpp"

namespace srcloc {

struct DiffusionConfig {
  double p = 0.5;          // per-slot per-edge infection probability, (0, 1]
  std::int64_t t0 = 0;     // slot in which the source turns infected
  NodeId source = 0;
};

/// One realized SI run: first-infection slot and infecting neighbor per node.
/// Nodes outside the source's component keep the `kNever` sentinel.
struct Cascade {
  static constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::min();

  NodeId source = -1;
  std::int64_t t0 = 0;
  std::vector<std::int64_t> first_infection;
  std::vector<NodeId> infection_parent;  // -1 for the source and for never-infected

  bool infected(NodeId u) const { return first_infection[u] != kNever; }
};

/// Observer set with timestamps; `sampled` is sorted ascending and
/// `timestamps[i]` belongs to `sampled[i]`.
struct Observation {
  std::vector<NodeId> sampled;
  std::vector<std::int64_t> timestamps;

  bool empty() const { return sampled.empty(); }
  std::size_t size() const { return sampled.size(); }
  bool contains(NodeId u) const;
  std::optional<std::int64_t> time_of(NodeId u) const;
};

/// Slot-by-slot SI simulation. Each slot, every susceptible node draws one
/// Bernoulli(p) per currently-infected neighbor, neighbors in ascending id
/// order; the infection parent is the lowest-id success of the first
/// successful slot. Runs until the source's component is fully infected.
/// Deterministic given (g, cfg, seed).
Cascade simulate_si(const Network& g, const DiffusionConfig& cfg, std::uint64_t seed);

/// Include each infected node independently with probability q. The result
/// may be empty; callers that need observers must handle that.
Observation sample_observers(const Cascade& c, double q, std::uint64_t seed);

std::string observation_to_json(const Observation& obs);
Observation observation_from_json(const std::string& text);
std::string cascade_to_json(const Cascade& c);
Cascade cascade_from_json(const std::string& text);

}  // namespace srcloc
