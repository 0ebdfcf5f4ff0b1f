#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fcnd/heuristics.hpp"
#include "fcnd/instance.hpp"
#include "fcnd/solution.hpp"
#include "json.hpp"

namespace fcnd {

struct SolverConfig {
  double gamma = kDefaultGamma;
  std::optional<int> delta;  // unset: ceil(|E| / 2)
  int iterations = 10;
  std::uint64_t seed = 0;
  double time_limit_s = 0.0;  // 0: unlimited
  long node_limit = 200000;

  int resolved_delta(const Instance& inst) const { return delta ? *delta : default_delta(inst); }
  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct TrajectoryPoint {
  std::string stage;
  double cost = 0.0;  // best so far
  double elapsed_s = 0.0;
};

struct RunRecord {
  std::string instance;
  std::uint64_t seed = 0;
  double cost = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  bool time_limit_hit = false;
  int iterations_run = 0;
  std::vector<TrajectoryPoint> trajectory;
  double wall_time_s = 0.0;

  /// First elapsed time at which the best cost reached `target`, if ever.
  std::optional<double> time_to_target(double target) const;
};

nlohmann::ordered_json to_json(const RunRecord& rec);

struct RunResult {
  Solution best;
  RunRecord record;
};

/// Strictly cheaper of the two; ties keep the incumbent.
const Solution& update_best(const Solution& best, const Solution& candidate);

/// Variable fixing, then local branching, then (unless the gap is already
/// below 1) `iterations` rounds of ejection cycle + local branching.
/// `observer` sees every solution produced along the way.
RunResult vfhlb(const Instance& inst, const SolverConfig& cfg, const SolutionObserver& observer = {});

}  // namespace fcnd
