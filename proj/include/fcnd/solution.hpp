#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fcnd/instance.hpp"
#include "json.hpp"

namespace fcnd {

enum class Feasibility { kFeasible, kInfeasible, kRelaxed };

/// Open-edge design plus one directed 0/1 arc vector per commodity.
struct Solution {
  std::vector<std::uint8_t> open;               // y_e
  std::vector<std::vector<std::uint8_t>> flow;  // x[k][arc]
  double cost = 0.0;
  Feasibility status = Feasibility::kInfeasible;

  static Solution empty(const Instance& inst);

  int num_open() const;
  /// Arcs used by commodity k, ordered from its origin. Empty when the flow
  /// does not form a single origin -> destination walk.
  std::vector<int> path_arcs(const Instance& inst, int k) const;
  std::vector<int> path_nodes(const Instance& inst, int k) const;
  /// Total number of commodities crossing edge e in either direction.
  int edge_load(int edge) const;
};

double evaluate_cost(const Instance& inst, std::span<const std::uint8_t> open,
                     const std::vector<std::vector<std::uint8_t>>& flow);
inline double evaluate_cost(const Instance& inst, const Solution& s) { return evaluate_cost(inst, s.open, s.flow); }

enum class ViolationKind {
  kDimension,
  kFlowConservation,
  kEdgeLinking,   // x_ij^k + x_ji^k <= y_e
  kDisconnected,  // commodity endpoints not joined by open edges
  kNotShortest,   // routed path longer than the open-network distance
  kInvalidArc,    // consecutive path nodes share no edge
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int commodity = -1;
  int node = -1;
  int edge = -1;
  std::string message;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
  std::string summary() const;
};

/// Flow conservation, x only on open edges, and every commodity on a
/// length-shortest path of the open network.
FeasibilityReport verify_bilevel(const Instance& inst, const Solution& sol);

/// Closes every edge with no flow; cost re-evaluated.
Solution close_unused_edges(const Instance& inst, Solution sol);

/// Routes every commodity on its length-shortest path in the open network,
/// breaking ties by least variable cost. std::nullopt if some commodity is cut off.
std::optional<std::vector<std::vector<std::uint8_t>>> route_followers(const Instance& inst,
                                                                      std::span<const std::uint8_t> open);

/// Sets cost and status (kFeasible iff verify_bilevel passes).
void refresh(const Instance& inst, Solution& sol);

int hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Solution file contents. `gap` is derived as cost - lower_bound.
struct SolutionReport {
  Solution solution;
  double lower_bound = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
};

nlohmann::ordered_json to_json(const Instance& inst, const SolutionReport& report);

struct ParsedSolution {
  Solution solution;             // cost field holds the declared value
  double declared_cost = 0.0;
  double lower_bound = 0.0;
  std::uint64_t seed = 0;
  std::vector<Violation> structural;  // hops along non-edges
};

/// Throws std::runtime_error on schema errors.
ParsedSolution parse_solution_json(const Instance& inst, const nlohmann::json& doc);

}  // namespace fcnd
