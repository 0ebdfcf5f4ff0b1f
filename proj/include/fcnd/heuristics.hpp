#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fcnd/instance.hpp"
#include "fcnd/milp.hpp"
#include "fcnd/model.hpp"
#include "fcnd/random.hpp"
#include "fcnd/solution.hpp"

namespace fcnd {

inline constexpr double kDefaultGamma = 0.85;
inline constexpr int kMaxIterDp = 10;

/// Limits passed down to every branch-and-bound call.
struct KernelLimits {
  std::optional<milp::Clock::time_point> deadline;
  long node_limit = 200000;

  bool expired() const { return deadline && milp::Clock::now() >= *deadline; }
};

/// Commodities of `pending` whose quantity is at least gamma times the
/// largest pending quantity. Throws std::invalid_argument on an empty set.
std::vector<int> candidate_list(const Instance& inst, std::span<const int> pending, double gamma);

/// Leader routing weight f_e [y_e = 0] + alpha g_e^k + (1 - alpha) c_e.
struct LeaderCostBlend {
  double alpha = 1.0;

  double operator()(const Instance& inst, int edge, int k, bool open, double fixed_cost) const {
    return (open ? 0.0 : fixed_cost) + alpha * inst.variable_cost(edge, k) + (1.0 - alpha) * inst.edges[edge].length;
  }
};

struct DecouplingOptions {
  double gamma = kDefaultGamma;
  int rounds = kMaxIterDp;
  std::uint64_t seed = 0;
  /// Only these commodities are routed by the leader; the rest keep the
  /// edges in `frozen_open`. Every commodity is re-routed as a follower.
  std::optional<std::vector<int>> restricted;
  std::vector<std::uint8_t> frozen_open;
  /// Replaces f_e inside the leader weight when non-empty.
  std::vector<double> cost_override;
};

/// Fixed cost standing in for an ejected edge: 1e6 (sum f + sum c * sum q).
double infinity_sentinel(const Instance& inst);

/// Multi-round constructive heuristic. Round r uses alpha = (rounds - r) / rounds
/// and an RNG keyed by (seed, alpha); the cheapest round is returned.
Solution partial_decoupling(const Instance& inst, const DecouplingOptions& options = {});

struct LBoundResult {
  double bound = 0.0;
  bool optimal = false;  // the last relaxation was integral
  Solution solution;     // set when optimal
  int passes = 0;        // re-solves after the initial LP
  int binary_design = 0;
  milp::SolveStatus status = milp::SolveStatus::kOptimal;
};

/// Progressive integrality on y: solve, mark y_e >= 0.5 binary, re-solve.
/// At most ceil(0.2 |E|) passes; stops early on an integral solution or
/// once more than 0.9 |E| design variables are binary.
LBoundResult lbound(const Instance& inst, const MipModel& model, const KernelLimits& limits = {});
LBoundResult lbound(const Instance& inst, const KernelLimits& limits = {});

/// Called with every solution a heuristic stage produces.
using SolutionObserver = std::function<void(const std::string& stage, const Solution&)>;

/// Design edges that reduced-cost fixing closes: y_e still free, nonbasic at
/// 0 in the optimal root LP `root`, zero in `relaxed`, and root objective plus
/// its reduced cost above `min_cost`.
std::vector<int> reduced_cost_fixings(const MipModel& model, const milp::LpResult& root,
                                      std::span<const double> relaxed, double min_cost);

struct VfhOptions {
  double gamma = kDefaultGamma;
  std::uint64_t seed = 0;
  KernelLimits limits;
  SolutionObserver observer;
};

struct VfhResult {
  Solution incumbent;
  double lower_bound = 0.0;
  bool proven = false;            // incumbent - bound < 1
  Solution constructed;           // partial-decoupling start
  std::vector<int> fixed_edges;   // y variables fixed to 0 by reduced cost
  int fixing_passes = 0;
};

/// Relax-and-fix: moves one commodity's x block into the binary set per pass,
/// solving with cutoff at the incumbent cost and fixing y_e = 0 when its
/// root reduced cost proves it cannot appear in a cheaper solution.
VfhResult vfh(const Instance& inst, const VfhOptions& options = {});

/// ceil(|E| / 2).
int default_delta(const Instance& inst);

/// Best solution within Hamming distance `delta` of s.open that is strictly
/// cheaper than s; s itself when none exists or the kernel stops early.
Solution local_branching(const Instance& inst, const Solution& s, int delta, const KernelLimits& limits = {});

struct InefficiencyReport {
  /// Per edge; NaN where the edge is closed or carries no flow.
  std::vector<double> ratio;
  std::vector<int> used_edges;
  double average = 0.0;
  std::vector<int> inefficient;  // ratio > average, ascending ids
  std::vector<std::vector<int>> chains;
};

/// Cost per crossing commodity of each used edge, the inefficient set, and
/// random chains of 2 to 4 inefficient edges forming simple paths.
InefficiencyReport inefficiency_metrics(const Instance& inst, const Solution& s, Rng& rng);

/// Ejects one random inefficient chain at a time, rebuilding the commodities
/// that crossed it; returns the first feasible rebuild, or s when every
/// chain fails.
Solution ejection_cycle(const Instance& inst, const Solution& s, double gamma, std::uint64_t seed);

}  // namespace fcnd
