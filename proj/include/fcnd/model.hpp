#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fcnd/instance.hpp"
#include "fcnd/milp.hpp"
#include "fcnd/solution.hpp"

namespace fcnd {

enum class VarKind { kDesign, kFlow, kPotential };

struct VarInfo {
  VarKind kind = VarKind::kDesign;
  int edge = -1;       // y and x
  int arc = -1;        // x only
  int commodity = -1;  // x and pi
  int node = -1;       // pi only
};

/// One-level MIP of the bilevel problem. Variables are laid out as
///   y_e                      at y(e)
///   x^k_a                    at x(k, a)
///   pi^k_i (potential to d)  at pi(k, i)
/// and rows as per-commodity flow balance (|K||V|), edge linking
/// x_ij + x_ji <= y_e (|K||E|), the lifted Bellman inequality for each arc
/// (2|K||E|), then the optional local-branching cut.
struct MipModel {
  milp::LpProblem lp;
  std::vector<VarInfo> vars;
  int num_nodes = 0;
  int num_edges = 0;
  int num_commodities = 0;
  int lb_cut_row = -1;

  int y(int edge) const { return edge; }
  int x(int k, int arc) const { return num_edges + k * 2 * num_edges + arc; }
  int pi(int k, int node) const { return num_edges + 2 * num_edges * num_commodities + k * num_nodes + node; }
  int num_vars() const { return lp.num_vars(); }
  int num_rows() const { return lp.num_rows(); }
  /// Rows excluding the local-branching cut.
  int num_structural_rows() const { return num_commodities * (num_nodes + 3 * num_edges); }
};

MipModel build_model(const Instance& inst, std::span<const double> big_m);
MipModel build_model(const Instance& inst);

/// Adds (or replaces) the cut  sum_{ybar=0} y_e + sum_{ybar=1} (1 - y_e) <= delta.
void add_local_branching_cut(MipModel& model, std::span<const std::uint8_t> ybar, int delta);
void remove_local_branching_cut(MipModel& model);

/// Left side of the local-branching cut for a design y.
int local_branching_lhs(std::span<const std::uint8_t> ybar, std::span<const std::uint8_t> y);

/// Sets the upper bound of `var` to 0. Throws std::out_of_range for unknown ids.
void fix_variable_zero(MipModel& model, int var);

/// Which y and x variables must be integral (N2); everything else is relaxed (N1).
/// Potentials are never restricted.
class IntegralityPlan {
 public:
  explicit IntegralityPlan(const MipModel& model);

  /// Throws std::invalid_argument for potentials, std::out_of_range for bad ids.
  void mark_binary(int var);
  void mark_design(int edge);
  void mark_commodity(int k);
  void mark_all();

  bool is_binary(int var) const { return binary_[var] != 0; }
  int num_binary_design() const;
  std::vector<int> binary_vars() const;
  std::vector<int> relaxed_vars() const;

 private:
  const MipModel* model_;
  std::vector<std::uint8_t> binary_;
};

/// True when every y and x value is within `tol` of 0 or 1.
bool is_integral(const MipModel& model, std::span<const double> values, double tol = 1e-6);

/// Rounds y and x to a Solution. Status is kRelaxed when some value is
/// fractional, otherwise set by verify_bilevel. Cost is evaluated exactly.
Solution solution_from_values(const Instance& inst, const MipModel& model, std::span<const double> values);

/// Model point for a solution: y, x copied, pi^k_i set to the open-network
/// distance from i to d(k) (the total edge length where unreachable).
std::vector<double> solution_to_point(const Instance& inst, const MipModel& model, const Solution& sol);

/// Largest bound or row violation of `point`.
double max_violation(const MipModel& model, std::span<const double> point);

double model_objective(const MipModel& model, std::span<const double> point);

/// CPLEX LP text format. `plan`, when given, selects the Binaries section;
/// otherwise every y and x variable is listed.
void write_lp_format(const MipModel& model, std::ostream& out, const IntegralityPlan* plan = nullptr);

}  // namespace fcnd
