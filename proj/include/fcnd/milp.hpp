#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fcnd::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct Row {
  std::vector<int> index;
  std::vector<double> value;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

/// min c'x  s.t.  rows,  lower <= x <= upper.
struct LpProblem {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> names;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  int add_variable(double lo, double hi, double cost, std::string name = {});
  int add_row(Row row);
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kCutoff, kIterationLimit, kNodeLimit, kTimeLimit };

const char* to_string(SolveStatus status);

enum class BasisStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

enum class ResultKind { kLp, kBranchAndBound };

struct LpResult {
  SolveStatus status = SolveStatus::kInfeasible;
  ResultKind kind = ResultKind::kLp;
  bool has_solution = false;
  double objective = kInf;
  std::vector<double> values;
  // LP solves only:
  std::vector<double> reduced_costs;
  std::vector<double> row_duals;
  std::vector<BasisStatus> basis;
  long iterations = 0;
  // Branch-and-bound only:
  long nodes = 0;
  double best_bound = -kInf;
};

/// Simplex reduced cost of `var` (0 for basic variables). Throws
/// std::logic_error unless `res` is an optimal LP result.
double reduced_cost(const LpResult& res, int var);

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  long max_iterations = 0;  // 0: derived from the problem size
};

/// Dense-tableau primal simplex with bounded variables. The tableau persists
/// between solves, so bound changes re-solve from the previous basis; a
/// composite phase 1 repairs any bound violations first.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LpProblem& lp, SimplexOptions options = {});

  void set_bounds(int var, double lo, double hi);
  double lower(int var) const { return lo_[var]; }
  double upper(int var) const { return up_[var]; }

  SolveStatus solve();

  int num_vars() const { return n_; }
  int num_rows() const { return m_; }
  double objective() const;
  /// Current value, clipped to the variable's bounds.
  double value(int var) const;
  LpResult result() const;
  long iterations() const { return iterations_; }

 private:
  enum class Phase { kOne, kTwo };

  void load_slack_basis();
  void refactor();
  void recompute_basic_values();
  void recompute_duals();
  bool basic_infeasible(int col) const;
  bool any_infeasible() const;
  void phase_one_costs(std::vector<double>& d1) const;
  int choose_entering(const std::vector<double>& d) const;
  void pivot(int row, int col);
  double primal_residual() const;
  double* row_ptr(int r) { return tableau_.data() + static_cast<std::size_t>(r) * ncol_; }
  const double* row_ptr(int r) const { return tableau_.data() + static_cast<std::size_t>(r) * ncol_; }

  SimplexOptions opt_;
  int n_ = 0;     // structural columns
  int m_ = 0;     // rows (one slack column each)
  int ncol_ = 0;  // n_ + m_
  std::vector<std::vector<std::pair<int, double>>> rows_;  // original sparse rows
  std::vector<double> rhs_;
  std::vector<double> cost_;
  std::vector<double> lo_, up_;
  std::vector<double> tableau_;  // B^-1 [A | I], row-major m_ x ncol_
  std::vector<double> x_;        // current value of every column
  std::vector<double> d_;        // reduced costs for the true objective
  std::vector<BasisStatus> status_;
  std::vector<int> basis_;       // row -> basic column
  bool bland_ = false;
  long iterations_ = 0;
  SolveStatus last_ = SolveStatus::kIterationLimit;
};

LpResult solve_lp(const LpProblem& lp, const SimplexOptions& options = {});

using Clock = std::chrono::steady_clock;

struct NodeEvent {
  long node = 0;
  int depth = 0;
  double parent_bound = -kInf;
  double objective = kInf;
  SolveStatus status = SolveStatus::kOptimal;
};

enum class BranchRule { kMostFractional };

struct BnbConfig {
  double integrality_tol = 1e-6;
  long node_limit = 200000;
  std::optional<Clock::time_point> deadline;
  /// Only solutions with objective < cutoff - 1e-6 are accepted.
  double cutoff = kInf;
  BranchRule rule = BranchRule::kMostFractional;
  std::function<void(const NodeEvent&)> observer;
};

/// Branch and bound in which only `binary_vars` must take integral values.
/// Depth-first, with the open list re-sorted by bound every 100 nodes.
LpResult solve_bnb(const LpProblem& lp, std::span<const int> binary_vars, const BnbConfig& config = {});

}  // namespace fcnd::milp
