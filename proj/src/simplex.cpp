#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fcnd/milp.hpp"

namespace fcnd::milp {

int LpProblem::add_variable(double lo, double hi, double cost, std::string name) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  names.push_back(std::move(name));
  return num_vars() - 1;
}

int LpProblem::add_row(Row row) {
  rows.push_back(std::move(row));
  return num_rows() - 1;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kCutoff: return "cutoff";
    case SolveStatus::kIterationLimit: return "iteration-limit";
    case SolveStatus::kNodeLimit: return "node-limit";
    case SolveStatus::kTimeLimit: return "time-limit";
  }
  return "unknown";
}

double reduced_cost(const LpResult& res, int var) {
  if (res.kind != ResultKind::kLp || res.status != SolveStatus::kOptimal) {
    throw std::logic_error("reduced costs are only defined for optimal LP results");
  }
  if (var < 0 || var >= static_cast<int>(res.reduced_costs.size())) {
    throw std::out_of_range("variable id out of range");
  }
  return res.reduced_costs[var];
}

SimplexSolver::SimplexSolver(const LpProblem& lp, SimplexOptions options)
    : opt_(options), n_(lp.num_vars()), m_(lp.num_rows()), ncol_(n_ + m_) {
  rows_.resize(m_);
  rhs_.resize(m_);
  cost_.assign(ncol_, 0.0);
  lo_.resize(ncol_);
  up_.resize(ncol_);
  for (int j = 0; j < n_; ++j) {
    cost_[j] = lp.objective[j];
    lo_[j] = lp.lower[j];
    up_[j] = lp.upper[j];
  }
  for (int i = 0; i < m_; ++i) {
    const Row& row = lp.rows[i];
    if (row.index.size() != row.value.size()) throw std::invalid_argument("row index/value size mismatch");
    std::map<int, double> merged;
    for (std::size_t t = 0; t < row.index.size(); ++t) {
      if (row.index[t] < 0 || row.index[t] >= n_) throw std::out_of_range("row references unknown variable");
      merged[row.index[t]] += row.value[t];
    }
    for (const auto& [j, a] : merged) {
      if (a != 0.0) rows_[i].emplace_back(j, a);
    }
    rhs_[i] = row.rhs;
    // a.x + s = rhs
    switch (row.sense) {
      case RowSense::kLessEqual: lo_[n_ + i] = 0.0; up_[n_ + i] = kInf; break;
      case RowSense::kGreaterEqual: lo_[n_ + i] = -kInf; up_[n_ + i] = 0.0; break;
      case RowSense::kEqual: lo_[n_ + i] = 0.0; up_[n_ + i] = 0.0; break;
    }
  }
  load_slack_basis();
}

void SimplexSolver::load_slack_basis() {
  tableau_.assign(static_cast<std::size_t>(m_) * ncol_, 0.0);
  for (int i = 0; i < m_; ++i) {
    double* r = row_ptr(i);
    for (const auto& [j, a] : rows_[i]) r[j] = a;
    r[n_ + i] = 1.0;
  }
  x_.assign(ncol_, 0.0);
  status_.assign(ncol_, BasisStatus::kAtLower);
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lo_[j])) {
      status_[j] = BasisStatus::kAtLower;
      x_[j] = lo_[j];
    } else if (std::isfinite(up_[j])) {
      status_[j] = BasisStatus::kAtUpper;
      x_[j] = up_[j];
    } else {
      status_[j] = BasisStatus::kFree;
      x_[j] = 0.0;
    }
  }
  basis_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    status_[n_ + i] = BasisStatus::kBasic;
  }
  d_.assign(ncol_, 0.0);
  recompute_basic_values();
  recompute_duals();
}

void SimplexSolver::recompute_basic_values() {
  std::vector<double> r(rhs_);
  for (int i = 0; i < m_; ++i) {
    for (const auto& [j, a] : rows_[i]) {
      if (status_[j] != BasisStatus::kBasic) r[i] -= a * x_[j];
    }
    if (status_[n_ + i] != BasisStatus::kBasic) r[i] -= x_[n_ + i];
  }
  // The slack block of the tableau is B^-1.
  for (int row = 0; row < m_; ++row) {
    const double* t = row_ptr(row) + n_;
    double v = 0.0;
    for (int i = 0; i < m_; ++i) v += t[i] * r[i];
    x_[basis_[row]] = v;
  }
}

void SimplexSolver::recompute_duals() {
  d_ = cost_;
  for (int r = 0; r < m_; ++r) {
    const double cb = cost_[basis_[r]];
    if (cb == 0.0) continue;
    const double* t = row_ptr(r);
    for (int j = 0; j < ncol_; ++j) d_[j] -= cb * t[j];
  }
  for (int r = 0; r < m_; ++r) d_[basis_[r]] = 0.0;
}

void SimplexSolver::set_bounds(int var, double lo, double hi) {
  if (var < 0 || var >= n_) throw std::out_of_range("variable id out of range");
  lo_[var] = lo;
  up_[var] = hi;
  if (status_[var] == BasisStatus::kBasic) return;
  BasisStatus st = status_[var];
  double target;
  if (st == BasisStatus::kAtLower && std::isfinite(lo)) {
    target = lo;
  } else if (st == BasisStatus::kAtUpper && std::isfinite(hi)) {
    target = hi;
  } else if (std::isfinite(lo)) {
    st = BasisStatus::kAtLower;
    target = lo;
  } else if (std::isfinite(hi)) {
    st = BasisStatus::kAtUpper;
    target = hi;
  } else {
    st = BasisStatus::kFree;
    target = 0.0;
  }
  if (lo == hi) st = BasisStatus::kAtLower;
  status_[var] = st;
  const double delta = target - x_[var];
  if (delta != 0.0) {
    for (int r = 0; r < m_; ++r) {
      const double a = row_ptr(r)[var];
      if (a != 0.0) x_[basis_[r]] -= a * delta;
    }
    x_[var] = target;
  }
}

bool SimplexSolver::basic_infeasible(int col) const {
  const double v = x_[col];
  return v < lo_[col] - opt_.feasibility_tol * (1.0 + std::fabs(lo_[col])) ||
         v > up_[col] + opt_.feasibility_tol * (1.0 + std::fabs(up_[col]));
}

bool SimplexSolver::any_infeasible() const {
  for (int r = 0; r < m_; ++r) {
    if (basic_infeasible(basis_[r])) return true;
  }
  return false;
}

void SimplexSolver::phase_one_costs(std::vector<double>& d1) const {
  std::fill(d1.begin(), d1.end(), 0.0);
  for (int r = 0; r < m_; ++r) {
    const int b = basis_[r];
    if (!basic_infeasible(b)) continue;
    const double w = x_[b] > up_[b] ? 1.0 : -1.0;
    const double* t = row_ptr(r);
    for (int j = 0; j < ncol_; ++j) d1[j] -= w * t[j];
  }
  for (int r = 0; r < m_; ++r) d1[basis_[r]] = 0.0;
}

int SimplexSolver::choose_entering(const std::vector<double>& d) const {
  // Steepest edge with exact weights 1 + ||B^-1 a_j||^2, read off the tableau.
  const double tol = opt_.optimality_tol;
  std::vector<int> cand;
  std::vector<double> score;
  for (int j = 0; j < ncol_; ++j) {
    const BasisStatus st = status_[j];
    if (st == BasisStatus::kBasic || lo_[j] == up_[j]) continue;
    double sc = 0.0;
    if (st == BasisStatus::kAtLower && d[j] < -tol) sc = -d[j];
    else if (st == BasisStatus::kAtUpper && d[j] > tol) sc = d[j];
    else if (st == BasisStatus::kFree && std::fabs(d[j]) > tol) sc = std::fabs(d[j]);
    if (sc == 0.0) continue;
    if (bland_) return j;
    cand.push_back(j);
    score.push_back(sc);
  }
  if (cand.empty()) return -1;
  std::vector<double> norm(cand.size(), 1.0);
  for (int r = 0; r < m_; ++r) {
    const double* t = row_ptr(r);
    for (std::size_t c = 0; c < cand.size(); ++c) norm[c] += t[cand[c]] * t[cand[c]];
  }
  int best = -1;
  double best_score = 0.0;
  for (std::size_t c = 0; c < cand.size(); ++c) {
    const double sc = score[c] * score[c] / norm[c];
    if (sc > best_score) {
      best_score = sc;
      best = cand[c];
    }
  }
  return best;
}

void SimplexSolver::pivot(int row, int col) {
  double* pr = row_ptr(row);
  const double piv = pr[col];
  std::vector<int> nz;
  nz.reserve(ncol_);
  for (int j = 0; j < ncol_; ++j) {
    if (pr[j] == 0.0) continue;
    pr[j] /= piv;
    if (std::fabs(pr[j]) < 1e-14) {
      pr[j] = 0.0;
    } else {
      nz.push_back(j);
    }
  }
  pr[col] = 1.0;
  for (int i = 0; i < m_; ++i) {
    if (i == row) continue;
    double* ti = row_ptr(i);
    const double f = ti[col];
    if (f == 0.0) continue;
    for (int j : nz) ti[j] -= f * pr[j];
    ti[col] = 0.0;
  }
  const double fd = d_[col];
  if (fd != 0.0) {
    for (int j : nz) d_[j] -= fd * pr[j];
  }
  d_[col] = 0.0;
}

double SimplexSolver::primal_residual() const {
  double worst = 0.0;
  for (int i = 0; i < m_; ++i) {
    double s = x_[n_ + i];
    for (const auto& [j, a] : rows_[i]) s += a * x_[j];
    worst = std::max(worst, std::fabs(s - rhs_[i]) / (1.0 + std::fabs(rhs_[i])));
  }
  return worst;
}

void SimplexSolver::refactor() {
  const std::vector<int> cols = basis_;
  tableau_.assign(static_cast<std::size_t>(m_) * ncol_, 0.0);
  for (int i = 0; i < m_; ++i) {
    double* r = row_ptr(i);
    for (const auto& [j, a] : rows_[i]) r[j] = a;
    r[n_ + i] = 1.0;
  }
  std::vector<bool> done(m_, false);
  std::vector<int> fresh(m_, -1);
  for (int col : cols) {
    int best = -1;
    double best_abs = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (done[i]) continue;
      const double a = std::fabs(row_ptr(i)[col]);
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (best < 0 || best_abs < 1e-9) {
      // Singular basis: restart from the slack basis.
      for (int j = 0; j < n_; ++j) {
        if (status_[j] == BasisStatus::kBasic) status_[j] = BasisStatus::kAtLower;
      }
      load_slack_basis();
      return;
    }
    pivot(best, col);
    done[best] = true;
    fresh[best] = col;
  }
  basis_ = fresh;
  recompute_basic_values();
  recompute_duals();
}

SolveStatus SimplexSolver::solve() {
  for (int j = 0; j < ncol_; ++j) {
    if (lo_[j] > up_[j] + opt_.feasibility_tol) return last_ = SolveStatus::kInfeasible;
  }
  const long limit = opt_.max_iterations > 0 ? opt_.max_iterations : 20L * (m_ + ncol_) + 1000;
  const long degenerate_limit = 2L * (m_ + ncol_);
  long degenerate = 0;
  long done = 0;
  bool refreshed = false;
  bland_ = false;
  std::vector<double> d1(ncol_);
  // Phase 1 minimizes infeasibility plus a small multiple of the true cost,
  // so a warm start stays close to optimal while it regains feasibility.
  double cmax = 0.0;
  for (int j = 0; j < n_; ++j) cmax = std::max(cmax, std::fabs(cost_[j]));
  double weight = 1.0 / (1.0 + cmax);

  while (true) {
    if (done >= limit) return last_ = SolveStatus::kIterationLimit;
    const bool phase_one = any_infeasible();
    if (phase_one) {
      phase_one_costs(d1);
      if (weight > 0.0) {
        for (int j = 0; j < ncol_; ++j) d1[j] += weight * d_[j];
      }
    }
    const std::vector<double>& price = phase_one ? d1 : d_;
    const int q = choose_entering(price);
    if (q < 0 && phase_one && weight > 0.0) {
      weight = 0.0;
      continue;
    }
    if (q < 0) {
      if (!refreshed) {
        if (primal_residual() > 1e-9) refactor();
        recompute_basic_values();
        recompute_duals();
        refreshed = true;
        continue;
      }
      return last_ = phase_one ? SolveStatus::kInfeasible : SolveStatus::kOptimal;
    }

    const double dir = price[q] < 0.0 ? 1.0 : -1.0;
    // Ratio test, Harris two-pass. In phase 1 an infeasible basic variable
    // blocks where it regains feasibility.
    struct Candidate {
      int row;
      double ratio;
      double target;
    };
    std::vector<Candidate> cands;
    double relaxed_min = kInf;
    for (int r = 0; r < m_; ++r) {
      const double a = row_ptr(r)[q];
      if (std::fabs(a) <= opt_.pivot_tol) continue;
      const int b = basis_[r];
      const double v = x_[b];
      const double rate = -dir * a;
      const double tol_lo = opt_.feasibility_tol * (1.0 + std::fabs(lo_[b]));
      const double tol_up = opt_.feasibility_tol * (1.0 + std::fabs(up_[b]));
      double ratio, relaxed, target;
      if (rate < 0.0) {
        if (v > up_[b] + tol_up) {
          target = up_[b];
          ratio = relaxed = (v - up_[b]) / -rate;
        } else if (v >= lo_[b] - tol_lo && std::isfinite(lo_[b])) {
          target = lo_[b];
          ratio = (v - lo_[b]) / -rate;
          relaxed = (v - lo_[b] + tol_lo) / -rate;
        } else {
          continue;
        }
      } else {
        if (v < lo_[b] - tol_lo) {
          target = lo_[b];
          ratio = relaxed = (lo_[b] - v) / rate;
        } else if (v <= up_[b] + tol_up && std::isfinite(up_[b])) {
          target = up_[b];
          ratio = (up_[b] - v) / rate;
          relaxed = (up_[b] - v + tol_up) / rate;
        } else {
          continue;
        }
      }
      cands.push_back({r, ratio, target});
      relaxed_min = std::min(relaxed_min, relaxed);
    }
    const double flip =
        (std::isfinite(lo_[q]) && std::isfinite(up_[q])) ? up_[q] - lo_[q] : kInf;

    int leave = -1;
    double step = kInf, leave_target = 0.0;
    if (!cands.empty()) {
      if (bland_) {
        double exact_min = kInf;
        for (const auto& c : cands) exact_min = std::min(exact_min, c.ratio);
        for (const auto& c : cands) {
          if (c.ratio <= exact_min + 1e-12 && (leave < 0 || basis_[c.row] < basis_[leave])) {
            leave = c.row;
            step = c.ratio;
            leave_target = c.target;
          }
        }
      } else {
        double best_abs = -1.0;
        for (const auto& c : cands) {
          if (c.ratio > relaxed_min) continue;
          const double a = std::fabs(row_ptr(c.row)[q]);
          if (a > best_abs) {
            best_abs = a;
            leave = c.row;
            step = c.ratio;
            leave_target = c.target;
          }
        }
      }
    }
    const bool bound_flip = flip <= step;
    if (bound_flip) step = flip;
    if (!std::isfinite(step)) {
      if (phase_one && weight > 0.0) {
        weight = 0.0;
        continue;
      }
      return last_ = SolveStatus::kUnbounded;
    }
    step = std::max(step, 0.0);

    if (step <= 1e-12) {
      if (++degenerate > degenerate_limit) bland_ = true;
    } else {
      degenerate = 0;
    }

    if (step > 0.0) {
      for (int r = 0; r < m_; ++r) {
        const double a = row_ptr(r)[q];
        if (a != 0.0) x_[basis_[r]] -= dir * a * step;
      }
      x_[q] += dir * step;
    }
    if (bound_flip) {
      if (dir > 0.0) {
        status_[q] = BasisStatus::kAtUpper;
        x_[q] = up_[q];
      } else {
        status_[q] = BasisStatus::kAtLower;
        x_[q] = lo_[q];
      }
    } else {
      const int b = basis_[leave];
      x_[b] = leave_target;
      status_[b] = (leave_target == lo_[b]) ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
      pivot(leave, q);
      basis_[leave] = q;
      status_[q] = BasisStatus::kBasic;
    }
    ++done;
    ++iterations_;
    refreshed = false;
  }
}

double SimplexSolver::value(int var) const {
  // Report values within the feasibility tolerance of a bound as that bound.
  const double v = x_[var];
  if (v <= lo_[var] + opt_.feasibility_tol * (1.0 + std::fabs(lo_[var]))) return lo_[var];
  if (v >= up_[var] - opt_.feasibility_tol * (1.0 + std::fabs(up_[var]))) return up_[var];
  return v;
}

double SimplexSolver::objective() const {
  double z = 0.0;
  for (int j = 0; j < n_; ++j) z += cost_[j] * value(j);
  return z;
}

LpResult SimplexSolver::result() const {
  LpResult res;
  res.kind = ResultKind::kLp;
  res.status = last_;
  res.iterations = iterations_;
  res.has_solution = last_ == SolveStatus::kOptimal;
  res.values.resize(n_);
  for (int j = 0; j < n_; ++j) res.values[j] = value(j);
  res.objective = res.has_solution ? objective() : kInf;
  if (res.has_solution) {
    res.reduced_costs.assign(d_.begin(), d_.begin() + n_);
    res.basis.assign(status_.begin(), status_.begin() + n_);
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == BasisStatus::kBasic) res.reduced_costs[j] = 0.0;
    }
    res.row_duals.resize(m_);
    for (int i = 0; i < m_; ++i) res.row_duals[i] = status_[n_ + i] == BasisStatus::kBasic ? 0.0 : -d_[n_ + i];
  }
  return res;
}

LpResult solve_lp(const LpProblem& lp, const SimplexOptions& options) {
  SimplexSolver solver(lp, options);
  solver.solve();
  return solver.result();
}

}  // namespace fcnd::milp
