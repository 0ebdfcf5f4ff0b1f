#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "fcnd/milp.hpp"

namespace fcnd::milp {

namespace {

constexpr double kPruneTol = 1e-6;
constexpr long kResortInterval = 100;

struct Node {
  std::shared_ptr<SimplexSolver> parent;  // solved parent state; null at the root
  int var = -1;
  double lo = 0.0;
  double hi = 0.0;
  double bound = -kInf;
  int depth = 0;
};

// Re-solve from scratch with the node's bounds; used when a warm start stalls.
std::shared_ptr<SimplexSolver> cold_start(const LpProblem& lp, const SimplexSolver& warm) {
  LpProblem copy = lp;
  for (int j = 0; j < lp.num_vars(); ++j) {
    copy.lower[j] = warm.lower(j);
    copy.upper[j] = warm.upper(j);
  }
  auto fresh = std::make_shared<SimplexSolver>(copy);
  fresh->solve();
  return fresh;
}

}  // namespace

LpResult solve_bnb(const LpProblem& lp, std::span<const int> binary_vars, const BnbConfig& config) {
  std::vector<int> bins(binary_vars.begin(), binary_vars.end());
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
  for (int j : bins) {
    if (j < 0 || j >= lp.num_vars()) throw std::out_of_range("binary variable id out of range");
  }

  if (bins.empty()) {
    LpResult res = solve_lp(lp);
    res.nodes = 1;
    if (res.status == SolveStatus::kOptimal) {
      res.best_bound = res.objective;
      if (res.objective >= config.cutoff - kPruneTol) {
        res.status = SolveStatus::kCutoff;
        res.has_solution = false;
        res.best_bound = config.cutoff;
      }
    }
    return res;
  }

  LpResult res;
  res.kind = ResultKind::kBranchAndBound;
  double incumbent = kInf;
  bool pruned_by_cutoff = false;
  bool incomplete = false;
  std::optional<SolveStatus> stopped;

  std::vector<Node> open;
  open.push_back(Node{});
  long nodes = 0;
  long iterations = 0;
  double stopped_bound = kInf;

  while (!open.empty()) {
    if (config.deadline && Clock::now() >= *config.deadline) {
      stopped = SolveStatus::kTimeLimit;
      break;
    }
    if (nodes >= config.node_limit) {
      stopped = SolveStatus::kNodeLimit;
      break;
    }
    if (nodes > 0 && nodes % kResortInterval == 0) {
      std::stable_sort(open.begin(), open.end(), [](const Node& a, const Node& b) { return a.bound > b.bound; });
    }
    Node node = std::move(open.back());
    open.pop_back();
    const double level = std::min(incumbent, config.cutoff);
    if (node.bound >= level - kPruneTol) {
      if (incumbent == kInf) pruned_by_cutoff = true;
      continue;
    }

    std::shared_ptr<SimplexSolver> solver;
    if (!node.parent) {
      solver = std::make_shared<SimplexSolver>(lp);
    } else if (node.parent.use_count() == 1) {
      solver = std::move(node.parent);
    } else {
      solver = std::make_shared<SimplexSolver>(*node.parent);
    }
    node.parent.reset();
    if (node.var >= 0) solver->set_bounds(node.var, node.lo, node.hi);
    const long before = solver->iterations();
    SolveStatus st = solver->solve();
    iterations += solver->iterations() - before;
    if (st == SolveStatus::kIterationLimit) {
      solver = cold_start(lp, *solver);
      st = solver->result().status;
      iterations += solver->iterations();
    }
    ++nodes;
    const double obj = st == SolveStatus::kOptimal ? solver->objective() : kInf;
    if (config.observer) config.observer(NodeEvent{nodes, node.depth, node.bound, obj, st});

    if (st == SolveStatus::kUnbounded) {
      res.status = SolveStatus::kUnbounded;
      res.nodes = nodes;
      res.iterations = iterations;
      return res;
    }
    if (st == SolveStatus::kIterationLimit) {
      incomplete = true;
      continue;
    }
    if (st != SolveStatus::kOptimal) continue;
    if (obj >= std::min(incumbent, config.cutoff) - kPruneTol) {
      if (incumbent == kInf) pruned_by_cutoff = true;
      continue;
    }

    int branch = -1;
    double best_score = config.integrality_tol;
    for (int j : bins) {
      const double v = solver->value(j);
      const double frac = v - std::floor(v);
      const double score = std::min(frac, 1.0 - frac);
      if (score > best_score) {
        best_score = score;
        branch = j;
      }
    }
    if (branch < 0) {
      // Evaluate the incumbent at the snapped point so integer data give integer objectives.
      res.values.resize(lp.num_vars());
      for (int j = 0; j < lp.num_vars(); ++j) res.values[j] = solver->value(j);
      for (int j : bins) res.values[j] = std::round(res.values[j]);
      incumbent = 0.0;
      for (int j = 0; j < lp.num_vars(); ++j) incumbent += lp.objective[j] * res.values[j];
      continue;
    }

    const double v = solver->value(branch);
    const double down = std::floor(v), up = std::ceil(v);
    Node down_child{solver, branch, solver->lower(branch), down, obj, node.depth + 1};
    Node up_child{solver, branch, up, solver->upper(branch), obj, node.depth + 1};
    if (v - down >= 0.5) {
      open.push_back(std::move(down_child));
      open.push_back(std::move(up_child));
    } else {
      open.push_back(std::move(up_child));
      open.push_back(std::move(down_child));
    }
  }

  res.nodes = nodes;
  res.iterations = iterations;
  res.has_solution = incumbent < kInf;
  res.objective = incumbent;
  if (stopped) {
    double bound = incumbent;
    for (const Node& n : open) bound = std::min(bound, n.bound);
    res.status = *stopped;
    res.best_bound = std::min(bound, stopped_bound);
    return res;
  }
  if (res.has_solution) {
    res.status = incomplete ? SolveStatus::kIterationLimit : SolveStatus::kOptimal;
    res.best_bound = incumbent;
  } else if (incomplete) {
    res.status = SolveStatus::kIterationLimit;
  } else if (pruned_by_cutoff) {
    res.status = SolveStatus::kCutoff;
    res.best_bound = config.cutoff;
  } else {
    res.status = SolveStatus::kInfeasible;
    res.best_bound = kInf;
  }
  return res;
}

}  // namespace fcnd::milp
