#include "fcnd/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fcnd/graph.hpp"

namespace fcnd {

std::vector<int> candidate_list(const Instance& inst, std::span<const int> pending, double gamma) {
  if (pending.empty()) throw std::invalid_argument("candidate list requested for an empty commodity set");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  double largest = 0.0;
  for (int k : pending) largest = std::max(largest, inst.commodities[k].quantity);
  const double threshold = gamma * largest;
  std::vector<int> out;
  for (int k : pending) {
    if (inst.commodities[k].quantity >= threshold) out.push_back(k);
  }
  return out;
}

double infinity_sentinel(const Instance& inst) {
  return 1e6 * (inst.total_fixed_cost() + inst.total_length() * inst.total_quantity());
}

int default_delta(const Instance& inst) { return (inst.num_edges() + 1) / 2; }

namespace {

Solution decoupling_round(const Instance& inst, const DecouplingOptions& opt, double alpha, const Adjacency& full) {
  Rng rng(mix_seed(opt.seed, static_cast<std::uint64_t>(std::llround(alpha * 1e9))));
  std::vector<std::uint8_t> open(inst.num_edges(), 0);
  if (!opt.frozen_open.empty()) open = opt.frozen_open;
  std::vector<int> pending;
  if (opt.restricted) {
    pending = *opt.restricted;
  } else {
    for (int k = 0; k < inst.num_commodities(); ++k) pending.push_back(k);
  }
  const LeaderCostBlend blend{alpha};
  std::vector<double> weight(inst.num_edges());
  while (!pending.empty()) {
    const std::vector<int> cands = candidate_list(inst, pending, opt.gamma);
    const int k = cands[uniform_index(rng, cands.size())];
    pending.erase(std::find(pending.begin(), pending.end(), k));
    for (int e = 0; e < inst.num_edges(); ++e) {
      const double f = opt.cost_override.empty() ? inst.edges[e].fixed_cost : opt.cost_override[e];
      weight[e] = blend(inst, e, k, open[e] != 0, f);
    }
    const Commodity& com = inst.commodities[k];
    const PathResult pr = dijkstra(full, com.origin, weight);
    if (!pr.reached[com.destination]) return Solution::empty(inst);
    for (int a : extract_path(pr, com.destination)) open[edge_of_arc(a)] = 1;
  }
  auto flow = route_followers(inst, open);
  if (!flow) return Solution::empty(inst);
  Solution s;
  s.open = std::move(open);
  s.flow = std::move(*flow);
  s = close_unused_edges(inst, std::move(s));
  refresh(inst, s);
  return s;
}

}  // namespace

Solution partial_decoupling(const Instance& inst, const DecouplingOptions& opt) {
  if (opt.rounds < 1) throw std::invalid_argument("at least one decoupling round is required");
  if (!opt.cost_override.empty() && static_cast<int>(opt.cost_override.size()) != inst.num_edges()) {
    throw std::invalid_argument("cost override size does not match the edge count");
  }
  const Adjacency full(inst);
  Solution best = Solution::empty(inst);
  bool have = false;
  for (int r = 0; r < opt.rounds; ++r) {
    const double alpha = static_cast<double>(opt.rounds - r) / opt.rounds;
    Solution s = decoupling_round(inst, opt, alpha, full);
    if (s.status != Feasibility::kFeasible) continue;
    if (!have || s.cost < best.cost) {
      best = std::move(s);
      have = true;
    }
  }
  if (!have) best.cost = std::numeric_limits<double>::infinity();
  return best;
}

LBoundResult lbound(const Instance& inst, const KernelLimits& limits) {
  return lbound(inst, build_model(inst), limits);
}

LBoundResult lbound(const Instance& inst, const MipModel& model, const KernelLimits& limits) {
  LBoundResult out;
  IntegralityPlan plan(model);
  milp::BnbConfig cfg;
  cfg.deadline = limits.deadline;
  cfg.node_limit = limits.node_limit;

  milp::LpResult res = milp::solve_lp(model.lp);
  out.status = res.status;
  if (!res.has_solution) {
    out.bound = res.status == milp::SolveStatus::kInfeasible ? std::numeric_limits<double>::infinity() : -milp::kInf;
    return out;
  }
  out.bound = res.objective;
  auto settle = [&](const milp::LpResult& r) {
    if (!is_integral(model, r.values)) return false;
    out.solution = solution_from_values(inst, model, r.values);
    out.optimal = true;
    out.bound = out.solution.cost;
    return true;
  };
  if (settle(res)) return out;

  const int E = inst.num_edges();
  const int max_passes = static_cast<int>(std::ceil(0.2 * E - 1e-9));
  while (out.passes < max_passes && out.binary_design <= 0.9 * E && !limits.expired()) {
    int newly = 0;
    for (int e = 0; e < E; ++e) {
      if (!plan.is_binary(model.y(e)) && res.values[model.y(e)] >= 0.5) {
        plan.mark_design(e);
        ++newly;
      }
    }
    if (newly == 0) break;
    out.binary_design = plan.num_binary_design();
    res = milp::solve_bnb(model.lp, plan.binary_vars(), cfg);
    ++out.passes;
    out.status = res.status;
    if (res.status != milp::SolveStatus::kOptimal) {
      if (res.status == milp::SolveStatus::kInfeasible) out.bound = std::numeric_limits<double>::infinity();
      else out.bound = std::max(out.bound, res.best_bound);
      break;
    }
    out.bound = std::max(out.bound, res.objective);
    if (settle(res)) break;
  }
  return out;
}

std::vector<int> reduced_cost_fixings(const MipModel& model, const milp::LpResult& root,
                                      std::span<const double> relaxed, double min_cost) {
  std::vector<int> out;
  for (int e = 0; e < model.num_edges; ++e) {
    const int var = model.y(e);
    if (model.lp.upper[var] == 0.0 || relaxed[var] > 1e-6) continue;
    if (root.basis[var] != milp::BasisStatus::kAtLower) continue;
    if (root.objective + milp::reduced_cost(root, var) > min_cost + 1e-6) out.push_back(e);
  }
  return out;
}

VfhResult vfh(const Instance& inst, const VfhOptions& options) {
  VfhResult out;
  auto emit = [&](const char* stage, const Solution& s) {
    if (options.observer) options.observer(stage, s);
  };
  DecouplingOptions pd;
  pd.gamma = options.gamma;
  pd.seed = options.seed;
  out.constructed = partial_decoupling(inst, pd);
  out.incumbent = out.constructed;
  emit("partial-decoupling", out.constructed);

  MipModel model = build_model(inst);
  const LBoundResult lb = lbound(inst, model, options.limits);
  if (lb.optimal) {
    if (lb.solution.cost <= out.incumbent.cost) out.incumbent = lb.solution;
    out.lower_bound = std::min(lb.bound, out.incumbent.cost);
    out.proven = true;
    emit("lbound", out.incumbent);
    return out;
  }
  double min_cost = out.incumbent.cost;
  double bound = std::min(lb.bound, min_cost);

  IntegralityPlan plan(model);
  std::vector<int> pending;
  for (int k = 0; k < inst.num_commodities(); ++k) pending.push_back(k);
  Rng rng(mix_seed(options.seed, 0x76666eULL));
  milp::BnbConfig cfg;
  cfg.deadline = options.limits.deadline;
  cfg.node_limit = options.limits.node_limit;

  while (!pending.empty() && min_cost - bound >= 1.0 && !options.limits.expired()) {
    const std::vector<int> cands = candidate_list(inst, pending, options.gamma);
    const int k = cands[uniform_index(rng, cands.size())];
    pending.erase(std::find(pending.begin(), pending.end(), k));
    plan.mark_commodity(k);
    ++out.fixing_passes;

    cfg.cutoff = min_cost;
    const milp::LpResult res = milp::solve_bnb(model.lp, plan.binary_vars(), cfg);
    if (res.status == milp::SolveStatus::kCutoff) {
      // Nothing in this relaxation beats the incumbent.
      bound = min_cost;
      break;
    }
    if (!res.has_solution) break;

    const milp::LpResult root = milp::solve_lp(model.lp);
    if (root.status == milp::SolveStatus::kOptimal) {
      for (int e : reduced_cost_fixings(model, root, res.values, min_cost)) {
        fix_variable_zero(model, model.y(e));
        out.fixed_edges.push_back(e);
      }
    }

    if (is_integral(model, res.values)) {
      Solution cand = close_unused_edges(inst, solution_from_values(inst, model, res.values));
      refresh(inst, cand);
      if (cand.status == Feasibility::kFeasible && cand.cost < min_cost) {
        out.incumbent = std::move(cand);
        min_cost = out.incumbent.cost;
        emit("variable-fixing", out.incumbent);
      }
    }
    bound = std::max(bound, res.status == milp::SolveStatus::kOptimal ? res.objective : res.best_bound);
    bound = std::min(bound, min_cost);
    if (res.status != milp::SolveStatus::kOptimal) break;
  }
  out.lower_bound = bound;
  out.proven = min_cost - bound < 1.0;
  return out;
}

Solution local_branching(const Instance& inst, const Solution& s, int delta, const KernelLimits& limits) {
  if (delta < 0) throw std::invalid_argument("local-branching radius must be non-negative");
  MipModel model = build_model(inst);
  add_local_branching_cut(model, s.open, delta);
  IntegralityPlan plan(model);
  plan.mark_all();
  milp::BnbConfig cfg;
  cfg.cutoff = s.cost;
  cfg.deadline = limits.deadline;
  cfg.node_limit = limits.node_limit;
  const milp::LpResult res = milp::solve_bnb(model.lp, plan.binary_vars(), cfg);
  if (!res.has_solution) return s;
  Solution cand = solution_from_values(inst, model, res.values);
  if (cand.status != Feasibility::kFeasible || cand.cost >= s.cost) return s;
  if (hamming_distance(cand.open, s.open) > delta) return s;
  return cand;
}

}  // namespace fcnd
