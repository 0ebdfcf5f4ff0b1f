#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace reference {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> bellman_ford(const fcnd::Instance& inst, std::span<const std::uint8_t> open, int source,
                                 std::span<const double> weights) {
  std::vector<double> dist(inst.num_nodes, kInf);
  dist[source] = 0.0;
  for (int round = 0; round < inst.num_nodes; ++round) {
    bool changed = false;
    for (int e = 0; e < inst.num_edges(); ++e) {
      if (!open[e]) continue;
      const auto& ed = inst.edges[e];
      if (dist[ed.u] + weights[e] < dist[ed.v]) {
        dist[ed.v] = dist[ed.u] + weights[e];
        changed = true;
      }
      if (dist[ed.v] + weights[e] < dist[ed.u]) {
        dist[ed.u] = dist[ed.v] + weights[e];
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

std::vector<std::vector<int>> simple_paths(const fcnd::Instance& inst, std::span<const std::uint8_t> open, int o,
                                           int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> path{o};
  std::vector<bool> used(inst.num_nodes, false);
  used[o] = true;
  std::function<void(int)> dfs = [&](int u) {
    if (u == d) {
      out.push_back(path);
      return;
    }
    for (int e = 0; e < inst.num_edges(); ++e) {
      if (!open[e]) continue;
      const auto& ed = inst.edges[e];
      int v = -1;
      if (ed.u == u) v = ed.v;
      else if (ed.v == u) v = ed.u;
      if (v < 0 || used[v]) continue;
      used[v] = true;
      path.push_back(v);
      dfs(v);
      path.pop_back();
      used[v] = false;
    }
  };
  dfs(o);
  return out;
}

double brute_force_optimum(const fcnd::Instance& inst) {
  const int E = inst.num_edges();
  double best = kInf;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << E); ++mask) {
    std::vector<std::uint8_t> open(E);
    double cost = 0.0;
    for (int e = 0; e < E; ++e) {
      open[e] = mask >> e & 1;
      if (open[e]) cost += inst.edges[e].fixed_cost;
    }
    bool feasible = true;
    for (const auto& com : inst.commodities) {
      double best_len = kInf, best_var = kInf;
      for (const auto& p : simple_paths(inst, open, com.origin, com.destination)) {
        double len = 0.0, var = 0.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
          const int e = inst.find_edge(p[i], p[i + 1]);
          len += inst.edges[e].length;
          var += com.quantity * inst.edges[e].unit_cost;
        }
        if (len < best_len || (len == best_len && var < best_var)) {
          best_len = len;
          best_var = var;
        }
      }
      if (best_len == kInf) {
        feasible = false;
        break;
      }
      cost += best_var;
    }
    if (feasible) best = std::min(best, cost);
  }
  return best;
}

double kkt_residual(const fcnd::milp::LpProblem& lp, const fcnd::milp::LpResult& res) {
  using fcnd::milp::RowSense;
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  const auto& x = res.values;
  const auto& y = res.row_duals;
  double worst = 0.0;
  auto note = [&](double v) { worst = std::max(worst, v); };

  std::vector<double> d(lp.objective);
  for (int i = 0; i < m; ++i) {
    const auto& r = lp.rows[i];
    double lhs = 0.0;
    for (std::size_t t = 0; t < r.index.size(); ++t) {
      lhs += r.value[t] * x[r.index[t]];
      d[r.index[t]] -= y[i] * r.value[t];
    }
    const double slack = r.rhs - lhs;
    switch (r.sense) {
      case RowSense::kLessEqual:
        note(-slack);
        note(y[i]);
        break;
      case RowSense::kGreaterEqual:
        note(slack);
        note(-y[i]);
        break;
      case RowSense::kEqual:
        note(std::fabs(slack));
        break;
    }
    note(std::fabs(y[i] * slack));
  }
  for (int j = 0; j < n; ++j) {
    note(lp.lower[j] - x[j]);
    note(x[j] - lp.upper[j]);
    note(std::fabs(d[j] - res.reduced_costs[j]));
    const bool above_lower = x[j] > lp.lower[j] + 1e-9;
    const bool below_upper = x[j] < lp.upper[j] - 1e-9;
    if (above_lower) note(d[j]);
    if (below_upper) note(-d[j]);
  }
  return worst;
}

}  // namespace reference
