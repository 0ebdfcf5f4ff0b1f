#include "fcnd/model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fcnd/graph.hpp"

namespace fcnd {

using milp::Row;
using milp::RowSense;

MipModel build_model(const Instance& inst) { return build_model(inst, compute_big_m(inst)); }

MipModel build_model(const Instance& inst, std::span<const double> big_m) {
  if (static_cast<int>(big_m.size()) != inst.num_edges()) {
    throw std::invalid_argument("big-M vector size does not match the edge count");
  }
  MipModel m;
  m.num_nodes = inst.num_nodes;
  m.num_edges = inst.num_edges();
  m.num_commodities = inst.num_commodities();
  const int E = m.num_edges, K = m.num_commodities, V = m.num_nodes;
  const double pi_max = inst.total_length();

  for (int e = 0; e < E; ++e) {
    m.lp.add_variable(0.0, 1.0, inst.edges[e].fixed_cost, "y" + std::to_string(e));
    m.vars.push_back({VarKind::kDesign, e, -1, -1, -1});
  }
  for (int k = 0; k < K; ++k) {
    for (int a = 0; a < 2 * E; ++a) {
      const int e = edge_of_arc(a);
      m.lp.add_variable(0.0, 1.0, inst.variable_cost(e, k),
                        "x" + std::to_string(k) + "_" + std::to_string(inst.arc_tail(a)) + "_" +
                            std::to_string(inst.arc_head(a)));
      m.vars.push_back({VarKind::kFlow, e, a, k, -1});
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < V; ++i) {
      const double hi = i == inst.commodities[k].destination ? 0.0 : pi_max;
      m.lp.add_variable(0.0, hi, 0.0, "pi" + std::to_string(k) + "_" + std::to_string(i));
      m.vars.push_back({VarKind::kPotential, -1, -1, k, i});
    }
  }

  for (int k = 0; k < K; ++k) {
    const Commodity& com = inst.commodities[k];
    std::vector<Row> balance(V);
    for (int i = 0; i < V; ++i) {
      balance[i].sense = RowSense::kEqual;
      balance[i].rhs = i == com.origin ? 1.0 : (i == com.destination ? -1.0 : 0.0);
      balance[i].name = "bal" + std::to_string(k) + "_" + std::to_string(i);
    }
    for (int a = 0; a < 2 * E; ++a) {
      balance[inst.arc_tail(a)].index.push_back(m.x(k, a));
      balance[inst.arc_tail(a)].value.push_back(1.0);
      balance[inst.arc_head(a)].index.push_back(m.x(k, a));
      balance[inst.arc_head(a)].value.push_back(-1.0);
    }
    for (Row& r : balance) m.lp.add_row(std::move(r));
  }
  for (int k = 0; k < K; ++k) {
    for (int e = 0; e < E; ++e) {
      m.lp.add_row(Row{{m.x(k, arc_of(e, false)), m.x(k, arc_of(e, true)), m.y(e)},
                       {1.0, 1.0, -1.0},
                       RowSense::kLessEqual,
                       0.0,
                       "link" + std::to_string(k) + "_" + std::to_string(e)});
    }
  }
  // pi_i - pi_j + (M_e - c_e) y_e + 2 c_e x_ji <= M_e for each arc (i, j).
  for (int k = 0; k < K; ++k) {
    for (int a = 0; a < 2 * E; ++a) {
      const int e = edge_of_arc(a);
      const double c = inst.edges[e].length;
      const double M = big_m[e];
      m.lp.add_row(Row{{m.pi(k, inst.arc_tail(a)), m.pi(k, inst.arc_head(a)), m.y(e), m.x(k, reverse_arc(a))},
                       {1.0, -1.0, M - c, 2.0 * c},
                       RowSense::kLessEqual,
                       M,
                       "bell" + std::to_string(k) + "_" + std::to_string(inst.arc_tail(a)) + "_" +
                           std::to_string(inst.arc_head(a))});
    }
  }
  return m;
}

int local_branching_lhs(std::span<const std::uint8_t> ybar, std::span<const std::uint8_t> y) {
  return hamming_distance(ybar, y);
}

void add_local_branching_cut(MipModel& model, std::span<const std::uint8_t> ybar, int delta) {
  if (static_cast<int>(ybar.size()) != model.num_edges) throw std::invalid_argument("design vector size mismatch");
  if (delta < 0) throw std::invalid_argument("local-branching radius must be non-negative");
  Row cut;
  cut.sense = RowSense::kLessEqual;
  cut.name = "local_branching";
  int ones = 0;
  for (int e = 0; e < model.num_edges; ++e) {
    cut.index.push_back(model.y(e));
    if (ybar[e]) {
      cut.value.push_back(-1.0);
      ++ones;
    } else {
      cut.value.push_back(1.0);
    }
  }
  cut.rhs = static_cast<double>(delta - ones);
  if (model.lb_cut_row >= 0) {
    model.lp.rows[model.lb_cut_row] = std::move(cut);
  } else {
    model.lb_cut_row = model.lp.add_row(std::move(cut));
  }
}

void remove_local_branching_cut(MipModel& model) {
  if (model.lb_cut_row < 0) return;
  model.lp.rows.erase(model.lp.rows.begin() + model.lb_cut_row);
  model.lb_cut_row = -1;
}

void fix_variable_zero(MipModel& model, int var) {
  if (var < 0 || var >= model.num_vars()) throw std::out_of_range("unknown variable id " + std::to_string(var));
  model.lp.upper[var] = 0.0;
  model.lp.lower[var] = std::min(model.lp.lower[var], 0.0);
}

IntegralityPlan::IntegralityPlan(const MipModel& model) : model_(&model), binary_(model.num_vars(), 0) {}

void IntegralityPlan::mark_binary(int var) {
  if (var < 0 || var >= static_cast<int>(binary_.size())) throw std::out_of_range("unknown variable id");
  if (model_->vars[var].kind == VarKind::kPotential) {
    throw std::invalid_argument("potential variables are never integral");
  }
  binary_[var] = 1;
}

void IntegralityPlan::mark_design(int edge) { mark_binary(model_->y(edge)); }

void IntegralityPlan::mark_commodity(int k) {
  for (int a = 0; a < 2 * model_->num_edges; ++a) mark_binary(model_->x(k, a));
}

void IntegralityPlan::mark_all() {
  for (int e = 0; e < model_->num_edges; ++e) mark_design(e);
  for (int k = 0; k < model_->num_commodities; ++k) mark_commodity(k);
}

int IntegralityPlan::num_binary_design() const {
  int n = 0;
  for (int e = 0; e < model_->num_edges; ++e) n += binary_[model_->y(e)];
  return n;
}

std::vector<int> IntegralityPlan::binary_vars() const {
  std::vector<int> out;
  for (int j = 0; j < static_cast<int>(binary_.size()); ++j) {
    if (binary_[j]) out.push_back(j);
  }
  return out;
}

std::vector<int> IntegralityPlan::relaxed_vars() const {
  std::vector<int> out;
  for (int j = 0; j < static_cast<int>(binary_.size()); ++j) {
    if (!binary_[j] && model_->vars[j].kind != VarKind::kPotential) out.push_back(j);
  }
  return out;
}

bool is_integral(const MipModel& model, std::span<const double> values, double tol) {
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.vars[j].kind == VarKind::kPotential) continue;
    if (std::fabs(values[j] - std::round(values[j])) > tol) return false;
  }
  return true;
}

Solution solution_from_values(const Instance& inst, const MipModel& model, std::span<const double> values) {
  Solution s = Solution::empty(inst);
  for (int e = 0; e < inst.num_edges(); ++e) s.open[e] = values[model.y(e)] > 0.5 ? 1 : 0;
  for (int k = 0; k < inst.num_commodities(); ++k) {
    for (int a = 0; a < inst.num_arcs(); ++a) s.flow[k][a] = values[model.x(k, a)] > 0.5 ? 1 : 0;
  }
  if (is_integral(model, values)) {
    refresh(inst, s);
  } else {
    s.cost = evaluate_cost(inst, s);
    s.status = Feasibility::kRelaxed;
  }
  return s;
}

std::vector<double> solution_to_point(const Instance& inst, const MipModel& model, const Solution& sol) {
  std::vector<double> p(model.num_vars(), 0.0);
  for (int e = 0; e < inst.num_edges(); ++e) p[model.y(e)] = sol.open[e];
  const Adjacency adj(inst, sol.open);
  std::vector<double> lengths(inst.num_edges());
  for (int e = 0; e < inst.num_edges(); ++e) lengths[e] = inst.edges[e].length;
  const double far = inst.total_length();
  for (int k = 0; k < inst.num_commodities(); ++k) {
    for (int a = 0; a < inst.num_arcs(); ++a) p[model.x(k, a)] = sol.flow[k][a];
    const PathResult pr = dijkstra(adj, inst.commodities[k].destination, lengths);
    for (int i = 0; i < inst.num_nodes; ++i) p[model.pi(k, i)] = pr.reached[i] ? pr.distance[i] : far;
  }
  return p;
}

double max_violation(const MipModel& model, std::span<const double> point) {
  double worst = 0.0;
  for (int j = 0; j < model.num_vars(); ++j) {
    worst = std::max(worst, model.lp.lower[j] - point[j]);
    worst = std::max(worst, point[j] - model.lp.upper[j]);
  }
  for (const Row& r : model.lp.rows) {
    double lhs = 0.0;
    for (std::size_t t = 0; t < r.index.size(); ++t) lhs += r.value[t] * point[r.index[t]];
    switch (r.sense) {
      case RowSense::kLessEqual: worst = std::max(worst, lhs - r.rhs); break;
      case RowSense::kGreaterEqual: worst = std::max(worst, r.rhs - lhs); break;
      case RowSense::kEqual: worst = std::max(worst, std::fabs(lhs - r.rhs)); break;
    }
  }
  return worst;
}

double model_objective(const MipModel& model, std::span<const double> point) {
  double z = 0.0;
  for (int j = 0; j < model.num_vars(); ++j) z += model.lp.objective[j] * point[j];
  return z;
}

namespace {

void write_term(std::ostream& out, double coef, const std::string& name, bool first) {
  if (coef < 0) {
    out << " - ";
    coef = -coef;
  } else if (!first) {
    out << " + ";
  } else {
    out << " ";
  }
  if (coef != 1.0) out << coef << " ";
  out << name;
}

}  // namespace

void write_lp_format(const MipModel& model, std::ostream& out, const IntegralityPlan* plan) {
  const auto& lp = model.lp;
  out << "\\ fcndp one-level model: " << model.num_nodes << " nodes, " << model.num_edges << " edges, "
      << model.num_commodities << " commodities\n";
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.objective[j] == 0.0) continue;
    write_term(out, lp.objective[j], lp.names[j], first);
    first = false;
  }
  if (first) out << " 0 " << lp.names.front();
  out << "\nSubject To\n";
  for (const Row& r : lp.rows) {
    out << " " << r.name << ":";
    for (std::size_t t = 0; t < r.index.size(); ++t) write_term(out, r.value[t], lp.names[r.index[t]], t == 0);
    const char* sense = r.sense == RowSense::kLessEqual ? "<=" : (r.sense == RowSense::kGreaterEqual ? ">=" : "=");
    out << " " << sense << " " << r.rhs << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.lower[j] == lp.upper[j]) {
      out << " " << lp.names[j] << " = " << lp.lower[j] << "\n";
    } else {
      out << " " << lp.lower[j] << " <= " << lp.names[j] << " <= " << lp.upper[j] << "\n";
    }
  }
  out << "Binaries\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const bool binary = plan ? plan->is_binary(j) : model.vars[j].kind != VarKind::kPotential;
    if (binary) out << " " << lp.names[j] << "\n";
  }
  out << "End\n";
}

}  // namespace fcnd
