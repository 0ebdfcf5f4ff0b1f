#include "fcnd/solution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fcnd/graph.hpp"

namespace fcnd {

Solution Solution::empty(const Instance& inst) {
  Solution s;
  s.open.assign(inst.num_edges(), 0);
  s.flow.assign(inst.num_commodities(), std::vector<std::uint8_t>(inst.num_arcs(), 0));
  s.cost = 0.0;
  s.status = Feasibility::kInfeasible;
  return s;
}

int Solution::num_open() const {
  return static_cast<int>(std::count_if(open.begin(), open.end(), [](std::uint8_t v) { return v != 0; }));
}

int Solution::edge_load(int edge) const {
  int load = 0;
  for (const auto& x : flow) load += x[arc_of(edge, false)] + x[arc_of(edge, true)];
  return load;
}

std::vector<int> Solution::path_arcs(const Instance& inst, int k) const {
  const auto& x = flow[k];
  const int origin = inst.commodities[k].origin;
  const int destination = inst.commodities[k].destination;
  std::vector<int> out_arc(inst.num_nodes, -1);
  int used = 0;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    if (!x[a]) continue;
    ++used;
    if (out_arc[inst.arc_tail(a)] != -1) return {};
    out_arc[inst.arc_tail(a)] = a;
  }
  std::vector<int> arcs;
  std::vector<bool> seen(inst.num_nodes, false);
  for (int v = origin; v != destination;) {
    if (seen[v] || out_arc[v] == -1) return {};
    seen[v] = true;
    arcs.push_back(out_arc[v]);
    v = inst.arc_head(out_arc[v]);
  }
  if (static_cast<int>(arcs.size()) != used) return {};
  return arcs;
}

std::vector<int> Solution::path_nodes(const Instance& inst, int k) const {
  const auto arcs = path_arcs(inst, k);
  if (arcs.empty()) return {};
  std::vector<int> nodes{inst.commodities[k].origin};
  for (int a : arcs) nodes.push_back(inst.arc_head(a));
  return nodes;
}

double evaluate_cost(const Instance& inst, std::span<const std::uint8_t> open,
                     const std::vector<std::vector<std::uint8_t>>& flow) {
  double cost = 0.0;
  for (int e = 0; e < inst.num_edges(); ++e) {
    if (open[e]) cost += inst.edges[e].fixed_cost;
  }
  for (int k = 0; k < static_cast<int>(flow.size()); ++k) {
    for (int a = 0; a < static_cast<int>(flow[k].size()); ++a) {
      if (flow[k][a]) cost += inst.variable_cost(edge_of_arc(a), k);
    }
  }
  return cost;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDimension: return "dimension";
    case ViolationKind::kFlowConservation: return "flow-conservation";
    case ViolationKind::kEdgeLinking: return "edge-linking";
    case ViolationKind::kDisconnected: return "disconnected";
    case ViolationKind::kNotShortest: return "not-shortest";
    case ViolationKind::kInvalidArc: return "invalid-arc";
  }
  return "unknown";
}

std::string FeasibilityReport::summary() const {
  if (pass()) return "PASS";
  std::ostringstream out;
  out << "FAIL (" << violations.size() << " violations)";
  for (const Violation& v : violations) out << "\n  [" << to_string(v.kind) << "] " << v.message;
  return out.str();
}

FeasibilityReport verify_bilevel(const Instance& inst, const Solution& sol) {
  FeasibilityReport report;
  auto add = [&](ViolationKind kind, int k, int node, int edge, std::string msg) {
    report.violations.push_back({kind, k, node, edge, std::move(msg)});
  };
  if (static_cast<int>(sol.open.size()) != inst.num_edges() ||
      static_cast<int>(sol.flow.size()) != inst.num_commodities()) {
    add(ViolationKind::kDimension, -1, -1, -1, "vector sizes do not match the instance");
    return report;
  }
  for (int k = 0; k < inst.num_commodities(); ++k) {
    if (static_cast<int>(sol.flow[k].size()) != inst.num_arcs()) {
      add(ViolationKind::kDimension, k, -1, -1, "commodity " + std::to_string(k) + ": arc vector size mismatch");
      return report;
    }
  }

  std::vector<double> lengths(inst.num_edges());
  for (int e = 0; e < inst.num_edges(); ++e) lengths[e] = inst.edges[e].length;
  const Adjacency adj(inst, sol.open);

  for (int k = 0; k < inst.num_commodities(); ++k) {
    const Commodity& com = inst.commodities[k];
    const auto& x = sol.flow[k];
    bool conserved = true;
    std::vector<int> balance(inst.num_nodes, 0);
    for (int a = 0; a < inst.num_arcs(); ++a) {
      if (!x[a]) continue;
      ++balance[inst.arc_tail(a)];
      --balance[inst.arc_head(a)];
    }
    for (int i = 0; i < inst.num_nodes; ++i) {
      const int b = i == com.origin ? 1 : (i == com.destination ? -1 : 0);
      if (balance[i] != b) {
        conserved = false;
        add(ViolationKind::kFlowConservation, k, i, -1,
            "commodity " + std::to_string(k) + ": flow balance " + std::to_string(balance[i]) + " at node " +
                std::to_string(i) + ", expected " + std::to_string(b));
      }
    }
    bool linked = true;
    for (int e = 0; e < inst.num_edges(); ++e) {
      const int through = x[arc_of(e, false)] + x[arc_of(e, true)];
      if (through > (sol.open[e] ? 1 : 0)) {
        linked = false;
        add(ViolationKind::kEdgeLinking, k, -1, e,
            "commodity " + std::to_string(k) + ": edge " + std::to_string(e) +
                (sol.open[e] ? " crossed in both directions" : " is closed but carries flow") +
                " (x_ij + x_ji <= y_e)");
      }
    }
    const PathResult pr = dijkstra(adj, com.origin, lengths);
    if (!pr.reached[com.destination]) {
      add(ViolationKind::kDisconnected, k, com.destination, -1,
          "commodity " + std::to_string(k) + ": destination unreachable in the open network");
      continue;
    }
    if (!conserved || !linked) continue;
    double routed = 0.0;
    for (int a = 0; a < inst.num_arcs(); ++a) {
      if (x[a]) routed += lengths[edge_of_arc(a)];
    }
    if (!same_length(routed, pr.distance[com.destination])) {
      std::ostringstream msg;
      msg << "commodity " << k << ": routed length " << routed << " exceeds shortest distance "
          << pr.distance[com.destination];
      add(ViolationKind::kNotShortest, k, -1, -1, msg.str());
    }
  }
  return report;
}

Solution close_unused_edges(const Instance& inst, Solution sol) {
  for (int e = 0; e < inst.num_edges(); ++e) {
    if (sol.open[e] && sol.edge_load(e) == 0) sol.open[e] = 0;
  }
  sol.cost = evaluate_cost(inst, sol);
  return sol;
}

std::optional<std::vector<std::vector<std::uint8_t>>> route_followers(const Instance& inst,
                                                                      std::span<const std::uint8_t> open) {
  const Adjacency adj(inst, open);
  std::vector<double> lengths(inst.num_edges()), tie(inst.num_edges());
  for (int e = 0; e < inst.num_edges(); ++e) lengths[e] = inst.edges[e].length;
  std::vector<std::vector<std::uint8_t>> flow(inst.num_commodities(),
                                              std::vector<std::uint8_t>(inst.num_arcs(), 0));
  for (int k = 0; k < inst.num_commodities(); ++k) {
    for (int e = 0; e < inst.num_edges(); ++e) tie[e] = inst.variable_cost(e, k);
    const auto path = optimistic_path(adj, inst.commodities[k].origin, inst.commodities[k].destination, lengths, tie);
    if (!path) return std::nullopt;
    for (int a : *path) flow[k][a] = 1;
  }
  return flow;
}

void refresh(const Instance& inst, Solution& sol) {
  sol.cost = evaluate_cost(inst, sol);
  sol.status = verify_bilevel(inst, sol).pass() ? Feasibility::kFeasible : Feasibility::kInfeasible;
}

int hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != 0) != (b[i] != 0);
  return d;
}

nlohmann::ordered_json to_json(const Instance& inst, const SolutionReport& report) {
  const Solution& s = report.solution;
  nlohmann::ordered_json j;
  j["cost"] = s.cost;
  j["lower_bound"] = report.lower_bound;
  std::vector<int> open;
  for (int e = 0; e < inst.num_edges(); ++e) {
    if (s.open[e]) open.push_back(e);
  }
  j["open_edges"] = open;
  nlohmann::ordered_json paths = nlohmann::ordered_json::object();
  for (int k = 0; k < inst.num_commodities(); ++k) paths[std::to_string(k)] = s.path_nodes(inst, k);
  j["paths"] = paths;
  j["gap"] = std::max(0.0, s.cost - report.lower_bound);
  j["wall_time_s"] = report.wall_time_s;
  j["seed"] = report.seed;
  return j;
}

ParsedSolution parse_solution_json(const Instance& inst, const nlohmann::json& doc) {
  ParsedSolution parsed;
  parsed.solution = Solution::empty(inst);
  try {
    parsed.declared_cost = doc.at("cost").get<double>();
    if (doc.contains("lower_bound")) parsed.lower_bound = doc.at("lower_bound").get<double>();
    if (doc.contains("seed")) parsed.seed = doc.at("seed").get<std::uint64_t>();
    for (int e : doc.at("open_edges").get<std::vector<int>>()) {
      if (e < 0 || e >= inst.num_edges()) throw std::runtime_error("open edge id " + std::to_string(e) + " out of range");
      parsed.solution.open[e] = 1;
    }
    const auto& paths = doc.at("paths");
    for (auto it = paths.begin(); it != paths.end(); ++it) {
      const int k = std::stoi(it.key());
      if (k < 0 || k >= inst.num_commodities()) throw std::runtime_error("commodity key " + it.key() + " out of range");
      const auto nodes = it.value().get<std::vector<int>>();
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const int a = nodes[i], b = nodes[i + 1];
        const int e = inst.find_edge(a, b);
        if (e < 0) {
          parsed.structural.push_back({ViolationKind::kInvalidArc, k, a, -1,
                                       "commodity " + std::to_string(k) + ": no edge between " + std::to_string(a) +
                                           " and " + std::to_string(b)});
          continue;
        }
        parsed.solution.flow[k][arc_of(e, inst.edges[e].u != a)] = 1;
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("malformed solution JSON: ") + ex.what());
  }
  parsed.solution.cost = parsed.declared_cost;
  return parsed;
}

}  // namespace fcnd
