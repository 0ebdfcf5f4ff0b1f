#include "fcnd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <utility>

namespace fcnd {

Adjacency::Adjacency(const Instance& inst)
    : Adjacency(inst, std::vector<std::uint8_t>(inst.num_edges(), 1)) {}

Adjacency::Adjacency(const Instance& inst, std::span<const std::uint8_t> open)
    : lists_(inst.num_nodes), open_(open.begin(), open.end()) {
  if (static_cast<int>(open.size()) != inst.num_edges()) {
    throw std::invalid_argument("open-edge mask size does not match the edge count");
  }
  for (int e = 0; e < inst.num_edges(); ++e) {
    if (!open[e]) continue;
    const Edge& ed = inst.edges[e];
    lists_[ed.u].push_back({ed.v, e, arc_of(e, false)});
    lists_[ed.v].push_back({ed.u, e, arc_of(e, true)});
  }
}

bool same_length(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

PathResult dijkstra(const Adjacency& adj, int source, std::span<const double> edge_weights) {
  const int n = adj.num_nodes();
  PathResult pr;
  pr.source = source;
  pr.distance.assign(n, kUnreachable);
  pr.pred_arc.assign(n, -1);
  pr.pred_node.assign(n, -1);
  pr.reached.assign(n, false);

  using Key = std::pair<double, int>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  std::vector<bool> settled(n, false);
  pr.distance[source] = 0.0;
  pr.reached[source] = true;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = true;
    for (const Neighbor& nb : adj.neighbors(u)) {
      if (settled[nb.node]) continue;
      const double cand = d + edge_weights[nb.edge];
      if (!pr.reached[nb.node] || cand < pr.distance[nb.node]) {
        pr.reached[nb.node] = true;
        pr.distance[nb.node] = cand;
        pr.pred_arc[nb.node] = nb.arc;
        pr.pred_node[nb.node] = u;
        heap.emplace(cand, nb.node);
      }
    }
  }
  return pr;
}

std::vector<int> extract_path(const PathResult& pr, int target) {
  if (target < 0 || target >= static_cast<int>(pr.reached.size()) || !pr.reached[target]) {
    throw UnreachableError("target " + std::to_string(target) + " not reached from " +
                           std::to_string(pr.source));
  }
  std::vector<int> arcs;
  for (int v = target; v != pr.source; v = pr.pred_node[v]) arcs.push_back(pr.pred_arc[v]);
  std::reverse(arcs.begin(), arcs.end());
  return arcs;
}

namespace {

struct DagData {
  PathResult from_origin;
  PathResult to_destination;
  std::vector<int> arcs;
};

DagData build_dag(const Adjacency& adj, int origin, int destination, std::span<const double> w) {
  DagData dag{dijkstra(adj, origin, w), dijkstra(adj, destination, w), {}};
  if (!dag.from_origin.reached[destination]) {
    throw UnreachableError("destination " + std::to_string(destination) + " unreachable from " +
                           std::to_string(origin));
  }
  const double total = dag.from_origin.distance[destination];
  for (int i = 0; i < adj.num_nodes(); ++i) {
    if (!dag.from_origin.reached[i]) continue;
    for (const Neighbor& nb : adj.neighbors(i)) {
      if (!dag.to_destination.reached[nb.node]) continue;
      const double through = dag.from_origin.distance[i] + w[nb.edge] + dag.to_destination.distance[nb.node];
      if (same_length(through, total)) dag.arcs.push_back(nb.arc);
    }
  }
  std::sort(dag.arcs.begin(), dag.arcs.end());
  return dag;
}

}  // namespace

std::vector<int> shortest_path_dag(const Adjacency& adj, int origin, int destination,
                                   std::span<const double> edge_weights) {
  return build_dag(adj, origin, destination, edge_weights).arcs;
}

std::optional<std::vector<int>> optimistic_path(const Adjacency& adj, int origin, int destination,
                                                std::span<const double> length,
                                                std::span<const double> tie_cost) {
  if (origin == destination) return std::vector<int>{};
  DagData dag;
  try {
    dag = build_dag(adj, origin, destination, length);
  } catch (const UnreachableError&) {
    return std::nullopt;
  }
  const int n = adj.num_nodes();
  // DAG arcs strictly increase the origin distance, so that order is topological.
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (dag.from_origin.reached[i]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = dag.from_origin.distance[a], db = dag.from_origin.distance[b];
    return da != db ? da < db : a < b;
  });
  std::vector<std::vector<std::pair<int, int>>> out(n);  // (head, arc)
  std::vector<char> in_dag(2 * static_cast<std::size_t>(length.size()), 0);
  for (int a : dag.arcs) in_dag[a] = 1;
  for (int i = 0; i < n; ++i) {
    for (const Neighbor& nb : adj.neighbors(i)) {
      if (in_dag[nb.arc]) out[i].emplace_back(nb.node, nb.arc);
    }
  }
  std::vector<double> best(n, kUnreachable);
  std::vector<int> pred_arc(n, -1), pred_node(n, -1);
  best[origin] = 0.0;
  for (int u : order) {
    if (best[u] == kUnreachable) continue;
    for (const auto& [v, arc] : out[u]) {
      const double cand = best[u] + tie_cost[edge_of_arc(arc)];
      if (best[v] == kUnreachable || cand < best[v] - 1e-12 * (1.0 + std::fabs(best[v]))) {
        best[v] = cand;
        pred_arc[v] = arc;
        pred_node[v] = u;
      }
    }
  }
  std::vector<int> arcs;
  for (int v = destination; v != origin; v = pred_node[v]) arcs.push_back(pred_arc[v]);
  std::reverse(arcs.begin(), arcs.end());
  return arcs;
}

}  // namespace fcnd
