#include <cmath>
#include <set>

#include "doctest.h"
#include "fcnd/graph.hpp"
#include "fcnd/random.hpp"
#include "fixtures.hpp"
#include "reference.hpp"

using namespace fcnd;

namespace {

std::vector<double> lengths_of(const Instance& inst) {
  std::vector<double> w;
  for (const Edge& e : inst.edges) w.push_back(e.length);
  return w;
}

}  // namespace

TEST_CASE("path graph distances") {
  const Instance inst = fixtures::parse("nodes 4\nedges 2\ncommodities 0\ne 0 1 1 0 0\ne 1 2 1 0 0\n");
  const Adjacency adj(inst);
  const PathResult pr = dijkstra(adj, 0, lengths_of(inst));
  CHECK(pr.distance[2] == 2.0);
  CHECK_FALSE(pr.reached[3]);
  CHECK(pr.distance[3] == kUnreachable);
  const auto arcs = extract_path(pr, 2);
  REQUIRE(arcs.size() == 2);
  CHECK(arcs[0] == arc_of(0, false));
  CHECK(arcs[1] == arc_of(1, false));
  CHECK(extract_path(pr, 0).empty());
  CHECK_THROWS_AS(extract_path(pr, 3), UnreachableError);
}

TEST_CASE("adjacency is symmetric and honours the mask") {
  const Instance inst = generate_instance(8, 0.5, 0, 4);
  std::vector<std::uint8_t> open(inst.num_edges(), 0);
  for (int e = 0; e < inst.num_edges(); e += 2) open[e] = 1;
  const Adjacency adj(inst, open);
  for (int u = 0; u < inst.num_nodes; ++u) {
    for (const Neighbor& nb : adj.neighbors(u)) {
      CHECK(open[nb.edge]);
      CHECK(inst.arc_tail(nb.arc) == u);
      CHECK(inst.arc_head(nb.arc) == nb.node);
      bool back = false;
      for (const Neighbor& rev : adj.neighbors(nb.node)) back = back || (rev.node == u && rev.edge == nb.edge);
      CHECK(back);
    }
  }
}

TEST_CASE("dijkstra matches Bellman-Ford on random graphs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = generate_instance(8, 0.4, 0, seed);
    std::vector<std::uint8_t> open(inst.num_edges());
    Rng rng(seed);
    for (auto& o : open) o = uniform_index(rng, 4) != 0;
    const auto w = lengths_of(inst);
    const Adjacency adj(inst, open);
    for (int s = 0; s < inst.num_nodes; ++s) {
      const PathResult pr = dijkstra(adj, s, w);
      const auto bf = reference::bellman_ford(inst, open, s, w);
      for (int v = 0; v < inst.num_nodes; ++v) {
        CHECK(pr.distance[v] == bf[v]);
        if (!pr.reached[v]) continue;
        double total = 0.0;
        for (int a : extract_path(pr, v)) total += w[edge_of_arc(a)];
        CHECK(total == doctest::Approx(pr.distance[v]).epsilon(1e-9));
        // Bellman optimality over every open arc.
        for (const Neighbor& nb : adj.neighbors(v)) {
          if (pr.reached[nb.node]) CHECK(pr.distance[nb.node] <= pr.distance[v] + w[nb.edge]);
        }
      }
    }
  }
}

TEST_CASE("shortest-path DAG") {
  SUBCASE("unique path") {
    const Instance inst = fixtures::worked_instance();
    const Adjacency adj(inst);
    const auto dag = shortest_path_dag(adj, 0, 2, lengths_of(inst));
    CHECK(dag == std::vector<int>{arc_of(0, false), arc_of(1, false)});
  }
  SUBCASE("two equal routes") {
    const Instance inst = fixtures::parse(
        "nodes 4\nedges 4\ncommodities 0\ne 0 1 1 0 0\ne 1 3 1 0 0\ne 0 2 1 0 0\ne 2 3 1 0 0\n");
    const Adjacency adj(inst);
    const auto dag = shortest_path_dag(adj, 0, 3, lengths_of(inst));
    CHECK(dag.size() == 4);
  }
  SUBCASE("every DAG path is shortest") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Instance inst = generate_instance(7, 0.6, 0, seed);
      for (auto& e : inst.edges) e.length = 1 + static_cast<int>(e.length) % 3;  // many ties
      const auto w = lengths_of(inst);
      const Adjacency adj(inst);
      const auto dag = shortest_path_dag(adj, 0, 6, w);
      std::vector<std::uint8_t> in_dag(inst.num_edges(), 0);
      std::set<int> arcs(dag.begin(), dag.end());
      for (int a : dag) in_dag[edge_of_arc(a)] = 1;
      const double best = dijkstra(adj, 0, w).distance[6];
      for (const auto& p : reference::simple_paths(inst, in_dag, 0, 6)) {
        bool inside = true;
        double len = 0.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
          const int e = inst.find_edge(p[i], p[i + 1]);
          inside = inside && arcs.count(arc_of(e, inst.edges[e].u != p[i]));
          len += w[e];
        }
        if (inside) CHECK(len == best);
      }
      std::vector<std::uint8_t> all(inst.num_edges(), 1);
      for (const auto& p : reference::simple_paths(inst, all, 0, 6)) {
        double len = 0.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) len += w[inst.find_edge(p[i], p[i + 1])];
        if (len != best) continue;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
          const int e = inst.find_edge(p[i], p[i + 1]);
          CHECK(arcs.count(arc_of(e, inst.edges[e].u != p[i])) == 1);
        }
      }
    }
  }
}

TEST_CASE("optimistic path picks the cheapest tied route") {
  const Instance inst = fixtures::parse(
      "nodes 4\nedges 4\ncommodities 1\ne 0 1 1 0 5\ne 1 3 1 0 5\ne 0 2 1 0 1\ne 2 3 1 0 1\nk 0 3 1\n");
  const Adjacency adj(inst);
  std::vector<double> len{1, 1, 1, 1}, tie{5, 5, 1, 1};
  const auto path = optimistic_path(adj, 0, 3, len, tie);
  REQUIRE(path.has_value());
  CHECK(*path == std::vector<int>{arc_of(2, false), arc_of(3, false)});
  std::vector<std::uint8_t> open{1, 0, 0, 0};
  CHECK_FALSE(optimistic_path(Adjacency(inst, open), 0, 3, len, tie).has_value());
}
