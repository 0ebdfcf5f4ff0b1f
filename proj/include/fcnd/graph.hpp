#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fcnd/instance.hpp"

namespace fcnd {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct Neighbor {
  int node;  // other endpoint
  int edge;
  int arc;   // arc leaving the owning node toward `node`
};

/// Symmetric adjacency lists of an instance restricted to an open-edge mask.
class Adjacency {
 public:
  /// All edges open.
  explicit Adjacency(const Instance& inst);
  /// `open[e] != 0` keeps edge e. Size must equal the edge count.
  Adjacency(const Instance& inst, std::span<const std::uint8_t> open);

  int num_nodes() const { return static_cast<int>(lists_.size()); }
  std::span<const Neighbor> neighbors(int node) const { return lists_[node]; }
  bool is_open(int edge) const { return open_[edge] != 0; }

 private:
  std::vector<std::vector<Neighbor>> lists_;
  std::vector<std::uint8_t> open_;
};

struct PathResult {
  int source = -1;
  std::vector<double> distance;  // kUnreachable where !reached
  std::vector<int> pred_arc;     // -1 at the source and unreached nodes
  std::vector<int> pred_node;
  std::vector<bool> reached;
};

class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary-heap Dijkstra over per-edge weights (>= 0). Equal keys pop by node id.
PathResult dijkstra(const Adjacency& adj, int source, std::span<const double> edge_weights);

/// Arcs of the source -> target path in travel order. Throws UnreachableError.
std::vector<int> extract_path(const PathResult& pr, int target);

/// Union of all weight-shortest origin -> destination paths, as a sorted arc list.
std::vector<int> shortest_path_dag(const Adjacency& adj, int origin, int destination,
                                   std::span<const double> edge_weights);

/// Among the `length`-shortest paths, the one of least `tie_cost` (optimistic
/// follower). Returns std::nullopt when the destination is unreachable.
std::optional<std::vector<int>> optimistic_path(const Adjacency& adj, int origin, int destination,
                                                std::span<const double> length,
                                                std::span<const double> tie_cost);

/// Equality test for path lengths: exact on integers, relative 1e-9 otherwise.
bool same_length(double a, double b);

}  // namespace fcnd
