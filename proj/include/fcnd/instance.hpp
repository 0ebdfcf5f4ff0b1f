#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcnd {

/// Undirected candidate edge. Both arc directions share `length`.
struct Edge {
  int u = 0;
  int v = 0;
  double length = 1.0;      // c_e
  double fixed_cost = 0.0;  // f_e, paid once when the edge is opened
  double unit_cost = 0.0;   // beta_e, per unit of commodity shipped

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Commodity {
  int origin = 0;
  int destination = 0;
  double quantity = 1.0;

  friend bool operator==(const Commodity&, const Commodity&) = default;
};

/// Raised for malformed instance files. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arcs are numbered 2*e (u -> v) and 2*e + 1 (v -> u).
inline int arc_of(int edge, bool reversed) { return 2 * edge + (reversed ? 1 : 0); }
inline int edge_of_arc(int arc) { return arc / 2; }
inline int reverse_arc(int arc) { return arc ^ 1; }

struct Instance {
  int num_nodes = 0;
  std::vector<Edge> edges;
  std::vector<Commodity> commodities;
  std::string name;

  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_arcs() const { return 2 * num_edges(); }
  int num_commodities() const { return static_cast<int>(commodities.size()); }

  int arc_tail(int arc) const {
    const Edge& e = edges[edge_of_arc(arc)];
    return (arc & 1) ? e.v : e.u;
  }
  int arc_head(int arc) const {
    const Edge& e = edges[edge_of_arc(arc)];
    return (arc & 1) ? e.u : e.v;
  }

  /// Variable cost g_e^k = q^k * beta_e of moving commodity k across edge e.
  double variable_cost(int edge, int commodity) const {
    return commodities[commodity].quantity * edges[edge].unit_cost;
  }

  double total_length() const;
  double total_fixed_cost() const;
  double total_quantity() const;

  /// Edge id joining a and b, or -1.
  int find_edge(int a, int b) const;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  /// Structural equality (the name is ignored).
  bool same_structure(const Instance& other) const;
};

Instance parse_instance(std::istream& in, std::string name = {});
Instance load_instance(const std::filesystem::path& path);
void write_instance(const Instance& inst, std::ostream& out);
void save_instance(const Instance& inst, const std::filesystem::path& path);

/// `<nodes>-<density>-<commodities>-<seed>`, e.g. "10-0.3-5-1".
std::string instance_name(int nodes, double density, int commodities, std::uint64_t seed);

/// Number of edges a generated graph gets: floor(density * n(n-1)/2).
int generated_edge_count(int nodes, double density);

/// Connected random instance with integer data: c in [1,20], f in [50,200],
/// beta in [1,5], q in [1,10]. A random spanning tree is laid first, the
/// remaining edges are drawn uniformly among the unused node pairs.
Instance generate_instance(int nodes, double density, int commodities, std::uint64_t seed);

/// Per-edge big-M for the lifted shortest-path constraints: c_e + sum of all lengths.
std::vector<double> compute_big_m(const Instance& inst);

}  // namespace fcnd
