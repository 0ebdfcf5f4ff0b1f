#include "fcnd/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "fcnd/random.hpp"

namespace fcnd {

namespace {

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

template <typename T>
T parse_token(const std::string& tok, int line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("invalid ") + what + " '" + tok + "'");
  }
  return value;
}

}  // namespace

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

double Instance::total_length() const {
  double s = 0.0;
  for (const Edge& e : edges) s += e.length;
  return s;
}

double Instance::total_fixed_cost() const {
  double s = 0.0;
  for (const Edge& e : edges) s += e.fixed_cost;
  return s;
}

double Instance::total_quantity() const {
  double s = 0.0;
  for (const Commodity& k : commodities) s += k.quantity;
  return s;
}

int Instance::find_edge(int a, int b) const {
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges[e];
    if ((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a)) return e;
  }
  return -1;
}

void Instance::validate() const {
  if (num_nodes < 0) throw ValidationError("node count must be non-negative");
  std::set<std::pair<int, int>> seen;
  for (int i = 0; i < num_edges(); ++i) {
    const Edge& e = edges[i];
    const std::string tag = "edge " + std::to_string(i) + ": ";
    if (e.u < 0 || e.u >= num_nodes || e.v < 0 || e.v >= num_nodes) {
      throw ValidationError(tag + "endpoint out of range");
    }
    if (e.u == e.v) throw ValidationError(tag + "self-loop");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw ValidationError(tag + "duplicate edge");
    }
    if (!std::isfinite(e.length) || e.length <= 0.0) throw ValidationError(tag + "length must be positive");
    if (!std::isfinite(e.fixed_cost) || e.fixed_cost < 0.0) {
      throw ValidationError(tag + "fixed cost must be non-negative");
    }
    if (!std::isfinite(e.unit_cost) || e.unit_cost < 0.0) {
      throw ValidationError(tag + "unit cost must be non-negative");
    }
  }
  for (int i = 0; i < num_commodities(); ++i) {
    const Commodity& k = commodities[i];
    const std::string tag = "commodity " + std::to_string(i) + ": ";
    if (k.origin < 0 || k.origin >= num_nodes || k.destination < 0 || k.destination >= num_nodes) {
      throw ValidationError(tag + "endpoint out of range");
    }
    if (k.origin == k.destination) throw ValidationError(tag + "origin equals destination");
    if (!std::isfinite(k.quantity) || k.quantity <= 0.0) {
      throw ValidationError(tag + "quantity must be positive");
    }
  }
}

bool Instance::same_structure(const Instance& other) const {
  return num_nodes == other.num_nodes && edges == other.edges && commodities == other.commodities;
}

Instance parse_instance(std::istream& in, std::string name) {
  Instance inst;
  inst.name = std::move(name);
  int declared_nodes = -1, declared_edges = -1, declared_commodities = -1;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto tok = split_tokens(raw);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    auto expect = [&](std::size_t n) {
      if (tok.size() != n) {
        throw ParseError(line_no, "'" + key + "' expects " + std::to_string(n - 1) + " values");
      }
    };
    if (key == "nodes" || key == "edges" || key == "commodities") {
      expect(2);
      const int count = parse_token<int>(tok[1], line_no, "count");
      if (count < 0) throw ParseError(line_no, "negative count");
      int& slot = key == "nodes" ? declared_nodes : key == "edges" ? declared_edges : declared_commodities;
      if (slot >= 0) throw ParseError(line_no, "repeated '" + key + "' header");
      slot = count;
    } else if (key == "e") {
      expect(6);
      if (declared_nodes < 0 || declared_edges < 0) throw ParseError(line_no, "edge before headers");
      Edge e;
      e.u = parse_token<int>(tok[1], line_no, "node id");
      e.v = parse_token<int>(tok[2], line_no, "node id");
      e.length = parse_token<double>(tok[3], line_no, "length");
      e.fixed_cost = parse_token<double>(tok[4], line_no, "fixed cost");
      e.unit_cost = parse_token<double>(tok[5], line_no, "unit cost");
      inst.edges.push_back(e);
      if (inst.num_edges() > declared_edges) throw ParseError(line_no, "more edges than declared");
    } else if (key == "k") {
      expect(4);
      if (declared_nodes < 0 || declared_commodities < 0) {
        throw ParseError(line_no, "commodity before headers");
      }
      Commodity k;
      k.origin = parse_token<int>(tok[1], line_no, "node id");
      k.destination = parse_token<int>(tok[2], line_no, "node id");
      k.quantity = parse_token<double>(tok[3], line_no, "quantity");
      inst.commodities.push_back(k);
      if (inst.num_commodities() > declared_commodities) {
        throw ParseError(line_no, "more commodities than declared");
      }
    } else {
      throw ParseError(line_no, "unknown record '" + key + "'");
    }
  }
  if (declared_nodes < 0) throw ParseError(line_no, "missing 'nodes' header");
  if (declared_edges < 0) throw ParseError(line_no, "missing 'edges' header");
  if (declared_commodities < 0) throw ParseError(line_no, "missing 'commodities' header");
  if (inst.num_edges() != declared_edges) throw ParseError(line_no, "fewer edges than declared");
  if (inst.num_commodities() != declared_commodities) {
    throw ParseError(line_no, "fewer commodities than declared");
  }
  inst.num_nodes = declared_nodes;
  inst.validate();
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  return parse_instance(in, path.stem().string());
}

void write_instance(const Instance& inst, std::ostream& out) {
  if (!inst.name.empty()) out << "# " << inst.name << '\n';
  out << "nodes " << inst.num_nodes << '\n';
  out << "edges " << inst.num_edges() << '\n';
  out << "commodities " << inst.num_commodities() << '\n';
  for (const Edge& e : inst.edges) {
    out << "e " << e.u << ' ' << e.v << ' ' << format_number(e.length) << ' ' << format_number(e.fixed_cost)
        << ' ' << format_number(e.unit_cost) << '\n';
  }
  for (const Commodity& k : inst.commodities) {
    out << "k " << k.origin << ' ' << k.destination << ' ' << format_number(k.quantity) << '\n';
  }
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path.string());
  write_instance(inst, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string instance_name(int nodes, double density, int commodities, std::uint64_t seed) {
  return std::to_string(nodes) + "-" + format_number(density) + "-" + std::to_string(commodities) + "-" +
         std::to_string(seed);
}

int generated_edge_count(int nodes, double density) {
  const double pairs = 0.5 * nodes * (nodes - 1);
  return static_cast<int>(std::floor(density * pairs + 1e-9));
}

Instance generate_instance(int nodes, double density, int commodities, std::uint64_t seed) {
  if (nodes < 2) throw std::invalid_argument("need at least two nodes");
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("density must lie in (0, 1]");
  if (commodities < 0) throw std::invalid_argument("negative commodity count");
  const int m = generated_edge_count(nodes, density);
  if (m < nodes - 1) {
    throw std::invalid_argument("density " + format_number(density) + " too low for a connected graph on " +
                                std::to_string(nodes) + " nodes");
  }

  Rng rng(seed);
  Instance inst;
  inst.num_nodes = nodes;
  inst.name = instance_name(nodes, density, commodities, seed);

  std::vector<int> order(nodes);
  std::iota(order.begin(), order.end(), 0);
  for (int i = nodes - 1; i > 0; --i) std::swap(order[i], order[uniform_index(rng, i + 1)]);

  std::vector<std::vector<bool>> used(nodes, std::vector<bool>(nodes, false));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i < nodes; ++i) {
    const int a = order[i];
    const int b = order[uniform_index(rng, i)];
    used[a][b] = used[b][a] = true;
    pairs.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::vector<std::pair<int, int>> rest;
  for (int a = 0; a < nodes; ++a) {
    for (int b = a + 1; b < nodes; ++b) {
      if (!used[a][b]) rest.emplace_back(a, b);
    }
  }
  const int extra = m - (nodes - 1);
  for (int i = 0; i < extra; ++i) {
    const auto j = i + static_cast<int>(uniform_index(rng, rest.size() - i));
    std::swap(rest[i], rest[j]);
    pairs.push_back(rest[i]);
  }
  std::sort(pairs.begin(), pairs.end());

  for (const auto& [a, b] : pairs) {
    Edge e;
    e.u = a;
    e.v = b;
    e.length = static_cast<double>(uniform_int(rng, 1, 20));
    e.fixed_cost = static_cast<double>(uniform_int(rng, 50, 200));
    e.unit_cost = static_cast<double>(uniform_int(rng, 1, 5));
    inst.edges.push_back(e);
  }
  for (int i = 0; i < commodities; ++i) {
    Commodity k;
    k.origin = static_cast<int>(uniform_index(rng, nodes));
    k.destination = static_cast<int>(uniform_index(rng, nodes - 1));
    if (k.destination >= k.origin) ++k.destination;
    k.quantity = static_cast<double>(uniform_int(rng, 1, 10));
    inst.commodities.push_back(k);
  }
  inst.validate();
  return inst;
}

std::vector<double> compute_big_m(const Instance& inst) {
  const double total = inst.total_length();
  std::vector<double> m(inst.num_edges());
  for (int e = 0; e < inst.num_edges(); ++e) m[e] = inst.edges[e].length + total;
  return m;
}

}  // namespace fcnd
