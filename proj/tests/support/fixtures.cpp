#include "fixtures.hpp"

#include <sstream>

namespace fixtures {

fcnd::Instance worked_instance() {
  return parse(
      "nodes 3\n"
      "edges 3\n"
      "commodities 1\n"
      "e 0 1 1 5 1\n"
      "e 1 2 1 5 1\n"
      "e 0 2 3 8 1\n"
      "k 0 2 2\n");
}

fcnd::Instance parse(const std::string& text) {
  std::istringstream in(text);
  return fcnd::parse_instance(in, "fixture");
}

std::vector<fcnd::Instance> oracle_suite(int count, std::uint64_t base_seed) {
  std::vector<fcnd::Instance> out;
  for (int i = 0; i < count; ++i) {
    const int nodes = 5 + i % 3;
    const double density = 0.5 + 0.1 * (i % 4);
    const int commodities = 2 + (i / 3) % 2;
    out.push_back(fcnd::generate_instance(nodes, density, commodities, base_seed + static_cast<std::uint64_t>(i)));
  }
  return out;
}

fcnd::Solution make_solution(const fcnd::Instance& inst, const std::vector<int>& open_edges,
                             const std::vector<std::vector<int>>& paths) {
  fcnd::Solution s = fcnd::Solution::empty(inst);
  for (int e : open_edges) s.open[e] = 1;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    for (std::size_t i = 0; i + 1 < paths[k].size(); ++i) {
      const int a = paths[k][i], b = paths[k][i + 1];
      const int e = inst.find_edge(a, b);
      s.flow[k][fcnd::arc_of(e, inst.edges[e].u != a)] = 1;
    }
  }
  fcnd::refresh(inst, s);
  return s;
}

}  // namespace fixtures
