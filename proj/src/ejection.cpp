#include <algorithm>
#include <cmath>
#include <limits>

#include "fcnd/heuristics.hpp"

namespace fcnd {

InefficiencyReport inefficiency_metrics(const Instance& inst, const Solution& s, Rng& rng) {
  InefficiencyReport rep;
  const int E = inst.num_edges();
  rep.ratio.assign(E, std::numeric_limits<double>::quiet_NaN());
  double sum = 0.0;
  for (int e = 0; e < E; ++e) {
    if (!s.open[e]) continue;
    int crossings = 0;
    double variable = 0.0;
    for (int k = 0; k < inst.num_commodities(); ++k) {
      const int through = s.flow[k][arc_of(e, false)] + s.flow[k][arc_of(e, true)];
      crossings += through;
      variable += inst.variable_cost(e, k) * through;
    }
    if (crossings == 0) continue;
    rep.ratio[e] = (variable + inst.edges[e].fixed_cost) / crossings;
    rep.used_edges.push_back(e);
    sum += rep.ratio[e];
  }
  if (rep.used_edges.empty()) return rep;
  rep.average = sum / static_cast<double>(rep.used_edges.size());
  for (int e : rep.used_edges) {
    if (rep.ratio[e] > rep.average) rep.inefficient.push_back(e);
  }

  std::vector<int> pool = rep.inefficient;
  std::vector<bool> on_chain(inst.num_nodes, false);
  while (pool.size() >= 2) {
    const std::size_t pick = uniform_index(rng, pool.size());
    std::vector<int> chain{pool[pick]};
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    int left = inst.edges[chain.front()].u;
    int right = inst.edges[chain.front()].v;
    std::fill(on_chain.begin(), on_chain.end(), false);
    on_chain[left] = on_chain[right] = true;
    while (chain.size() < 4) {
      // (pool position, attaches at the left end?)
      std::vector<std::pair<std::size_t, bool>> ext;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const Edge& ed = inst.edges[pool[i]];
        for (int end : {left, right}) {
          int other = -1;
          if (ed.u == end) other = ed.v;
          else if (ed.v == end) other = ed.u;
          if (other >= 0 && !on_chain[other]) ext.emplace_back(i, end == left);
        }
      }
      if (ext.empty()) break;
      const auto [pos, at_left] = ext[uniform_index(rng, ext.size())];
      const int e = pool[pos];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pos));
      const Edge& ed = inst.edges[e];
      const int end = at_left ? left : right;
      const int other = ed.u == end ? ed.v : ed.u;
      on_chain[other] = true;
      if (at_left) {
        chain.insert(chain.begin(), e);
        left = other;
      } else {
        chain.push_back(e);
        right = other;
      }
    }
    if (chain.size() >= 2) rep.chains.push_back(std::move(chain));
  }
  return rep;
}

Solution ejection_cycle(const Instance& inst, const Solution& s, double gamma, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<int>> chains = inefficiency_metrics(inst, s, rng).chains;
  const double sentinel = infinity_sentinel(inst);
  std::uint64_t attempt = 0;
  while (!chains.empty()) {
    const std::size_t pick = uniform_index(rng, chains.size());
    const std::vector<int> chain = std::move(chains[pick]);
    chains.erase(chains.begin() + static_cast<std::ptrdiff_t>(pick));

    std::vector<int> kset;
    std::vector<std::uint8_t> frozen(inst.num_edges(), 0);
    for (int k = 0; k < inst.num_commodities(); ++k) {
      const bool crosses = std::any_of(chain.begin(), chain.end(), [&](int e) {
        return s.flow[k][arc_of(e, false)] || s.flow[k][arc_of(e, true)];
      });
      if (crosses) {
        kset.push_back(k);
        continue;
      }
      for (int a = 0; a < inst.num_arcs(); ++a) {
        if (s.flow[k][a]) frozen[edge_of_arc(a)] = 1;
      }
    }
    if (kset.empty()) continue;

    DecouplingOptions opt;
    opt.gamma = gamma;
    opt.seed = mix_seed(seed, ++attempt);
    opt.restricted = kset;
    opt.frozen_open = frozen;
    opt.cost_override.resize(inst.num_edges());
    for (int e = 0; e < inst.num_edges(); ++e) opt.cost_override[e] = inst.edges[e].fixed_cost;
    for (int e : chain) opt.cost_override[e] = sentinel;

    Solution rebuilt = partial_decoupling(inst, opt);
    if (rebuilt.status != Feasibility::kFeasible) continue;
    // An improving rebuild is accepted; otherwise it is still the perturbed point.
    return rebuilt;
  }
  return s;
}

}  // namespace fcnd
