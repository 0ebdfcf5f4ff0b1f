#include "fcnd/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <thread>
#include <vector>

#include "fcnd/graph.hpp"

namespace fcnd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// a precedes b when, at the first differing edge, a leaves it closed.
bool lex_smaller(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  return (a & (diff & (~diff + 1))) == 0;
}

struct Best {
  bool found = false;
  double cost = kInf;
  std::uint64_t mask = 0;
  std::uint64_t feasible = 0;

  void offer(double c, std::uint64_t m) {
    if (!found || c < cost || (c == cost && lex_smaller(m, mask))) {
      found = true;
      cost = c;
      mask = m;
    }
  }
};

class Evaluator {
 public:
  explicit Evaluator(const Instance& inst) : inst_(inst), n_(inst.num_nodes) {
    adj_.assign(n_, 0);
    len_.assign(n_ * n_, 0.0);
    beta_.assign(n_ * n_, 0.0);
    for (const Edge& e : inst.edges) {
      len_[e.u * n_ + e.v] = len_[e.v * n_ + e.u] = e.length;
      beta_[e.u * n_ + e.v] = beta_[e.v * n_ + e.u] = e.unit_cost;
    }
    for (const Commodity& c : inst.commodities) {
      if (std::find(origins_.begin(), origins_.end(), c.origin) == origins_.end()) origins_.push_back(c.origin);
    }
    origin_slot_.resize(inst.num_commodities());
    for (int k = 0; k < inst.num_commodities(); ++k) {
      origin_slot_[k] = static_cast<int>(std::find(origins_.begin(), origins_.end(), inst.commodities[k].origin) -
                                         origins_.begin());
    }
    reach_.resize(origins_.size());
    best_beta_.assign(origins_.size() * n_, 0.0);
    dist_.resize(n_);
    dbeta_.resize(n_);
  }

  void load(std::uint64_t mask) {
    std::fill(adj_.begin(), adj_.end(), 0);
    for (int e = 0; e < inst_.num_edges(); ++e) {
      if (mask >> e & 1) toggle(e);
    }
  }

  void toggle(int e) {
    const Edge& ed = inst_.edges[e];
    adj_[ed.u] ^= std::uint64_t{1} << ed.v;
    adj_[ed.v] ^= std::uint64_t{1} << ed.u;
  }

  bool connected() {
    for (std::size_t s = 0; s < origins_.size(); ++s) {
      std::uint64_t seen = std::uint64_t{1} << origins_[s];
      std::uint64_t frontier = seen;
      while (frontier) {
        std::uint64_t next = 0;
        for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj_[std::countr_zero(f)];
        frontier = next & ~seen;
        seen |= next;
      }
      reach_[s] = seen;
    }
    for (int k = 0; k < inst_.num_commodities(); ++k) {
      if (!(reach_[origin_slot_[k]] >> inst_.commodities[k].destination & 1)) return false;
    }
    return true;
  }

  double cost(std::uint64_t mask) {
    double total = 0.0;
    for (int e = 0; e < inst_.num_edges(); ++e) {
      if (mask >> e & 1) total += inst_.edges[e].fixed_cost;
    }
    for (std::size_t s = 0; s < origins_.size(); ++s) lex_dijkstra(s);
    for (int k = 0; k < inst_.num_commodities(); ++k) {
      const Commodity& c = inst_.commodities[k];
      total += c.quantity * best_beta_[origin_slot_[k] * n_ + c.destination];
    }
    return total;
  }

 private:
  // Dense Dijkstra on (length, unit cost) keys.
  void lex_dijkstra(std::size_t slot) {
    std::fill(dist_.begin(), dist_.end(), kInf);
    std::fill(dbeta_.begin(), dbeta_.end(), kInf);
    std::uint64_t done = 0;
    const int src = origins_[slot];
    dist_[src] = 0.0;
    dbeta_[src] = 0.0;
    const std::uint64_t reach = reach_[slot];
    while (true) {
      int u = -1;
      for (std::uint64_t r = reach & ~done; r; r &= r - 1) {
        const int v = std::countr_zero(r);
        if (dist_[v] == kInf) continue;
        if (u < 0 || less(dist_[v], dbeta_[v], dist_[u], dbeta_[u])) u = v;
      }
      if (u < 0) break;
      done |= std::uint64_t{1} << u;
      for (std::uint64_t nb = adj_[u] & ~done; nb; nb &= nb - 1) {
        const int v = std::countr_zero(nb);
        const double l = dist_[u] + len_[u * n_ + v];
        const double b = dbeta_[u] + beta_[u * n_ + v];
        if (dist_[v] == kInf || less(l, b, dist_[v], dbeta_[v])) {
          dist_[v] = l;
          dbeta_[v] = b;
        }
      }
    }
    for (int v = 0; v < n_; ++v) best_beta_[slot * n_ + v] = dbeta_[v];
  }

  static bool less(double l1, double b1, double l2, double b2) {
    if (!same_length(l1, l2)) return l1 < l2;
    return b1 < b2;
  }

  const Instance& inst_;
  int n_;
  std::vector<std::uint64_t> adj_;
  std::vector<double> len_, beta_;
  std::vector<int> origins_;
  std::vector<int> origin_slot_;
  std::vector<std::uint64_t> reach_;
  std::vector<double> best_beta_;
  std::vector<double> dist_, dbeta_;
};

Best search_range(const Instance& inst, std::uint64_t begin, std::uint64_t end) {
  Best best;
  if (begin >= end) return best;
  Evaluator ev(inst);
  ev.load(begin ^ (begin >> 1));
  for (std::uint64_t i = begin; i < end; ++i) {
    if (i != begin) ev.toggle(std::countr_zero(i));
    const std::uint64_t mask = i ^ (i >> 1);
    if (!ev.connected()) continue;
    ++best.feasible;
    best.offer(ev.cost(mask), mask);
  }
  return best;
}

}  // namespace

OracleResult solve_exact(const Instance& inst, int edge_limit, int threads) {
  const int E = inst.num_edges();
  if (E > edge_limit || E > 62) {
    throw OracleLimitError("instance has " + std::to_string(E) + " edges; the oracle limit is " +
                           std::to_string(std::min(edge_limit, 62)));
  }
  if (inst.num_nodes > 64) throw OracleLimitError("the oracle handles at most 64 nodes");
  const std::uint64_t total = std::uint64_t{1} << E;
  const int parts = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::uint64_t>(total, 64))));

  std::vector<Best> partial(parts);
  if (parts == 1) {
    partial[0] = search_range(inst, 0, total);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < parts; ++t) {
      pool.emplace_back([&, t] {
        partial[t] = search_range(inst, total * t / parts, total * (t + 1) / parts);
      });
    }
    for (auto& th : pool) th.join();
  }
  Best best;
  for (const Best& b : partial) {
    best.feasible += b.feasible;
    if (b.found) best.offer(b.cost, b.mask);
  }
  if (!best.found) throw std::runtime_error("no design connects every commodity");

  OracleResult res;
  res.feasible_designs = best.feasible;
  res.solution = Solution::empty(inst);
  for (int e = 0; e < E; ++e) res.solution.open[e] = best.mask >> e & 1;
  res.solution.flow = *route_followers(inst, res.solution.open);
  refresh(inst, res.solution);
  res.cost = res.solution.cost;
  return res;
}

}  // namespace fcnd
