#pragma once

#include <cstdint>
#include <stdexcept>

#include "fcnd/instance.hpp"
#include "fcnd/solution.hpp"

namespace fcnd {

struct OracleResult {
  Solution solution;
  double cost = 0.0;
  /// Designs in which every commodity is connected.
  std::uint64_t feasible_designs = 0;
};

class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive search over all 2^|E| designs. Followers take shortest paths,
/// ties broken toward the cheapest path for the leader. Among equal-cost
/// optima the lexicographically smallest y (y_0 first) is returned, whatever
/// the thread count. Throws OracleLimitError when |E| > edge_limit.
OracleResult solve_exact(const Instance& inst, int edge_limit = 20, int threads = 1);

}  // namespace fcnd
