#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fcnd/instance.hpp"
#include "fcnd/solution.hpp"

namespace fixtures {

/// Triangle 0-1-2: edges (0,1) and (1,2) with c=1, f=5; (0,2) with c=3, f=8;
/// beta=1 everywhere; one commodity 0 -> 2 with q=2.
fcnd::Instance worked_instance();

fcnd::Instance parse(const std::string& text);

/// Deterministic family of small generated instances: |V| in [5,7],
/// density in [0.5,0.8], |K| in [2,3].
std::vector<fcnd::Instance> oracle_suite(int count = 30, std::uint64_t base_seed = 1000);

/// Design from edge ids, commodities routed along the given node sequences.
fcnd::Solution make_solution(const fcnd::Instance& inst, const std::vector<int>& open_edges,
                             const std::vector<std::vector<int>>& paths);

}  // namespace fixtures
