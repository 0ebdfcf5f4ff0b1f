#include "doctest.h"
#include "fcnd/oracle.hpp"
#include "fixtures.hpp"
#include "reference.hpp"

using namespace fcnd;

TEST_CASE("worked instance optimum") {
  const Instance inst = fixtures::worked_instance();
  const OracleResult r = solve_exact(inst);
  CHECK(r.cost == 10.0);
  CHECK(r.solution.open == std::vector<std::uint8_t>{0, 0, 1});
  CHECK(r.solution.status == Feasibility::kFeasible);
  // Connected designs: {2}, {0,1}, {0,2}, {1,2}, {0,1,2}.
  CHECK(r.feasible_designs == 5);
}

TEST_CASE("no commodities") {
  const Instance inst = fixtures::parse("nodes 3\nedges 2\ncommodities 0\ne 0 1 1 4 1\ne 1 2 1 4 1\n");
  const OracleResult r = solve_exact(inst);
  CHECK(r.cost == 0.0);
  CHECK(r.solution.num_open() == 0);
}

TEST_CASE("star with forced paths") {
  const Instance inst = fixtures::parse(
      "nodes 4\nedges 3\ncommodities 2\ne 0 1 1 7 2\ne 0 2 1 5 3\ne 0 3 1 9 1\nk 1 2 2\nk 3 1 1\n");
  const OracleResult r = solve_exact(inst);
  // Edges used: 0 by both, 1 by k0, 2 by k1.
  CHECK(r.cost == 7 + 5 + 9 + 2 * (2 + 3) + 1 * (1 + 2));
}

TEST_CASE("matches brute force and is thread independent") {
  for (const Instance& inst : fixtures::oracle_suite(30)) {
    const OracleResult one = solve_exact(inst, 20, 1);
    const OracleResult three = solve_exact(inst, 20, 3);
    CHECK(one.cost == reference::brute_force_optimum(inst));
    CHECK(three.cost == one.cost);
    CHECK(three.solution.open == one.solution.open);
    CHECK(three.feasible_designs == one.feasible_designs);
    CHECK(verify_bilevel(inst, one.solution).pass());
    CHECK(evaluate_cost(inst, one.solution) == one.cost);
  }
}

TEST_CASE("lexicographically smallest optimum") {
  // Two parallel routes of equal cost: edges 0-1 and 2-3 mirror each other.
  const Instance inst = fixtures::parse(
      "nodes 4\nedges 4\ncommodities 1\ne 0 1 1 5 1\ne 1 3 1 5 1\ne 0 2 1 5 1\ne 2 3 1 5 1\nk 0 3 1\n");
  const OracleResult r = solve_exact(inst);
  CHECK(r.cost == 12.0);
  // y = (0,0,1,1) precedes (1,1,0,0) when y_0 is compared first.
  CHECK(r.solution.open == std::vector<std::uint8_t>{0, 0, 1, 1});
}

TEST_CASE("edge limit") {
  const Instance inst = generate_instance(8, 0.8, 2, 1);
  CHECK_THROWS_AS(solve_exact(inst, 10), OracleLimitError);
}
