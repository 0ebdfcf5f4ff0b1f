#include <sstream>

#include "doctest.h"
#include "fcnd/model.hpp"
#include "fcnd/random.hpp"
#include "fixtures.hpp"

using namespace fcnd;

TEST_CASE("model dimensions and layout") {
  const Instance inst = generate_instance(6, 0.6, 3, 11);
  const MipModel m = build_model(inst);
  const int V = 6, E = inst.num_edges(), K = 3;
  CHECK(m.num_vars() == E + 2 * E * K + K * V);
  CHECK(m.num_rows() == K * (V + 3 * E));
  CHECK(m.num_structural_rows() == m.num_rows());
  CHECK(m.lb_cut_row == -1);
  for (int e = 0; e < E; ++e) {
    CHECK(m.vars[m.y(e)].kind == VarKind::kDesign);
    CHECK(m.lp.objective[m.y(e)] == inst.edges[e].fixed_cost);
  }
  for (int k = 0; k < K; ++k) {
    for (int a = 0; a < 2 * E; ++a) {
      CHECK(m.vars[m.x(k, a)].arc == a);
      CHECK(m.lp.objective[m.x(k, a)] == inst.variable_cost(edge_of_arc(a), k));
    }
    for (int i = 0; i < V; ++i) {
      CHECK(m.vars[m.pi(k, i)].node == i);
      CHECK(m.lp.upper[m.pi(k, i)] == (i == inst.commodities[k].destination ? 0.0 : inst.total_length()));
    }
  }
  std::vector<double> short_m(E - 1, 1.0);
  CHECK_THROWS_AS(build_model(inst, short_m), std::invalid_argument);
}

TEST_CASE("bilevel-feasible points satisfy every row") {
  for (const Instance& inst : fixtures::oracle_suite(30)) {
    const MipModel m = build_model(inst);
    Rng rng(inst.num_edges());
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::uint8_t> open(inst.num_edges());
      for (auto& o : open) o = uniform_index(rng, 3) != 0;
      const auto flow = route_followers(inst, open);
      if (!flow) continue;
      Solution s{open, *flow};
      refresh(inst, s);
      REQUIRE(s.status == Feasibility::kFeasible);
      const auto point = solution_to_point(inst, m, s);
      CHECK(max_violation(m, point) <= 1e-9);
      CHECK(model_objective(m, point) == doctest::Approx(s.cost));
      CHECK(is_integral(m, point));
      const Solution back = solution_from_values(inst, m, point);
      CHECK(back.open == s.open);
      CHECK(back.flow == s.flow);
      CHECK(back.cost == s.cost);
    }
  }
}

TEST_CASE("a longer route violates the Bellman rows") {
  const Instance inst = fixtures::worked_instance();
  const MipModel m = build_model(inst);
  Solution bad = fixtures::make_solution(inst, {0, 1, 2}, {{0, 2}});
  REQUIRE(bad.status == Feasibility::kInfeasible);
  const auto point = solution_to_point(inst, m, bad);
  CHECK(max_violation(m, point) > 0.5);
}

TEST_CASE("local-branching cut") {
  const Instance inst = fixtures::worked_instance();
  MipModel m = build_model(inst);
  const std::vector<std::uint8_t> ybar{1, 1, 0};
  add_local_branching_cut(m, ybar, 1);
  CHECK(m.lb_cut_row == m.num_structural_rows());
  CHECK(m.num_rows() == m.num_structural_rows() + 1);
  const auto& row = m.lp.rows[m.lb_cut_row];
  CHECK(row.rhs == 1.0 - 2.0);
  add_local_branching_cut(m, ybar, 2);
  CHECK(m.num_rows() == m.num_structural_rows() + 1);
  CHECK(m.lp.rows[m.lb_cut_row].rhs == 0.0);
  remove_local_branching_cut(m);
  CHECK(m.lb_cut_row == -1);
  CHECK(m.num_rows() == m.num_structural_rows());

  const std::vector<std::uint8_t> y{0, 1, 1};
  CHECK(local_branching_lhs(ybar, y) == hamming_distance(ybar, y));
  CHECK(local_branching_lhs(ybar, ybar) == 0);
}

TEST_CASE("cut left side equals Hamming distance on every design") {
  const Instance inst = generate_instance(5, 0.8, 1, 3);
  MipModel m = build_model(inst);
  const int E = inst.num_edges();
  std::vector<std::uint8_t> ybar(E);
  for (int e = 0; e < E; e += 2) ybar[e] = 1;
  add_local_branching_cut(m, ybar, 3);
  const auto& row = m.lp.rows[m.lb_cut_row];
  for (int mask = 0; mask < (1 << E); ++mask) {
    std::vector<std::uint8_t> y(E);
    for (int e = 0; e < E; ++e) y[e] = (mask >> e) & 1;
    double lhs = 0.0;
    for (std::size_t t = 0; t < row.index.size(); ++t) lhs += row.value[t] * y[row.index[t]];
    int ones = 0;
    for (auto b : ybar) ones += b;
    CHECK(lhs + ones == hamming_distance(ybar, y));
  }
}

TEST_CASE("fixing and integrality plans") {
  const Instance inst = fixtures::worked_instance();
  MipModel m = build_model(inst);
  fix_variable_zero(m, m.y(1));
  CHECK(m.lp.upper[m.y(1)] == 0.0);
  CHECK_THROWS_AS(fix_variable_zero(m, m.num_vars()), std::out_of_range);
  CHECK_THROWS_AS(fix_variable_zero(m, -1), std::out_of_range);

  IntegralityPlan plan(m);
  CHECK(plan.binary_vars().empty());
  plan.mark_design(2);
  plan.mark_commodity(0);
  CHECK(plan.is_binary(m.y(2)));
  CHECK(plan.num_binary_design() == 1);
  CHECK(plan.binary_vars().size() == 1 + 6);
  CHECK_THROWS_AS(plan.mark_binary(m.pi(0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(plan.mark_binary(m.num_vars() + 3), std::out_of_range);
  CHECK(plan.binary_vars().size() + plan.relaxed_vars().size() == 9);
  for (int j : plan.relaxed_vars()) CHECK(m.vars[j].kind != VarKind::kPotential);
  plan.mark_all();
  CHECK(plan.num_binary_design() == 3);
  CHECK(plan.relaxed_vars().empty());
}

TEST_CASE("fractional values give a relaxed solution") {
  const Instance inst = fixtures::worked_instance();
  const MipModel m = build_model(inst);
  std::vector<double> v(m.num_vars(), 0.0);
  v[m.y(2)] = 0.5;
  CHECK_FALSE(is_integral(m, v));
  CHECK(solution_from_values(inst, m, v).status == Feasibility::kRelaxed);
}

TEST_CASE("worked instance MIP optimum") {
  const Instance inst = fixtures::worked_instance();
  const MipModel m = build_model(inst);
  IntegralityPlan plan(m);
  plan.mark_all();
  const auto bins = plan.binary_vars();
  const auto res = milp::solve_bnb(m.lp, bins);
  REQUIRE(res.status == milp::SolveStatus::kOptimal);
  CHECK(res.objective == 10.0);
  const Solution s = solution_from_values(inst, m, res.values);
  CHECK(s.status == Feasibility::kFeasible);
  CHECK(s.open == std::vector<std::uint8_t>{0, 0, 1});
}

TEST_CASE("LP export layout") {
  const Instance inst = fixtures::worked_instance();
  MipModel m = build_model(inst);
  add_local_branching_cut(m, std::vector<std::uint8_t>{0, 0, 1}, 1);
  std::ostringstream out;
  write_lp_format(m, out);
  const std::string text = out.str();
  for (const char* key : {"Minimize", "Subject To", "Bounds", "Binaries", "End", "local_branching:", "bal0_0:",
                          "link0_2:", "bell0_", "x0_0_1", "pi0_2 = 0", " y2\n"}) {
    CHECK_MESSAGE(text.find(key) != std::string::npos, key);
  }
  CHECK(text.find("Minimize") < text.find("Subject To"));
  CHECK(text.find("Bounds") < text.find("Binaries"));
  IntegralityPlan plan(m);
  plan.mark_design(0);
  std::ostringstream partial;
  write_lp_format(m, partial, &plan);
  const std::string p = partial.str();
  const std::string bin = p.substr(p.find("Binaries"));
  CHECK(bin.find(" y0\n") != std::string::npos);
  CHECK(bin.find(" y1\n") == std::string::npos);
}
