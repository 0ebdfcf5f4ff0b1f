#include "doctest.h"
#include "fcnd/driver.hpp"
#include "fcnd/oracle.hpp"
#include "fixtures.hpp"

using namespace fcnd;

TEST_CASE("config defaults and validation") {
  SolverConfig cfg;
  CHECK(cfg.gamma == 0.85);
  CHECK(cfg.iterations == 10);
  CHECK_NOTHROW(cfg.validate());
  const Instance inst = generate_instance(10, 0.3, 5, 1);
  CHECK(cfg.resolved_delta(inst) == 7);
  cfg.delta = 3;
  CHECK(cfg.resolved_delta(inst) == 3);

  SolverConfig bad;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.iterations = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.delta = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.time_limit_s = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("update_best keeps the incumbent on ties") {
  Solution a, b, c;
  a.cost = 10;
  b.cost = 14;
  c.cost = 10;
  CHECK(&update_best(a, b) == &a);
  CHECK(&update_best(b, a) == &a);
  CHECK(&update_best(a, c) == &a);
}

TEST_CASE("worked instance skips the perturbation loop") {
  const Instance inst = fixtures::worked_instance();
  const RunResult r = vfhlb(inst, SolverConfig{});
  CHECK(r.best.cost == 10.0);
  CHECK(r.record.gap < 1.0);
  CHECK(r.record.iterations_run == 0);
  CHECK_FALSE(r.record.time_limit_hit);
}

TEST_CASE("vfhlb on small instances") {
  int optimal = 0;
  const auto suite = fixtures::oracle_suite(30);
  for (const Instance& inst : suite) {
    SolverConfig cfg;
    cfg.seed = 3;
    int emitted = 0;
    const RunResult r = vfhlb(inst, cfg, [&](const std::string&, const Solution& s) {
      ++emitted;
      CHECK(verify_bilevel(inst, s).pass());
    });
    const double opt = solve_exact(inst).cost;
    CHECK(verify_bilevel(inst, r.best).pass());
    CHECK(r.best.cost >= opt);
    CHECK(r.record.lower_bound <= r.record.cost);
    CHECK(r.record.gap >= 0.0);
    CHECK(r.record.lower_bound <= opt);
    CHECK(emitted > 0);
    optimal += r.best.cost == opt;
    double prev = INFINITY;
    for (const TrajectoryPoint& p : r.record.trajectory) {
      CHECK(p.cost <= prev);
      prev = p.cost;
    }
    CHECK(r.record.trajectory.back().cost == r.best.cost);
  }
  CHECK(optimal >= 24);
}

TEST_CASE("vfhlb is deterministic") {
  const Instance inst = generate_instance(9, 0.5, 4, 12);
  SolverConfig cfg;
  cfg.seed = 21;
  const RunResult a = vfhlb(inst, cfg);
  const RunResult b = vfhlb(inst, cfg);
  CHECK(a.best.open == b.best.open);
  CHECK(a.best.flow == b.best.flow);
  CHECK(a.record.cost == b.record.cost);
  CHECK(a.record.trajectory.size() == b.record.trajectory.size());
}

TEST_CASE("time to target") {
  RunRecord rec;
  rec.trajectory = {{"vfh", 20, 0.1}, {"local-branching", 15, 0.3}, {"ejection-cycle", 12, 0.7}};
  CHECK(rec.time_to_target(16) == 0.3);
  CHECK(rec.time_to_target(20) == 0.1);
  CHECK_FALSE(rec.time_to_target(11).has_value());
  const auto j = to_json(rec);
  CHECK(j["trajectory"].size() == 3);
  CHECK(j["trajectory"][1]["stage"] == "local-branching");
  CHECK(j.contains("wall_time_s"));
}

TEST_CASE("expired budget still returns the constructed solution") {
  const Instance inst = generate_instance(9, 0.6, 5, 2);
  SolverConfig cfg;
  cfg.time_limit_s = 1e-9;
  const RunResult r = vfhlb(inst, cfg);
  CHECK(r.record.time_limit_hit);
  CHECK(verify_bilevel(inst, r.best).pass());
}
