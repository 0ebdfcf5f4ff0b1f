#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fcnd/bench.hpp"
#include "fcnd/oracle.hpp"
#include "fixtures.hpp"

using namespace fcnd;

namespace {

// P(|W - mu| >= |w - mu|) by explicit recursion over subsets, no tie handling.
double exact_by_recursion(int n, int m, double w) {
  const int N = n + m;
  const double mu = n * (N + 1.0) / 2.0;
  long extreme = 0, total = 0;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int next, int left, double sum) -> void {
    if (left == 0) {
      ++total;
      if (std::fabs(sum - mu) >= std::fabs(w - mu) - 1e-9) ++extreme;
      return;
    }
    for (int r = next; r <= N - left + 1; ++r) self(self, r + 1, left - 1, sum + r);
  };
  rec(rec, 1, n, 0.0);
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("rank-sum on separated samples") {
  const std::vector<double> a{1, 2, 3}, b{101, 102, 103};
  const WilcoxonResult r = wilcoxon_rank_sum(a, b);
  CHECK(r.statistic == 6.0);
  CHECK(r.p_value == doctest::Approx(std::erfc((4.5 - 0.5) / std::sqrt(5.25) / std::sqrt(2.0))));
  CHECK_FALSE(r.reject);
  CHECK(wilcoxon_exact_p(a, b) == doctest::Approx(0.1));
  CHECK(r.z < 0.0);
}

TEST_CASE("identical samples never reject") {
  const std::vector<double> a{4, 4, 4, 4};
  const WilcoxonResult r = wilcoxon_rank_sum(a, a);
  CHECK(r.p_value == 1.0);
  CHECK_FALSE(r.reject);
  const std::vector<double> b{1, 5, 9, 13};
  CHECK(wilcoxon_rank_sum(b, b).p_value == 1.0);
  CHECK(wilcoxon_exact_p(b, b) == 1.0);
}

TEST_CASE("two-sided symmetry") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(2 + uniform_index(rng, 8)), b(2 + uniform_index(rng, 8));
    for (auto& v : a) v = static_cast<double>(uniform_int(rng, 0, 12));
    for (auto& v : b) v = static_cast<double>(uniform_int(rng, 0, 12));
    CHECK(wilcoxon_rank_sum(a, b).p_value == doctest::Approx(wilcoxon_rank_sum(b, a).p_value).epsilon(1e-12));
    if (a.size() + b.size() <= 14) CHECK(wilcoxon_exact_p(a, b) == doctest::Approx(wilcoxon_exact_p(b, a)));
  }
}

TEST_CASE("large separated samples reject") {
  std::vector<double> a, b;
  for (int i = 0; i < 20; ++i) {
    a.push_back(i);
    b.push_back(100 + i);
  }
  const WilcoxonResult r = wilcoxon_rank_sum(a, b);
  CHECK(r.reject);
  CHECK(r.p_value < 1e-6);
  CHECK_FALSE(wilcoxon_rank_sum(a, b, 1e-12).reject);
}

TEST_CASE("exact enumerator matches an independent recursion without ties") {
  for (int n = 2; n <= 5; ++n) {
    for (int m = 2; m <= 5; ++m) {
      std::vector<double> pooled(n + m);
      for (int i = 0; i < n + m; ++i) pooled[i] = i + 1;
      Rng rng(n * 10 + m);
      for (int shuffle = 0; shuffle < 5; ++shuffle) {
        for (int i = n + m - 1; i > 0; --i) std::swap(pooled[i], pooled[uniform_index(rng, i + 1)]);
        const std::vector<double> a(pooled.begin(), pooled.begin() + n), b(pooled.begin() + n, pooled.end());
        double w = 0.0;
        for (double v : a) w += v;
        CHECK(wilcoxon_exact_p(a, b) == doctest::Approx(exact_by_recursion(n, m, w)));
      }
    }
  }
}

TEST_CASE("sample size checks") {
  const std::vector<double> one{1}, two{1, 2};
  CHECK_THROWS_AS(wilcoxon_rank_sum(one, two), std::invalid_argument);
  CHECK_THROWS_AS(wilcoxon_exact_p(two, one), std::invalid_argument);
  CHECK(kDefaultTheta == 0.01);
}

TEST_CASE("ttt probabilities") {
  const auto p4 = ttt_probabilities(4);
  CHECK(p4 == std::vector<double>{0.125, 0.375, 0.625, 0.875});
  const auto p100 = ttt_probabilities(100);
  CHECK(p100.front() == 0.005);
  CHECK(p100.back() == 0.995);
  for (std::size_t i = 1; i < p100.size(); ++i) CHECK(p100[i] > p100[i - 1]);
}

TEST_CASE("ttt series on a small instance") {
  const Instance inst = generate_instance(7, 0.6, 3, 4);
  const double opt = solve_exact(inst).cost;
  SolverConfig cfg;
  cfg.time_limit_s = 10.0;
  cfg.seed = 100;
  const TttSeries s = run_ttt(inst, cfg, 1.22 * opt, 8, 2);
  CHECK(s.hits() == 8);
  CHECK(std::is_sorted(s.times.begin(), s.times.end()));
  CHECK(s.probabilities == ttt_probabilities(8));
  std::vector<std::uint64_t> seeds = s.seeds;
  std::sort(seeds.begin(), seeds.end());
  for (int i = 0; i < 8; ++i) CHECK(seeds[i] == 100u + i);
  std::ostringstream csv;
  write_ttt_csv(s, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("target,run,seed,time_s,hit\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 9);

  const TttSeries none = run_ttt(inst, cfg, opt - 1.0, 2, 1);
  CHECK(none.hits() == 0);
  CHECK(none.times == std::vector<double>{10.0, 10.0});
}

TEST_CASE("batch aggregates") {
  const Instance inst = fixtures::worked_instance();
  const SolverConfig base;
  SUBCASE("one instance, one method, five reps") {
    const BatchResult r = batch({inst}, {method_from_name("vfhlb", base)}, 5, 10, 1, {10.0});
    REQUIRE(r.rows.size() == 1);
    CHECK(r.runs.size() == 5);
    CHECK(r.rows[0].runs == 5);
    CHECK(r.rows[0].avg_sol == 10.0);
    CHECK(r.rows[0].best_sol == 10.0);
    CHECK(*r.rows[0].gap == 0.0);
    CHECK(*r.rows[0].avg_gap == 0.0);
    for (int rep = 0; rep < 5; ++rep) CHECK(r.runs[rep].record.seed == 10u + rep);
  }
  SUBCASE("identical methods give identical rows") {
    const Instance other = generate_instance(8, 0.5, 4, 3);
    const BatchResult r =
        batch({other}, {method_from_name("pd", base), method_from_name("pd", base)}, 3, 0, 2);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].avg_sol == r.rows[1].avg_sol);
    CHECK(r.rows[0].best_sol == r.rows[1].best_sol);
    CHECK_FALSE(r.rows[0].gap.has_value());
  }
  SUBCASE("csv and records") {
    const BatchResult r = batch({inst}, {method_from_name("vfh", base), method_from_name("pd", base)}, 2, 0);
    std::ostringstream csv, nd;
    write_compare_csv(r.rows, csv);
    write_run_records(r.runs, nd);
    const std::string text = csv.str();
    CHECK(text.rfind("instance,method,avg_sol,avg_time,dev_time,best_sol,best_time,avg_gap,gap\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    std::istringstream lines(nd.str());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
      const auto j = nlohmann::json::parse(line);
      CHECK(j["ok"] == true);
      ++count;
    }
    CHECK(count == 4);
  }
  CHECK_THROWS_AS(method_from_name("grasp", base), std::invalid_argument);
  CHECK_THROWS_AS(batch({}, {method_from_name("pd", base)}, 1, 0), std::invalid_argument);
}
