#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fcnd/driver.hpp"
#include "fcnd/instance.hpp"

namespace fcnd {

inline constexpr double kDefaultTheta = 0.01;

struct WilcoxonResult {
  double statistic = 0.0;  // rank sum of the first sample
  double z = 0.0;
  double p_value = 1.0;
  bool reject = false;
};

/// Two-sided rank-sum test: midranks for ties, tie-corrected variance,
/// normal approximation with continuity correction. Rejects iff p < theta.
/// Both samples need at least two values.
WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, double theta = kDefaultTheta);

/// Exact two-sided permutation p-value of the rank-sum statistic,
/// P(|W - mu| >= |w - mu|), by enumerating every split of the pooled ranks.
double wilcoxon_exact_p(std::span<const double> a, std::span<const double> b);

/// p_i = (i - 0.5) / n for i = 1..n.
std::vector<double> ttt_probabilities(int n);

struct TttSeries {
  double target = 0.0;
  double time_limit_s = 0.0;
  std::vector<double> times;         // ascending
  std::vector<double> probabilities;
  std::vector<bool> hit;             // false: censored at the time limit
  std::vector<int> run;              // run index before sorting
  std::vector<std::uint64_t> seeds;

  int hits() const;
};

/// Runs vfhlb n_runs times with seeds template.seed + i, recording when each
/// run first reaches `target`. Runs that never do are placed at the time limit.
TttSeries run_ttt(const Instance& inst, const SolverConfig& templ, double target, int n_runs = 100, int jobs = 1);

void write_ttt_csv(const TttSeries& series, std::ostream& out);

struct MethodChoice {
  std::string name;
  enum class Kind { kVfhlb, kVfh, kDecoupling } kind = Kind::kVfhlb;
  SolverConfig config;
};

/// Parses "vfhlb", "vfh" or "pd" with the given base config.
MethodChoice method_from_name(const std::string& name, const SolverConfig& base);

struct BatchRun {
  std::string instance;
  std::string method;
  int repetition = 0;
  bool ok = false;
  std::string error;
  RunRecord record;
};

struct ComparisonRow {
  std::string instance;
  std::string method;
  int runs = 0;
  int failures = 0;
  double avg_sol = 0.0;
  double avg_time = 0.0;
  double dev_time = 0.0;
  double best_sol = 0.0;
  double best_time = 0.0;
  std::optional<double> optimum;
  std::optional<double> avg_gap;
  std::optional<double> gap;
};

struct BatchResult {
  std::vector<ComparisonRow> rows;
  std::vector<BatchRun> runs;
};

/// Every instance x method x repetition, seed = base_seed + repetition.
/// `optima[i]`, when known, fills the GAP columns of instance i.
BatchResult batch(const std::vector<Instance>& instances, const std::vector<MethodChoice>& methods, int repetitions,
                  std::uint64_t base_seed, int jobs = 1, const std::vector<std::optional<double>>& optima = {});

void write_compare_csv(const std::vector<ComparisonRow>& rows, std::ostream& out);
void write_run_records(const std::vector<BatchRun>& runs, std::ostream& out);

}  // namespace fcnd
