#include "fcnd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace fcnd {

namespace {

std::vector<double> midranks(std::span<const double> pooled, double* tie_term) {
  const std::size_t N = pooled.size();
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> rank(N);
  double ties = 0.0;
  for (std::size_t i = 0; i < N;) {
    std::size_t j = i;
    while (j + 1 < N && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = r;
    const double t = static_cast<double>(j - i + 1);
    ties += t * t * t - t;
    i = j + 1;
  }
  if (tie_term) *tie_term = ties;
  return rank;
}

std::vector<double> pool(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void check_samples(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("rank-sum test needs at least two values per sample");
}

template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, double theta) {
  check_samples(a, b);
  const std::vector<double> pooled = pool(a, b);
  double tie_term = 0.0;
  const std::vector<double> rank = midranks(pooled, &tie_term);
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  const double N = n + m;

  WilcoxonResult res;
  for (std::size_t i = 0; i < a.size(); ++i) res.statistic += rank[i];
  const double mu = n * (N + 1.0) / 2.0;
  const double var = n * m / 12.0 * ((N + 1.0) - tie_term / (N * (N - 1.0)));
  if (var <= 0.0) {
    res.p_value = 1.0;
    res.reject = false;
    return res;
  }
  const double dev = res.statistic - mu;
  const double corrected = std::max(0.0, std::fabs(dev) - 0.5);
  res.z = std::copysign(corrected / std::sqrt(var), dev);
  res.p_value = std::min(1.0, std::erfc(corrected / std::sqrt(var) / std::sqrt(2.0)));
  res.reject = res.p_value < theta;
  return res;
}

double wilcoxon_exact_p(std::span<const double> a, std::span<const double> b) {
  check_samples(a, b);
  const std::vector<double> pooled = pool(a, b);
  const int N = static_cast<int>(pooled.size());
  const int n = static_cast<int>(a.size());
  if (N > 30) throw std::invalid_argument("exact enumeration supports at most 30 pooled values");
  const std::vector<double> rank = midranks(pooled, nullptr);
  const double mu = n * (N + 1.0) / 2.0;
  double observed = 0.0;
  for (int i = 0; i < n; ++i) observed += rank[i];
  const double threshold = std::fabs(observed - mu) - 1e-9;
  std::uint64_t extreme = 0, total = 0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << N); ++mask) {
    if (std::popcount(mask) != n) continue;
    double w = 0.0;
    for (std::uint32_t s = mask; s; s &= s - 1) w += rank[std::countr_zero(s)];
    ++total;
    if (std::fabs(w - mu) >= threshold) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

std::vector<double> ttt_probabilities(int n) {
  std::vector<double> p(std::max(0, n));
  for (int i = 1; i <= n; ++i) p[i - 1] = (i - 0.5) / n;
  return p;
}

int TttSeries::hits() const { return static_cast<int>(std::count(hit.begin(), hit.end(), true)); }

TttSeries run_ttt(const Instance& inst, const SolverConfig& templ, double target, int n_runs, int jobs) {
  if (n_runs < 1) throw std::invalid_argument("at least one run is required");
  struct Outcome {
    double time = 0.0;
    bool hit = false;
    std::uint64_t seed = 0;
  };
  std::vector<Outcome> outcomes(n_runs);
  parallel_for(n_runs, jobs, [&](int i) {
    SolverConfig cfg = templ;
    cfg.seed = templ.seed + static_cast<std::uint64_t>(i);
    const RunResult res = vfhlb(inst, cfg);
    const auto t = res.record.time_to_target(target);
    Outcome& o = outcomes[i];
    o.seed = cfg.seed;
    o.hit = t.has_value() && (templ.time_limit_s <= 0.0 || *t <= templ.time_limit_s);
    o.time = o.hit ? *t : (templ.time_limit_s > 0.0 ? templ.time_limit_s : res.record.wall_time_s);
  });

  std::vector<int> order(n_runs);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return outcomes[x].time < outcomes[y].time; });
  TttSeries series;
  series.target = target;
  series.time_limit_s = templ.time_limit_s;
  series.probabilities = ttt_probabilities(n_runs);
  for (int i : order) {
    series.times.push_back(outcomes[i].time);
    series.hit.push_back(outcomes[i].hit);
    series.run.push_back(i);
    series.seeds.push_back(outcomes[i].seed);
  }
  return series;
}

void write_ttt_csv(const TttSeries& series, std::ostream& out) {
  out << "target,run,seed,time_s,hit\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << num(series.target) << ',' << series.run[i] << ',' << series.seeds[i] << ',' << num(series.times[i]) << ','
        << (series.hit[i] ? 1 : 0) << '\n';
  }
}

MethodChoice method_from_name(const std::string& name, const SolverConfig& base) {
  MethodChoice m;
  m.name = name;
  m.config = base;
  if (name == "vfhlb") m.kind = MethodChoice::Kind::kVfhlb;
  else if (name == "vfh") m.kind = MethodChoice::Kind::kVfh;
  else if (name == "pd") m.kind = MethodChoice::Kind::kDecoupling;
  else throw std::invalid_argument("unknown method '" + name + "' (expected vfhlb, vfh or pd)");
  return m;
}

namespace {

RunRecord run_method(const Instance& inst, const MethodChoice& method, std::uint64_t seed) {
  SolverConfig cfg = method.config;
  cfg.seed = seed;
  if (method.kind == MethodChoice::Kind::kVfhlb) return vfhlb(inst, cfg).record;

  const auto start = milp::Clock::now();
  RunRecord rec;
  rec.instance = inst.name;
  rec.seed = seed;
  if (method.kind == MethodChoice::Kind::kVfh) {
    VfhOptions vo;
    vo.gamma = cfg.gamma;
    vo.seed = seed;
    vo.limits.node_limit = cfg.node_limit;
    if (cfg.time_limit_s > 0.0) {
      vo.limits.deadline =
          start + std::chrono::duration_cast<milp::Clock::duration>(std::chrono::duration<double>(cfg.time_limit_s));
    }
    const VfhResult v = vfh(inst, vo);
    rec.cost = v.incumbent.cost;
    rec.lower_bound = v.lower_bound;
    if (v.incumbent.status != Feasibility::kFeasible) throw std::runtime_error("no feasible solution found");
  } else {
    DecouplingOptions pd;
    pd.gamma = cfg.gamma;
    pd.seed = seed;
    const Solution s = partial_decoupling(inst, pd);
    if (s.status != Feasibility::kFeasible) throw std::runtime_error("no feasible solution found");
    rec.cost = s.cost;
    rec.lower_bound = 0.0;
  }
  rec.wall_time_s = std::chrono::duration<double>(milp::Clock::now() - start).count();
  rec.gap = std::max(0.0, rec.cost - rec.lower_bound);
  rec.trajectory.push_back({method.name, rec.cost, rec.wall_time_s});
  return rec;
}

}  // namespace

BatchResult batch(const std::vector<Instance>& instances, const std::vector<MethodChoice>& methods, int repetitions,
                  std::uint64_t base_seed, int jobs, const std::vector<std::optional<double>>& optima) {
  if (instances.empty() || methods.empty()) throw std::invalid_argument("batch needs instances and methods");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  const int per_instance = static_cast<int>(methods.size()) * repetitions;
  const int total = static_cast<int>(instances.size()) * per_instance;
  BatchResult out;
  out.runs.resize(total);
  parallel_for(total, jobs, [&](int t) {
    const int i = t / per_instance;
    const int mth = (t % per_instance) / repetitions;
    const int rep = t % repetitions;
    BatchRun& run = out.runs[t];
    run.instance = instances[i].name;
    run.method = methods[mth].name;
    run.repetition = rep;
    try {
      run.record = run_method(instances[i], methods[mth], base_seed + static_cast<std::uint64_t>(rep));
      run.ok = true;
    } catch (const std::exception& ex) {
      run.error = ex.what();
    }
  });

  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t mth = 0; mth < methods.size(); ++mth) {
      ComparisonRow row;
      row.instance = instances[i].name;
      row.method = methods[mth].name;
      std::vector<const RunRecord*> ok;
      for (int rep = 0; rep < repetitions; ++rep) {
        const BatchRun& run = out.runs[(i * methods.size() + mth) * repetitions + rep];
        if (run.ok) ok.push_back(&run.record);
        else ++row.failures;
      }
      row.runs = static_cast<int>(ok.size());
      if (i < optima.size()) row.optimum = optima[i];
      if (!ok.empty()) {
        double sum_cost = 0.0, sum_time = 0.0;
        row.best_sol = ok.front()->cost;
        for (const RunRecord* r : ok) {
          sum_cost += r->cost;
          sum_time += r->wall_time_s;
          row.best_sol = std::min(row.best_sol, r->cost);
        }
        row.avg_sol = sum_cost / ok.size();
        row.avg_time = sum_time / ok.size();
        double ss = 0.0;
        for (const RunRecord* r : ok) ss += (r->wall_time_s - row.avg_time) * (r->wall_time_s - row.avg_time);
        row.dev_time = ok.size() > 1 ? std::sqrt(ss / (ok.size() - 1)) : 0.0;
        row.best_time = std::numeric_limits<double>::infinity();
        for (const RunRecord* r : ok) {
          if (r->cost == row.best_sol) row.best_time = std::min(row.best_time, r->wall_time_s);
        }
        if (row.optimum && *row.optimum != 0.0) {
          row.avg_gap = (row.avg_sol - *row.optimum) / *row.optimum;
          row.gap = (row.best_sol - *row.optimum) / *row.optimum;
        }
      }
      out.rows.push_back(row);
    }
  }
  return out;
}

void write_compare_csv(const std::vector<ComparisonRow>& rows, std::ostream& out) {
  out << "instance,method,avg_sol,avg_time,dev_time,best_sol,best_time,avg_gap,gap\n";
  for (const ComparisonRow& r : rows) {
    out << r.instance << ',' << r.method << ',';
    if (r.runs == 0) {
      out << ",,,,,,\n";
      continue;
    }
    out << num(r.avg_sol) << ',' << num(r.avg_time) << ',' << num(r.dev_time) << ',' << num(r.best_sol) << ','
        << num(r.best_time) << ',' << (r.avg_gap ? num(*r.avg_gap) : "") << ',' << (r.gap ? num(*r.gap) : "") << '\n';
  }
}

void write_run_records(const std::vector<BatchRun>& runs, std::ostream& out) {
  for (const BatchRun& run : runs) {
    nlohmann::ordered_json j;
    j["instance"] = run.instance;
    j["method"] = run.method;
    j["repetition"] = run.repetition;
    j["ok"] = run.ok;
    if (run.ok) j["record"] = to_json(run.record);
    else j["error"] = run.error;
    out << j.dump() << '\n';
  }
}

}  // namespace fcnd
