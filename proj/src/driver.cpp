#include "fcnd/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fcnd {

void SolverConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (delta && *delta < 0) throw std::invalid_argument("delta must be non-negative");
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  if (time_limit_s < 0.0) throw std::invalid_argument("time limit must be non-negative");
  if (node_limit < 1) throw std::invalid_argument("node limit must be positive");
}

std::optional<double> RunRecord::time_to_target(double target) const {
  for (const TrajectoryPoint& p : trajectory) {
    if (p.cost <= target) return p.elapsed_s;
  }
  return std::nullopt;
}

nlohmann::ordered_json to_json(const RunRecord& rec) {
  nlohmann::ordered_json j;
  j["instance"] = rec.instance;
  j["seed"] = rec.seed;
  j["cost"] = rec.cost;
  j["lower_bound"] = rec.lower_bound;
  j["gap"] = rec.gap;
  j["time_limit_hit"] = rec.time_limit_hit;
  j["iterations_run"] = rec.iterations_run;
  nlohmann::ordered_json traj = nlohmann::ordered_json::array();
  for (const TrajectoryPoint& p : rec.trajectory) {
    traj.push_back({{"stage", p.stage}, {"cost", p.cost}, {"elapsed_s", p.elapsed_s}});
  }
  j["trajectory"] = traj;
  j["wall_time_s"] = rec.wall_time_s;
  return j;
}

const Solution& update_best(const Solution& best, const Solution& candidate) {
  return candidate.cost < best.cost ? candidate : best;
}

RunResult vfhlb(const Instance& inst, const SolverConfig& cfg, const SolutionObserver& observer) {
  cfg.validate();
  using Clock = milp::Clock;
  const auto start = Clock::now();
  KernelLimits limits;
  limits.node_limit = cfg.node_limit;
  if (cfg.time_limit_s > 0.0) {
    limits.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.time_limit_s));
  }
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  RunResult out;
  out.record.instance = inst.name;
  out.record.seed = cfg.seed;
  bool have_best = false;
  auto track = [&](const std::string& stage, const Solution& s) {
    if (observer) observer(stage, s);
    if (s.status != Feasibility::kFeasible) return;
    if (!have_best || s.cost < out.best.cost) {
      out.best = s;
      have_best = true;
    }
    out.record.trajectory.push_back({stage, out.best.cost, elapsed()});
  };

  VfhOptions vo;
  vo.gamma = cfg.gamma;
  vo.seed = cfg.seed;
  vo.limits = limits;
  vo.observer = track;
  VfhResult v = vfh(inst, vo);
  track("vfh", v.incumbent);
  double bound = v.lower_bound;

  const int delta = cfg.resolved_delta(inst);
  Solution current = v.incumbent;
  if (current.status == Feasibility::kFeasible && !limits.expired()) {
    current = local_branching(inst, current, delta, limits);
    track("local-branching", current);
  }

  if (have_best && out.best.cost - bound >= 1.0) {
    for (int it = 0; it < cfg.iterations; ++it) {
      if (limits.expired()) break;
      current = ejection_cycle(inst, current, cfg.gamma, mix_seed(cfg.seed, 0x65636cULL + it));
      track("ejection-cycle", current);
      if (limits.expired()) {
        ++out.record.iterations_run;
        break;
      }
      current = local_branching(inst, current, delta, limits);
      track("local-branching", current);
      ++out.record.iterations_run;
      if (out.best.cost - bound < 1.0) break;
    }
  }

  if (!have_best) out.best = v.incumbent;
  out.record.time_limit_hit = limits.expired();
  out.record.cost = out.best.cost;
  out.record.lower_bound = std::min(bound, out.best.cost);
  out.record.gap = std::max(0.0, out.record.cost - out.record.lower_bound);
  out.record.wall_time_s = elapsed();
  return out;
}

}  // namespace fcnd
