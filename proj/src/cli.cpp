#include "fcnd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fcnd/bench.hpp"
#include "fcnd/driver.hpp"
#include "fcnd/model.hpp"
#include "fcnd/oracle.hpp"

namespace fcnd {

namespace {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
  if (!f) throw IoError("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::optional<int> parse_delta(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v < 0) throw CLI::ValidationError("--delta", "expected a non-negative integer or 'auto'");
  return v;
}

struct CommonFlags {
  std::uint64_t seed = 0;
  double gamma = kDefaultGamma;
  std::string delta = "auto";
  int iters = 10;
  double time_limit = 0.0;
  long node_limit = 200000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed")->envname("FCNDP_SEED");
    cmd->add_option("--gamma", gamma, "candidate-list fraction")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--delta", delta, "local-branching radius, integer or 'auto' (ceil(|E|/2))");
    cmd->add_option("--iters", iters, "perturbation iterations")->check(CLI::PositiveNumber);
    cmd->add_option("--time-limit", time_limit, "wall-clock limit per run in seconds, 0 for none")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--node-limit", node_limit, "branch-and-bound node limit per call")->check(CLI::PositiveNumber);
  }

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.gamma = gamma;
    cfg.delta = parse_delta(delta);
    cfg.iterations = iters;
    cfg.time_limit_s = time_limit;
    cfg.node_limit = node_limit;
    cfg.validate();
    return cfg;
  }
};

fs::path record_path_for(const fs::path& output) {
  fs::path p = output;
  p.replace_extension();
  return p.string() + ".record.json";
}

int cmd_solve(const std::string& instance_path, const CommonFlags& flags, const std::string& output,
              const std::string& record, const std::string& export_model, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(instance_path);
  const SolverConfig cfg = flags.config();
  if (!export_model.empty()) {
    std::ostringstream lp;
    write_lp_format(build_model(inst), lp);
    write_text(export_model, lp.str());
  }
  const RunResult res = vfhlb(inst, cfg);
  if (res.best.status != Feasibility::kFeasible) {
    err << "no feasible solution found" << (res.record.time_limit_hit ? " within the time limit" : "") << "\n";
    return kExitBudget;
  }
  const SolutionReport report{res.best, res.record.lower_bound, res.record.wall_time_s, cfg.seed};
  const std::string json = to_json(inst, report).dump(2) + "\n";
  if (output.empty()) {
    out << json;
  } else {
    write_text(output, json);
  }
  const std::string rec_path = !record.empty() ? record : (output.empty() ? "" : record_path_for(output).string());
  if (!rec_path.empty()) write_text(rec_path, to_json(res.record).dump(2) + "\n");
  return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path, std::ostream& out) {
  const Instance inst = load_instance(instance_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text(solution_path));
  } catch (const nlohmann::json::parse_error& ex) {
    throw IoError(std::string("malformed solution JSON: ") + ex.what());
  }
  const ParsedSolution parsed = parse_solution_json(inst, doc);
  FeasibilityReport report;
  report.violations = parsed.structural;
  const FeasibilityReport model_report = verify_bilevel(inst, parsed.solution);
  report.violations.insert(report.violations.end(), model_report.violations.begin(), model_report.violations.end());
  const double evaluated = evaluate_cost(inst, parsed.solution);
  const bool cost_ok = std::fabs(evaluated - parsed.declared_cost) <= 1e-6;
  if (report.pass() && cost_ok) {
    out << "PASS cost " << evaluated << "\n";
    return kExitOk;
  }
  if (!cost_ok) out << "cost mismatch: declared " << parsed.declared_cost << ", evaluated " << evaluated << "\n";
  if (!report.pass()) out << report.summary() << "\n";
  return kExitVerification;
}

int cmd_oracle(const std::string& instance_path, int limit, int jobs, const std::string& output, std::ostream& out) {
  const Instance inst = load_instance(instance_path);
  const auto start = milp::Clock::now();
  const OracleResult res = solve_exact(inst, limit, jobs);
  const double wall = std::chrono::duration<double>(milp::Clock::now() - start).count();
  const SolutionReport report{res.solution, res.cost, wall, 0};
  const std::string json = to_json(inst, report).dump(2) + "\n";
  if (output.empty()) {
    out << json;
  } else {
    write_text(output, json);
  }
  return kExitOk;
}

int cmd_generate(int nodes, double density, int commodities, std::uint64_t seed, const std::string& dir,
                 const std::string& output, std::ostream& out) {
  const Instance inst = generate_instance(nodes, density, commodities, seed);
  const fs::path path = output.empty() ? fs::path(dir) / (inst.name + ".txt") : fs::path(output);
  save_instance(inst, path);
  out << path.string() << "\n";
  return kExitOk;
}

struct BenchFlags {
  std::vector<std::string> instances;
  std::vector<std::string> methods{"vfhlb"};
  int reps = 5;
  int jobs = 1;
  std::string output = ".";
  bool ttt = false;
  double target_ratio = 1.22;
  int runs = 100;
  bool with_oracle = false;
  int oracle_limit = 20;
};

int cmd_bench(const BenchFlags& b, const CommonFlags& flags, std::ostream& out) {
  const SolverConfig cfg = flags.config();
  std::vector<Instance> instances;
  for (const std::string& p : b.instances) instances.push_back(load_instance(p));
  fs::create_directories(b.output);

  if (b.ttt) {
    std::ostringstream csv;
    bool header = true;
    for (const Instance& inst : instances) {
      const OracleResult opt = solve_exact(inst, b.oracle_limit, b.jobs);
      const double target = b.target_ratio * opt.cost;
      const TttSeries series = run_ttt(inst, cfg, target, b.runs, b.jobs);
      std::ostringstream one;
      write_ttt_csv(series, one);
      std::string text = one.str();
      if (!header) text = text.substr(text.find('\n') + 1);
      header = false;
      csv << text;
      out << inst.name << ": optimum " << opt.cost << ", target " << target << ", " << series.hits() << "/"
          << b.runs << " runs hit\n";
    }
    write_text(fs::path(b.output) / "ttt.csv", csv.str());
    return kExitOk;
  }

  std::vector<MethodChoice> methods;
  for (const std::string& m : b.methods) methods.push_back(method_from_name(m, cfg));
  std::vector<std::optional<double>> optima(instances.size());
  if (b.with_oracle) {
    for (std::size_t i = 0; i < instances.size(); ++i) optima[i] = solve_exact(instances[i], b.oracle_limit, b.jobs).cost;
  }
  const BatchResult res = batch(instances, methods, b.reps, cfg.seed, b.jobs, optima);
  std::ostringstream csv, ndjson;
  write_compare_csv(res.rows, csv);
  write_run_records(res.runs, ndjson);
  write_text(fs::path(b.output) / "compare.csv", csv.str());
  write_text(fs::path(b.output) / "runs.ndjson", ndjson.str());
  out << csv.str();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-charge network design with user-optimal flows"};
  app.name("fcndp");
  app.require_subcommand(1);

  CommonFlags solve_flags, bench_flags;
  std::string instance, output, record, export_model, solution;

  CLI::App* solve = app.add_subcommand("solve", "run the VFHLB heuristic on an instance");
  solve->add_option("--instance", instance, "instance file")->required();
  solve_flags.attach(solve);
  solve->add_option("--output", output, "solution JSON path (default: standard output)");
  solve->add_option("--record", record, "run record JSON path (default: next to --output)");
  solve->add_option("--export-model", export_model, "write the one-level model in LP format");

  CLI::App* verify = app.add_subcommand("verify", "check a solution JSON against an instance");
  verify->add_option("--instance", instance, "instance file")->required();
  verify->add_option("--solution", solution, "solution JSON")->required();

  int limit = 20, oracle_jobs = 1;
  CLI::App* oracle = app.add_subcommand("oracle", "solve a small instance exactly by enumeration");
  oracle->add_option("--instance", instance, "instance file")->required();
  oracle->add_option("--limit", limit, "maximum edge count")->check(CLI::PositiveNumber);
  oracle->add_option("--jobs", oracle_jobs, "worker threads")->check(CLI::PositiveNumber);
  oracle->add_option("--output", output, "solution JSON path (default: standard output)");

  int nodes = 10, commodities = 5;
  double density = 0.3;
  std::uint64_t gen_seed = 0;
  std::string dir = ".";
  CLI::App* generate = app.add_subcommand("generate", "write a random instance named <V>-<density>-<K>-<seed>.txt");
  generate->add_option("--nodes", nodes, "node count")->check(CLI::PositiveNumber);
  generate->add_option("--density", density, "edge density in (0, 1]");
  generate->add_option("--commodities", commodities, "commodity count")->check(CLI::NonNegativeNumber);
  generate->add_option("--seed", gen_seed, "RNG seed")->envname("FCNDP_SEED");
  generate->add_option("--dir", dir, "output directory");
  generate->add_option("--output", output, "explicit output path");

  BenchFlags bench_opts;
  CLI::App* bench = app.add_subcommand("bench", "batch comparison or time-to-target experiment");
  bench->add_option("--instance", bench_opts.instances, "instance files")->required();
  bench_flags.attach(bench);
  bench->add_option("--methods", bench_opts.methods, "methods to compare: vfhlb, vfh, pd")->delimiter(',');
  bench->add_option("--reps", bench_opts.reps, "repetitions per instance and method")->check(CLI::PositiveNumber);
  bench->add_option("--jobs", bench_opts.jobs, "worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--output", bench_opts.output, "output directory");
  bench->add_flag("--ttt", bench_opts.ttt, "time-to-target runs instead of the comparison table");
  bench->add_option("--target-ratio", bench_opts.target_ratio, "target as a multiple of the optimum")
      ->check(CLI::PositiveNumber);
  bench->add_option("--runs", bench_opts.runs, "runs per time-to-target series")->check(CLI::PositiveNumber);
  bench->add_flag("--oracle", bench_opts.with_oracle, "compute optima for the GAP columns");
  bench->add_option("--oracle-limit", bench_opts.oracle_limit, "maximum edge count for the oracle");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(instance, solve_flags, output, record, export_model, out, err);
    if (*verify) return cmd_verify(instance, solution, out);
    if (*oracle) return cmd_oracle(instance, limit, oracle_jobs, output, out);
    if (*generate) return cmd_generate(nodes, density, commodities, gen_seed, dir, output, out);
    if (*bench) return cmd_bench(bench_opts, bench_flags, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fcnd
