// ckptplan: failure logs -> estimates -> interval prediction -> simulation
// and interval sweeps.
//
// Exit codes: 0 ok, 2 input error, 3 estimator undefined, 4 budget exceeded.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ckpt/checkpoint_cost.hpp"
#include "ckpt/csv.hpp"
#include "ckpt/error.hpp"
#include "ckpt/failure_model.hpp"
#include "ckpt/optimizer.hpp"
#include "ckpt/simulator.hpp"
#include "ckpt/sweep.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;

namespace ckpt::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitUndefined = 3;
constexpr int kExitBudget = 4;

constexpr std::uint64_t kDefaultSeed = 1;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyLog:
    case ErrorKind::NoFailures:
    case ErrorKind::NoConvergence:
    case ErrorKind::NonPositiveResult:
    case ErrorKind::OutOfSweepRange:
      return kExitUndefined;
    case ErrorKind::BudgetExceeded:
      return kExitBudget;
    default:
      return kExitInput;
  }
}

std::string num(double v) { return fmt::format("{:.6g}", v); }

std::uint64_t parse_seed(std::string_view text, std::string_view source) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::InvalidConfig, fmt::format("{} is not an unsigned integer: '{}'", source, text));
  }
  return value;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CKPT_SEED"); env != nullptr && *env != '\0') {
    return parse_seed(env, "CKPT_SEED");
  }
  return kDefaultSeed;
}

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, fmt::format("cannot read config {}", path.string()));
  std::map<std::string, std::string> values;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw ParseError(lineno, "empty key");
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

// Splices config-file values in front of the command-line flags so that
// explicit flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<fs::path> config;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config || rest.size() < 2) return rest;
  const auto given = [&](const std::string& key) {
    return std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
      return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
    });
  };
  std::vector<std::string> out{rest[0], rest[1]};
  for (const auto& [key, value] : read_config_file(*config)) {
    if (!given(key)) out.push_back("--" + key + "=" + value);
  }
  out.insert(out.end(), rest.begin() + 2, rest.end());
  return out;
}

struct ModelFlags {
  std::optional<double> lambda;
  std::optional<double> mttf;

  void add_to(CLI::App& app) {
    auto* l = app.add_option("--lambda", lambda, "Failure rate (1/s)");
    auto* m = app.add_option("--mttf", mttf, "Mean time to failure (s)");
    l->excludes(m);
  }

  // No rate given means failure-free.
  ExponentialFailureModel resolve(bool required) const {
    if (mttf) return ExponentialFailureModel::from_mttf(*mttf);
    if (lambda) {
      if (*lambda < 0.0) throw Error(ErrorKind::InvalidConfig, "--lambda must be >= 0");
      return ExponentialFailureModel::from_rate(*lambda);
    }
    if (required) throw Error(ErrorKind::InvalidConfig, "one of --lambda or --mttf is required");
    return ExponentialFailureModel::from_rate(0.0);
  }
};

struct SimFlags {
  ModelFlags model;
  int n = 1;
  int r = 1;
  double ts = 0.0;
  std::int64_t work = 9600;
  double quantum = 1.0;
  double heartbeat = 60.0;
  std::string mode = "model";
  double speed_spread = 0.0;
  double budget_factor = 1e4;

  void add_to(CLI::App& app) {
    model.add_to(app);
    app.add_option("--n", n, "Processes")->capture_default_str();
    app.add_option("--r", r, "Replicas per process")->capture_default_str();
    app.add_option("--ts", ts, "Checkpoint save time (s)")->capture_default_str();
    app.add_option("--work", work, "Work units per process")->capture_default_str();
    app.add_option("--quantum", quantum, "Seconds per work unit")->capture_default_str();
    app.add_option("--heartbeat", heartbeat, "Failure detection delay (s)")->capture_default_str();
    app.add_option("--mode", mode, "model | volpex")->capture_default_str();
    app.add_option("--speed-spread", speed_spread, "Client speed spread s, speeds in [1-s, 1+s]")
        ->capture_default_str();
    app.add_option("--budget-factor", budget_factor, "Time cap as a multiple of failure-free time")
        ->capture_default_str();
  }

  SimConfig resolve() const {
    SimConfig c;
    c.spec = {n, r};
    c.ts = ts;
    c.failure_model = model.resolve(false);
    c.total_work = work;
    c.quantum_time = quantum;
    c.heartbeat_timeout = heartbeat;
    const auto m = parse_sim_mode(mode);
    if (!m) throw Error(ErrorKind::InvalidConfig, fmt::format("unknown --mode '{}'", mode));
    c.mode = *m;
    c.speed_spread = speed_spread;
    c.budget_factor = budget_factor;
    return c;
  }

  void describe(std::map<std::string, std::string>& p, const SimConfig& c) const {
    p["n"] = std::to_string(c.spec.n);
    p["r"] = std::to_string(c.spec.r);
    p["lambda"] = fmt::format("{}", c.failure_model.rate());
    p["ts"] = fmt::format("{}", c.ts);
    p["work"] = std::to_string(c.total_work);
    p["quantum"] = fmt::format("{}", c.quantum_time);
    p["heartbeat"] = fmt::format("{}", c.heartbeat_timeout);
    p["mode"] = std::string(to_string(c.mode));
    p["speed-spread"] = fmt::format("{}", c.speed_spread);
    p["budget-factor"] = fmt::format("{}", c.budget_factor);
  }
};

std::vector<double> parse_interval_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& field : csv::split_row(text)) out.push_back(csv::parse_double(field, 1, "--intervals"));
  if (out.empty()) throw Error(ErrorKind::InvalidConfig, "--intervals is empty");
  for (double tc : out) {
    if (!(tc > 0.0)) throw Error(ErrorKind::InvalidConfig, "--intervals must be positive");
  }
  std::sort(out.begin(), out.end());
  return out;
}

SweepReport read_summary(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, fmt::format("cannot read {}", path.string()));
  SweepReport report;
  for (const auto& row : csv::read_table(in, {"tc_s", "min", "q25", "median", "q75", "max"})) {
    IntervalStats s;
    s.tc = csv::parse_double(row.fields[0], row.line, "tc_s");
    s.min = csv::parse_double(row.fields[1], row.line, "min");
    s.q25 = csv::parse_double(row.fields[2], row.line, "q25");
    s.median = csv::parse_double(row.fields[3], row.line, "median");
    s.q75 = csv::parse_double(row.fields[4], row.line, "q75");
    s.max = csv::parse_double(row.fields[5], row.line, "max");
    report.intervals.push_back(s);
  }
  if (report.intervals.empty()) throw Error(ErrorKind::EmptyLog, "summary has no rows");
  std::sort(report.intervals.begin(), report.intervals.end(),
            [](const auto& a, const auto& b) { return a.tc < b.tc; });
  return report;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidConfig, fmt::format("cannot write {}", path.string()));
  return out;
}

fs::path manifest_path_for(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Checkpoint interval planning for replicated volunteer computing jobs", "ckptplan"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CKPT_VERSION));
  // Handled before parsing; registered so it shows up in --help.
  std::string config_help;
  app.add_option("--config", config_help, "key=value file; flags on the command line win");

  // estimate-mttf
  auto* mttf_cmd = app.add_subcommand("estimate-mttf", "Pooled MTTF from a failure log");
  std::string log_path;
  mttf_cmd->add_option("log", log_path, "CSV: node_id,operation_hours,failures")->required();

  // estimate-ts
  auto* ts_cmd = app.add_subcommand("estimate-ts", "Mean checkpoint save time under n*r contention");
  std::string samples_path;
  int ts_n = 1;
  int ts_r = 1;
  std::uint64_t ts_iterations = kDefaultTsIterations;
  std::optional<std::uint64_t> ts_seed;
  ts_cmd->add_option("samples", samples_path, "CSV: save_time_seconds")->required();
  ts_cmd->add_option("--n", ts_n, "Processes")->capture_default_str();
  ts_cmd->add_option("--r", ts_r, "Replicas per process")->capture_default_str();
  ts_cmd->add_option("--iterations", ts_iterations, "Resampling rounds")->capture_default_str();
  ts_cmd->add_option("--seed", ts_seed, "RNG seed (default: CKPT_SEED, else 1)");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Optimal checkpoint interval");
  ModelFlags predict_model;
  predict_model.add_to(*predict_cmd);
  double predict_ts = 0.0;
  int predict_n = 1;
  int predict_r = 1;
  std::string method_name = "general_root";
  predict_cmd->add_option("--ts", predict_ts, "Checkpoint save time (s)")->required();
  predict_cmd->add_option("--n", predict_n, "Processes")->capture_default_str();
  predict_cmd->add_option("--r", predict_r, "Replicas per process")->capture_default_str();
  predict_cmd->add_option("--method", method_name,
                          "general_root | closed_form_r1 | closed_form_single | first_order | "
                          "young | daly")
      ->capture_default_str();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "One simulated execution");
  SimFlags sim_flags;
  sim_flags.add_to(*sim_cmd);
  double sim_tc = 0.0;
  std::optional<std::uint64_t> sim_seed;
  std::string trace_path;
  sim_cmd->add_option("--tc", sim_tc, "Checkpoint interval (s)")->required();
  sim_cmd->add_option("--seed", sim_seed, "RNG seed (default: CKPT_SEED, else 1)");
  sim_cmd->add_option("--trace", trace_path, "Write the event trace CSV here");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Completion times over a grid of intervals");
  SimFlags sweep_flags;
  sweep_flags.add_to(*sweep_cmd);
  std::string intervals_text;
  int runs = 100;
  std::optional<std::uint64_t> seed_base;
  std::string out_prefix;
  std::optional<double> predicted;
  std::string basis_name = "median";
  std::string from_summary;
  sweep_cmd->add_option("--intervals", intervals_text, "Comma-separated intervals (s); default 12..3200");
  sweep_cmd->add_option("--runs", runs, "Runs per interval")->capture_default_str();
  sweep_cmd->add_option("--seed-base", seed_base, "Base seed (default: CKPT_SEED, else 1)");
  sweep_cmd->add_option("--out", out_prefix, "Prefix for <prefix>_raw.csv, _summary.csv, _comparison.csv");
  sweep_cmd->add_option("--predicted", predicted, "Interval to evaluate instead of the model's optimum");
  sweep_cmd->add_option("--basis", basis_name, "median | min")->capture_default_str();
  sweep_cmd->add_option("--from-summary", from_summary,
                        "Compare an existing summary CSV instead of simulating");

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const Error& e) {
    std::cerr << "ckptplan: " << e.what() << '\n';
    return kExitInput;
  }
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*mttf_cmd) {
      const auto records = read_failure_log(fs::path(log_path));
      const double mttf = estimate_mttf(records);
      std::cout << "mttf_s=" << num(mttf) << " lambda=" << num(1.0 / mttf) << '\n';
      return kExitOk;
    }

    if (*ts_cmd) {
      const auto samples = read_cost_samples(fs::path(samples_path));
      const std::uint64_t seed = resolve_seed(ts_seed);
      const double ts = estimate_ts(samples, ts_n, ts_r, ts_iterations, seed);
      std::cout << "ts_s=" << num(ts) << '\n';
      return kExitOk;
    }

    if (*predict_cmd) {
      const auto method = parse_method(method_name);
      if (!method) throw Error(ErrorKind::InvalidConfig, fmt::format("unknown --method '{}'", method_name));
      const auto model = predict_model.resolve(true);
      const auto result = predict(*method, model, predict_ts, {predict_n, predict_r});
      std::cout << "tc_opt_s=" << num(result.tc_opt) << " method=" << to_string(result.method)
                << " residual=" << num(result.residual) << '\n';
      return kExitOk;
    }

    if (*sim_cmd) {
      SimConfig config = sim_flags.resolve();
      config.tc = sim_tc;
      config.record_trace = !trace_path.empty();
      const std::uint64_t seed = resolve_seed(sim_seed);
      const SimResult res = ckpt::run(config, seed);
      std::cout << "completion_s=" << num(res.completion_time)
                << " checkpoints_saved=" << res.checkpoints_saved << " failures=" << res.failures
                << " work_lost=" << res.work_lost << " requests_ignored=" << res.requests_ignored
                << '\n';
      if (!trace_path.empty()) {
        {
          auto out = open_output(trace_path);
          write_trace_csv(out, res.trace);
        }
        RunManifest manifest{"simulate", {}, {}, {trace_path}, seed};
        sim_flags.describe(manifest.parameters, config);
        manifest.parameters["tc"] = fmt::format("{}", config.tc);
        write_manifest(manifest, manifest_path_for(trace_path));
      }
      return kExitOk;
    }

    if (*sweep_cmd) {
      const CompletionBasis basis = [&] {
        if (basis_name == "median") return CompletionBasis::median;
        if (basis_name == "min") return CompletionBasis::min;
        throw Error(ErrorKind::InvalidConfig, fmt::format("unknown --basis '{}'", basis_name));
      }();
      RunManifest manifest{"sweep", {}, {}, {}, std::nullopt};
      SweepReport report;
      const SimConfig base = sweep_flags.resolve();
      if (!from_summary.empty()) {
        report = read_summary(from_summary);
        report.base = base;
        manifest.inputs.push_back(from_summary);
      } else {
        if (runs < 1) throw Error(ErrorKind::InvalidConfig, "--runs must be >= 1");
        const auto grid = intervals_text.empty() ? default_interval_grid() : parse_interval_list(intervals_text);
        const std::uint64_t seed = resolve_seed(seed_base);
        manifest.seed = seed;
        report = run_sweep(base, grid, runs, seed);
      }
      double tc_predicted = 0.0;
      if (predicted) {
        tc_predicted = *predicted;
      } else {
        if (base.failure_model.rate() == 0.0) {
          throw Error(ErrorKind::InvalidConfig,
                      "no failures: the optimum is unbounded, pass --predicted");
        }
        tc_predicted = predict(Method::general_root, base.failure_model, base.ts, base.spec).tc_opt;
      }

      if (!out_prefix.empty()) {
        const fs::path raw = out_prefix + "_raw.csv";
        const fs::path summary = out_prefix + "_summary.csv";
        if (from_summary.empty()) {
          auto out = open_output(raw);
          write_raw_csv(out, report);
          manifest.outputs.push_back(raw);
        }
        {
          auto out = open_output(summary);
          write_summary_csv(out, report);
        }
        manifest.outputs.push_back(summary);
      }

      const ComparisonMetrics m = compare(report, tc_predicted, basis);
      std::cout << "tc_predicted_s=" << num(m.tc_predicted) << " t_predict_s=" << num(m.t_predict)
                << " tc_best_s=" << num(m.tc_best) << " t_best_s=" << num(m.t_best)
                << " tc_worst_s=" << num(m.tc_worst) << " t_worst_s=" << num(m.t_worst)
                << fmt::format(" pct_best_vs_predict={:.2f} pct_best_vs_worst={:.2f}",
                               m.pct_best_vs_predict, m.pct_best_vs_worst)
                << '\n';

      if (!out_prefix.empty()) {
        const fs::path comparison = out_prefix + "_comparison.csv";
        {
          auto out = open_output(comparison);
          write_comparison_csv(out, report, m);
        }
        manifest.outputs.push_back(comparison);
        sweep_flags.describe(manifest.parameters, base);
        manifest.parameters["intervals"] = intervals_text.empty() ? "default" : intervals_text;
        manifest.parameters["runs"] = std::to_string(runs);
        manifest.parameters["predicted"] = fmt::format("{}", tc_predicted);
        manifest.parameters["basis"] = basis_name;
        write_manifest(manifest, fs::path(out_prefix + "_manifest.json"));
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "ckptplan: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "ckptplan: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace ckpt::cli

int main(int argc, char** argv) { return ckpt::cli::run(argc, argv); }
