// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmtsel.h"

namespace {

[[noreturn]] void die(rmtsel_status status) {
  std::fprintf(stderr, "error: %s (%s)\n", rmtsel_last_error(),
               rmtsel_status_name(status));
  std::exit(1);
}

void check(rmtsel_status status) {
  if (status != RMTSEL_OK) die(status);
}

struct ScenarioOpts {
  std::string scenario = "mimo-d2";
  int n = -1, m = -1, k = -1;
  double d = -1.0, decay_rho = -1.0, sigma2 = -1.0, radius = -1.0;
  std::uint64_t placement_seed = 12345;
  double snr_db = 20.0;
};

void add_scenario_flags(CLI::App* cmd, ScenarioOpts& o) {
  cmd->add_option("--scenario", o.scenario,
                  "Scenario preset: mimo, mimo-d1, mimo-d2, mimo-d4, wsn")
      ->capture_default_str();
  cmd->add_option("--n", o.n, "Candidate measurement count");
  cmd->add_option("--m", o.m, "Number of unknowns");
  cmd->add_option("--k", o.k, "Selection budget");
  cmd->add_option("--d", o.d, "Antenna spacing (mimo)");
  cmd->add_option("--decay-rho", o.decay_rho, "Field decay rate (wsn)");
  cmd->add_option("--sigma2", o.sigma2, "Field variance (wsn)");
  cmd->add_option("--radius", o.radius, "Deployment disk radius (wsn)");
  cmd->add_option("--placement-seed", o.placement_seed, "Sensor placement seed (wsn)");
  cmd->add_option("--snr-db", o.snr_db, "Operating SNR in dB");
}

rmtsel_scenario* build_scenario(const CLI::App* cmd, const ScenarioOpts& o) {
  rmtsel_scenario* sc = rmtsel_scenario_create(o.scenario.c_str());
  if (!sc) die(RMTSEL_ERR_CONFIG);
  if (o.n > 0) check(rmtsel_scenario_set(sc, "n", o.n));
  if (o.m > 0) check(rmtsel_scenario_set(sc, "m", o.m));
  if (o.k > 0) check(rmtsel_scenario_set(sc, "k", o.k));
  if (o.d > 0) check(rmtsel_scenario_set(sc, "d", o.d));
  if (o.decay_rho > 0) check(rmtsel_scenario_set(sc, "decay-rho", o.decay_rho));
  if (o.sigma2 > 0) check(rmtsel_scenario_set(sc, "sigma2", o.sigma2));
  if (o.radius > 0) check(rmtsel_scenario_set(sc, "radius", o.radius));
  if (cmd->count("--placement-seed")) {
    check(rmtsel_scenario_set(sc, "placement-seed",
                              static_cast<double>(o.placement_seed)));
  }
  if (cmd->count("--snr-db")) check(rmtsel_scenario_set(sc, "snr-db", o.snr_db));
  check(rmtsel_scenario_prepare(sc));
  return sc;
}

std::vector<int32_t> selection_to_indices(const rmtsel_selection* sel) {
  const int32_t size = rmtsel_selection_size(sel);
  std::vector<int32_t> idx(static_cast<std::size_t>(size));
  check(rmtsel_selection_indices(sel, idx.data(), size));
  return idx;
}

void print_indices(const std::vector<int32_t>& idx) {
  std::printf("selection:");
  for (const int32_t i : idx) std::printf(" %d", i);
  std::printf("\n");
}

std::string read_file_or_die(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot read config file %s\n", path.c_str());
    std::exit(1);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Experiment/bench flags assemble `key = value` lines; later lines
// override earlier ones, so defaults come first, then the config file,
// then explicit command-line flags.
struct RunOpts {
  ScenarioOpts scenario;
  std::string config_path;
  std::string metric = "mse";
  std::string algo = "greedy-blind,random";
  int realizations = 100;
  std::string sweep;
  int sweeps = 2;
  std::uint64_t seed = 1;
  int threads = 0;
  bool db = false;
  std::string out;
  double bench_n = 1.0;
};

void add_run_flags(CLI::App* cmd, RunOpts& o, bool bench) {
  add_scenario_flags(cmd, o.scenario);
  cmd->add_option("--config", o.config_path, "Config file (key = value lines)");
  cmd->add_option("--metric", o.metric, "Metric: mse, lce, wev")
      ->capture_default_str();
  cmd->add_option("--algo", o.algo,
                  "Comma-separated algorithms: greedy-blind, greedy-aware, "
                  "convex-blind, convex-aware, random, exhaustive")
      ->capture_default_str();
  cmd->add_option("--realizations", o.realizations, "Channel realizations per point")
      ->capture_default_str();
  cmd->add_option("--sweep", o.sweep, "Parameter sweep, e.g. k:40,50,60");
  cmd->add_option("--sweeps", o.sweeps, "Greedy sweep count")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", o.threads,
                  "Worker threads (0: RMT_SELECT_THREADS env or hardware)");
  cmd->add_flag("--db", o.db, "Report WEV in dB");
  cmd->add_option("--out", o.out, "Output CSV path");
  if (bench) {
    cmd->add_option("--bench-n", o.bench_n,
                    "Extrapolation multiplier for per-run times")
        ->capture_default_str();
  }
}

std::string assemble_config(const CLI::App* cmd, const RunOpts& o,
                            const std::string& default_out) {
  std::ostringstream text;
  text << "out = " << default_out << "\n";
  if (!o.config_path.empty()) {
    text << read_file_or_die(o.config_path) << "\n";
  }
  const auto add = [&](const char* flag, const auto& value) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt && opt->count() > 0) {
      text << (flag + 2) << " = " << value << "\n";
    }
  };
  add("--scenario", o.scenario.scenario);
  add("--metric", o.metric);
  add("--algo", o.algo);
  add("--realizations", o.realizations);
  add("--n", o.scenario.n);
  add("--m", o.scenario.m);
  add("--k", o.scenario.k);
  add("--d", o.scenario.d);
  add("--decay-rho", o.scenario.decay_rho);
  add("--sigma2", o.scenario.sigma2);
  add("--radius", o.scenario.radius);
  add("--placement-seed", o.scenario.placement_seed);
  add("--snr-db", o.scenario.snr_db);
  add("--sweep", o.sweep);
  add("--sweeps", o.sweeps);
  add("--seed", o.seed);
  add("--threads", o.threads);
  if (cmd->count("--db")) text << "db = 1\n";
  add("--out", o.out);
  add("--bench-n", o.bench_n);
  return text.str();
}

int run_experiment_like(const CLI::App* cmd, const RunOpts& o, bool bench) {
  const std::string text =
      assemble_config(cmd, o, bench ? "bench.csv" : "experiment.csv");
  rmtsel_run_summary summary{0, 0};
  const rmtsel_status st =
      bench ? rmtsel_bench_run(text.c_str(), nullptr, &summary)
            : rmtsel_experiment_run(text.c_str(), nullptr, &summary);
  if (st != RMTSEL_OK) die(st);
  std::printf("%s: %lld rows, %lld failures\n", bench ? "bench" : "experiment",
              static_cast<long long>(summary.rows),
              static_cast<long long>(summary.failures));
  return summary.failures > 0 ? 2 : 0;
}

int cmd_detequiv(const CLI::App* cmd, const ScenarioOpts& so,
                 const std::string& metric, const std::string& selection_csv,
                 std::uint64_t seed) {
  rmtsel_scenario* sc = build_scenario(cmd, so);
  int32_t n = 0, m = 0, k = 0;
  check(rmtsel_scenario_dims(sc, &n, &m, &k));
  std::printf("scenario %s: n=%d m=%d k=%d\n", so.scenario.c_str(), n, m, k);

  rmtsel_selection* sel = nullptr;
  if (!selection_csv.empty()) {
    std::vector<int32_t> idx;
    std::stringstream ss(selection_csv);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        idx.push_back(std::stoi(part));
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: bad selection index '%s'\n", part.c_str());
        std::exit(1);
      }
    }
    sel = rmtsel_selection_create(idx.data(), static_cast<int32_t>(idx.size()), n);
    if (!sel) die(RMTSEL_ERR_INVALID_ARGUMENT);
  } else {
    check(rmtsel_random_selection(sc, seed, &sel));
    std::printf("random selection seed: %llu\n",
                static_cast<unsigned long long>(seed));
  }
  print_indices(selection_to_indices(sel));

  const std::vector<std::string> metrics =
      metric == "all" ? std::vector<std::string>{"mse", "lce", "wev"}
                      : std::vector<std::string>{metric};
  for (const std::string& name : metrics) {
    rmtsel_detequiv_result res;
    check(rmtsel_detequiv_eval(sc, sel, name.c_str(), &res));
    std::printf("%s: value=%.12g %s=%.12g iterations=%d residual=%.3g\n",
                name.c_str(), res.value, name == "wev" ? "eta" : "delta",
                res.scalar, res.iterations, res.residual);
  }
  rmtsel_selection_destroy(sel);
  rmtsel_scenario_destroy(sc);
  return 0;
}

int cmd_select(const CLI::App* cmd, const ScenarioOpts& so, const std::string& algo,
               const std::string& metric, int sweeps, std::uint64_t seed,
               std::uint64_t channel_seed) {
  rmtsel_scenario* sc = build_scenario(cmd, so);
  rmtsel_selection* sel = nullptr;
  rmtsel_select_result info;
  check(rmtsel_select(sc, algo.c_str(), metric.c_str(), sweeps, seed, channel_seed,
                      &sel, &info));
  std::printf("algorithm %s on %s (metric %s)\n", algo.c_str(), so.scenario.c_str(),
              metric.c_str());
  std::printf("objective: %.12g\n", info.objective);
  if (info.relaxed_objective == info.relaxed_objective) {
    std::printf("relaxed objective: %.12g\n", info.relaxed_objective);
  }
  std::printf("evaluations: %lld  sweeps: %d  converged: %s\n",
              static_cast<long long>(info.evals), info.sweeps,
              info.converged ? "yes" : "no");
  print_indices(selection_to_indices(sel));
  rmtsel_selection_destroy(sel);
  rmtsel_scenario_destroy(sc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement selection via random-matrix deterministic equivalents"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rmtsel_version());

  ScenarioOpts de_scenario;
  std::string de_metric = "all";
  std::string de_selection;
  std::uint64_t de_seed = 1;
  CLI::App* de = app.add_subcommand(
      "detequiv", "Evaluate deterministic equivalents at a selection");
  add_scenario_flags(de, de_scenario);
  de->add_option("--metric", de_metric, "Metric: mse, lce, wev or all")
      ->capture_default_str();
  de->add_option("--selection", de_selection,
                 "Explicit 0-based selection indices, comma separated");
  de->add_option("--seed", de_seed, "Seed for the random selection")
      ->capture_default_str();

  ScenarioOpts sel_scenario;
  std::string sel_algo = "greedy-blind";
  std::string sel_metric = "mse";
  int sel_sweeps = 2;
  std::uint64_t sel_seed = 1;
  std::uint64_t sel_channel_seed = 1;
  CLI::App* se = app.add_subcommand("select", "Run one selection algorithm");
  add_scenario_flags(se, sel_scenario);
  se->add_option("--algo", sel_algo, "Algorithm")->capture_default_str();
  se->add_option("--metric", sel_metric, "Metric: mse, lce, wev")
      ->capture_default_str();
  se->add_option("--sweeps", sel_sweeps, "Greedy sweep count")
      ->capture_default_str();
  se->add_option("--seed", sel_seed, "Selector seed")->capture_default_str();
  se->add_option("--channel-seed", sel_channel_seed,
                 "Channel seed for channel-aware algorithms")
      ->capture_default_str();

  RunOpts exp_opts;
  CLI::App* ex = app.add_subcommand(
      "experiment", "Run algorithms over sweeps and realizations, write CSV");
  add_run_flags(ex, exp_opts, false);

  RunOpts bench_opts;
  CLI::App* be =
      app.add_subcommand("bench", "Time algorithms and report extrapolated cost");
  add_run_flags(be, bench_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  if (de->parsed()) {
    return cmd_detequiv(de, de_scenario, de_metric, de_selection, de_seed);
  }
  if (se->parsed()) {
    return cmd_select(se, sel_scenario, sel_algo, sel_metric, sel_sweeps, sel_seed,
                      sel_channel_seed);
  }
  if (ex->parsed()) {
    return run_experiment_like(ex, exp_opts, false);
  }
  if (be->parsed()) {
    return run_experiment_like(be, bench_opts, true);
  }
  return 1;
}
