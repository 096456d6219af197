// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include "rmtsel/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "rmtsel/channel.hpp"
#include "rmtsel/selectors.hpp"

namespace rmtsel {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw Error(ErrorCode::kConfig, "bad numeric value for '" + key + "': " + value);
  }
  return x;
}

long long parse_int(const std::string& key, const std::string& value) {
  const double x = parse_double(key, value);
  if (x != std::floor(x) || std::abs(x) > 9e15) {
    throw Error(ErrorCode::kConfig, "expected integer for '" + key + "': " + value);
  }
  return static_cast<long long>(x);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error(ErrorCode::kConfig, "bad unsigned value for '" + key + "': " + value);
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::kConfig, "bad boolean value for '" + key + "': " + value);
}

ErrorMetric metric_from_name(const std::string& name) {
  if (name == "mse") return ErrorMetric::kMse;
  if (name == "lce") return ErrorMetric::kLce;
  if (name == "wev") return ErrorMetric::kWev;
  throw Error(ErrorCode::kConfig, "unknown metric: " + name);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* algorithm_name(AlgorithmId id) noexcept {
  switch (id) {
    case AlgorithmId::kGreedyBlind: return "greedy-blind";
    case AlgorithmId::kGreedyAware: return "greedy-aware";
    case AlgorithmId::kConvexBlind: return "convex-blind";
    case AlgorithmId::kConvexAware: return "convex-aware";
    case AlgorithmId::kRandom: return "random";
    case AlgorithmId::kExhaustive: return "exhaustive";
  }
  return "unknown";
}

AlgorithmId algorithm_from_name(const std::string& name) {
  if (name == "greedy-blind") return AlgorithmId::kGreedyBlind;
  if (name == "greedy-aware") return AlgorithmId::kGreedyAware;
  if (name == "convex-blind") return AlgorithmId::kConvexBlind;
  if (name == "convex-aware") return AlgorithmId::kConvexAware;
  if (name == "random") return AlgorithmId::kRandom;
  if (name == "exhaustive") return AlgorithmId::kExhaustive;
  throw Error(ErrorCode::kConfig, "unknown algorithm: " + name);
}

void apply_config_line(ExperimentConfig& cfg, const std::string& raw_key,
                       const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "scenario") {
    cfg.scenario = value;
  } else if (key == "metric") {
    cfg.metric = metric_from_name(value);
  } else if (key == "algo") {
    cfg.algorithms.clear();
    for (const auto& part : split(value, ',')) {
      cfg.algorithms.push_back(algorithm_from_name(trim(part)));
    }
    if (cfg.algorithms.empty()) {
      throw Error(ErrorCode::kConfig, "algo list is empty");
    }
  } else if (key == "realizations") {
    cfg.realizations = static_cast<int>(parse_int(key, value));
  } else if (key == "n") {
    cfg.n = static_cast<int>(parse_int(key, value));
  } else if (key == "m") {
    cfg.m = static_cast<int>(parse_int(key, value));
  } else if (key == "k") {
    cfg.k = static_cast<int>(parse_int(key, value));
  } else if (key == "d") {
    cfg.d = parse_double(key, value);
  } else if (key == "decay-rho") {
    cfg.decay_rho = parse_double(key, value);
  } else if (key == "sigma2") {
    cfg.sigma2 = parse_double(key, value);
  } else if (key == "radius") {
    cfg.radius = parse_double(key, value);
  } else if (key == "placement-seed") {
    cfg.placement_seed = parse_u64(key, value);
  } else if (key == "sweep") {
    const auto colon = value.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kConfig, "sweep wants 'param:v1,v2,...', got " + value);
    }
    cfg.sweep_param = trim(value.substr(0, colon));
    cfg.sweep_values.clear();
    for (const auto& part : split(value.substr(colon + 1), ',')) {
      cfg.sweep_values.push_back(parse_double("sweep", part));
    }
    if (cfg.sweep_values.empty()) {
      throw Error(ErrorCode::kConfig, "sweep value list is empty");
    }
  } else if (key == "sweeps") {
    cfg.greedy_sweeps = static_cast<int>(parse_int(key, value));
  } else if (key == "seed") {
    cfg.master_seed = parse_u64(key, value);
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_int(key, value));
  } else if (key == "snr-db") {
    cfg.apply_snr = true;
    cfg.snr_db = parse_double(key, value);
  } else if (key == "db") {
    cfg.wev_db = parse_bool(key, value);
  } else if (key == "bench-n") {
    cfg.bench_scale = parse_double(key, value);
  } else if (key == "out") {
    cfg.out_path = value;
  } else {
    throw Error(ErrorCode::kConfig, "unknown config key: " + key);
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  for (const auto& raw_line : split(text, '\n')) {
    std::string line = raw_line;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig, "expected 'key = value', got: " + line);
    }
    apply_config_line(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(mix64(mix64(master) ^ stream) ^ a) ^ b);
}

int resolve_threads(int requested) noexcept {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RMT_SELECT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count) break;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double transform_value(double raw, ErrorMetric metric, bool apply_snr,
                       double snr_db, bool wev_db) {
  double v = raw;
  if (apply_snr) {
    const double rho = std::pow(10.0, snr_db / 10.0);
    switch (metric) {
      case ErrorMetric::kMse:
      case ErrorMetric::kWev:
        v /= rho;
        break;
      case ErrorMetric::kLce:
        v -= std::log(rho);
        break;
    }
  }
  if (wev_db && metric == ErrorMetric::kWev) {
    v = 10.0 * std::log10(v);
  }
  return v;
}

namespace {

struct SweepPoint {
  double value = 0.0;
  std::optional<Scenario> scenario;
};

bool is_mimo(const std::string& name) { return name.rfind("mimo", 0) == 0; }

Scenario build_scenario_at(const ExperimentConfig& cfg, double sweep_value) {
  if (is_mimo(cfg.scenario)) {
    MimoParams p;
    if (cfg.scenario == "mimo-d1") {
      p.d = 1.0;
    } else if (cfg.scenario == "mimo" || cfg.scenario == "mimo-d2") {
      p.d = 2.0;
    } else if (cfg.scenario == "mimo-d4") {
      p.d = 4.0;
    } else {
      throw Error(ErrorCode::kConfig, "unknown scenario: " + cfg.scenario);
    }
    if (cfg.n > 0) p.n = cfg.n;
    if (cfg.m > 0) p.m = cfg.m;
    if (cfg.k > 0) p.k = cfg.k;
    if (cfg.d > 0) p.d = cfg.d;
    if (cfg.apply_snr) p.snr_db = cfg.snr_db;
    if (cfg.sweep_param == "k") {
      p.k = static_cast<int>(std::llround(sweep_value));
    } else if (cfg.sweep_param == "d") {
      p.d = sweep_value;
    }
    return make_mimo(p);
  }
  if (cfg.scenario == "wsn") {
    WsnParams p;
    if (cfg.n > 0) p.n = cfg.n;
    if (cfg.m > 0) p.m = cfg.m;
    if (cfg.k > 0) p.k = cfg.k;
    if (cfg.decay_rho > 0) p.decay_rho = cfg.decay_rho;
    if (cfg.sigma2 > 0) p.sigma2 = cfg.sigma2;
    if (cfg.radius > 0) p.radius = cfg.radius;
    p.placement_seed = cfg.placement_seed;
    if (cfg.apply_snr) p.snr_db = cfg.snr_db;
    if (cfg.sweep_param == "k") {
      p.k = static_cast<int>(std::llround(sweep_value));
    } else if (cfg.sweep_param == "decay-rho") {
      p.decay_rho = sweep_value;
    }
    return make_wsn(p);
  }
  throw Error(ErrorCode::kConfig, "unknown scenario: " + cfg.scenario);
}

void validate_run_config(const ExperimentConfig& cfg) {
  if (cfg.realizations < 1) {
    throw Error(ErrorCode::kConfig, "realizations must be at least 1");
  }
  if (cfg.algorithms.empty()) {
    throw Error(ErrorCode::kConfig, "no algorithms configured");
  }
  if (cfg.greedy_sweeps < 1) {
    throw Error(ErrorCode::kConfig, "sweeps must be at least 1");
  }
  if (cfg.sweep_param != "k" && cfg.sweep_param != "d" &&
      cfg.sweep_param != "decay-rho") {
    throw Error(ErrorCode::kConfig, "sweep parameter must be k, d or decay-rho");
  }
  if (cfg.sweep_param == "d" && !is_mimo(cfg.scenario)) {
    throw Error(ErrorCode::kConfig, "sweeping d requires a mimo scenario");
  }
  if (cfg.sweep_param == "decay-rho" && cfg.scenario != "wsn") {
    throw Error(ErrorCode::kConfig, "sweeping decay-rho requires the wsn scenario");
  }
}

std::vector<double> effective_sweep_values(const ExperimentConfig& cfg) {
  if (!cfg.sweep_values.empty()) return cfg.sweep_values;
  if (cfg.sweep_param == "k") {
    return {static_cast<double>(cfg.k > 0 ? cfg.k : 50)};
  }
  if (cfg.sweep_param == "d") {
    if (cfg.d > 0) return {cfg.d};
    if (cfg.scenario == "mimo-d1") return {1.0};
    if (cfg.scenario == "mimo-d4") return {4.0};
    return {2.0};
  }
  return {cfg.decay_rho > 0 ? cfg.decay_rho : WsnParams{}.decay_rho};
}

std::vector<SweepPoint> build_sweep_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> points;
  for (const double value : effective_sweep_values(cfg)) {
    SweepPoint point;
    point.value = value;
    try {
      point.scenario = build_scenario_at(cfg, value);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfig) throw;  // misconfiguration, not a run failure
      point.scenario.reset();
    }
    points.push_back(std::move(point));
  }
  return points;
}

bool is_blind_algorithm(AlgorithmId id) {
  return id == AlgorithmId::kGreedyBlind || id == AlgorithmId::kConvexBlind ||
         id == AlgorithmId::kExhaustive;
}

bool is_per_channel(AlgorithmId id) {
  return id == AlgorithmId::kGreedyAware || id == AlgorithmId::kConvexAware ||
         id == AlgorithmId::kRandom;
}

struct PreparedSelection {
  std::optional<SelectionVector> selection;
  long long evals = 0;
  std::uint64_t seed = 0;
  bool failed = false;
};

long long sweep_phase_evals(const SelectionResult& res) {
  long long total = 0;
  for (const long long e : res.sweep_evals) total += e;
  return total;
}

PreparedSelection prepare_blind(const ExperimentConfig& cfg, const SweepPoint& point,
                                AlgorithmId algo, std::size_t sweep_index) {
  PreparedSelection out;
  if (!point.scenario) {
    out.failed = true;
    return out;
  }
  const Scenario& sc = *point.scenario;
  try {
    switch (algo) {
      case AlgorithmId::kGreedyBlind: {
        BlindOracle oracle(sc.r, sc.dims.m, cfg.metric);
        out.seed = derive_seed(cfg.master_seed, kStreamBlindInit, sweep_index, 0);
        SelectionResult res =
            greedy_select(oracle, sc.dims, cfg.greedy_sweeps, out.seed);
        out.selection = res.selection;
        out.evals = sweep_phase_evals(res);
        break;
      }
      case AlgorithmId::kConvexBlind: {
        SelectionResult res = convex_relax_select(sc.r, sc.dims, cfg.metric);
        out.selection = res.selection;
        out.evals = res.evals;
        break;
      }
      case AlgorithmId::kExhaustive: {
        BlindOracle oracle(sc.r, sc.dims.m, cfg.metric);
        SelectionResult res = exhaustive_select(oracle, sc.dims);
        out.selection = res.selection;
        out.evals = res.evals;
        break;
      }
      default:
        out.failed = true;
    }
  } catch (const Error&) {
    out.failed = true;
    out.selection.reset();
  }
  return out;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  validate_run_config(cfg);
  const std::vector<SweepPoint> points = build_sweep_points(cfg);
  const int threads = resolve_threads(cfg.threads);
  const std::size_t n_algos = cfg.algorithms.size();
  const std::size_t n_real = static_cast<std::size_t>(cfg.realizations);

  // Phase 1: channel-independent selections, one per (sweep, algorithm).
  std::vector<PreparedSelection> prepared(points.size() * n_algos);
  {
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t si = 0; si < points.size(); ++si) {
      for (std::size_t ai = 0; ai < n_algos; ++ai) {
        if (is_blind_algorithm(cfg.algorithms[ai])) jobs.emplace_back(si, ai);
      }
    }
    parallel_for(static_cast<int>(jobs.size()), threads, [&](int j) {
      const auto [si, ai] = jobs[static_cast<std::size_t>(j)];
      prepared[si * n_algos + ai] =
          prepare_blind(cfg, points[si], cfg.algorithms[ai], si);
    });
  }

  // Phase 2: one record per (sweep, algorithm, realization).
  std::vector<RunRecord> records(points.size() * n_algos * n_real);
  const int total = static_cast<int>(records.size());
  parallel_for(total, threads, [&](int slot) {
    const std::size_t si = static_cast<std::size_t>(slot) / (n_algos * n_real);
    const std::size_t ai = (static_cast<std::size_t>(slot) / n_real) % n_algos;
    const std::size_t ri = static_cast<std::size_t>(slot) % n_real;
    const AlgorithmId algo = cfg.algorithms[ai];
    const SweepPoint& point = points[si];

    RunRecord rec;
    rec.scenario = cfg.scenario;
    rec.algorithm = algorithm_name(algo);
    rec.metric = metric_name(cfg.metric);
    rec.sweep_param = cfg.sweep_param;
    rec.sweep_value = point.value;
    rec.realization = static_cast<int>(ri);
    rec.seed = derive_seed(cfg.master_seed, kStreamChannel, si, ri);
    rec.wall_seconds = 0.0;

    if (point.scenario) {
      const Scenario& sc = *point.scenario;
      try {
        const ChannelSample ch = sample_channel(sc.r, sc.dims.m, rec.seed);
        std::optional<SelectionVector> sel;
        long long evals = 0;
        if (is_blind_algorithm(algo)) {
          const PreparedSelection& prep = prepared[si * n_algos + ai];
          if (!prep.failed && prep.selection) {
            sel = prep.selection;
            evals = prep.evals;
          }
        } else if (algo == AlgorithmId::kGreedyAware) {
          AwareOracle oracle(ch, cfg.metric);
          SelectionResult res = greedy_select(
              oracle, sc.dims, cfg.greedy_sweeps,
              derive_seed(cfg.master_seed, kStreamAwareInit, si, ri));
          sel = res.selection;
          evals = sweep_phase_evals(res);
        } else if (algo == AlgorithmId::kConvexAware) {
          SelectionResult res = convex_relax_select(ch, sc.dims, cfg.metric);
          sel = res.selection;
          evals = res.evals;
        } else if (algo == AlgorithmId::kRandom) {
          sel = random_select(sc.dims,
                              derive_seed(cfg.master_seed, kStreamRandomSel, si, ri));
          evals = 0;
        }
        if (sel) {
          rec.oracle_evals = evals;
          const double raw = exact_measure(ch, *sel, cfg.metric);
          rec.value = transform_value(raw, cfg.metric, cfg.apply_snr, cfg.snr_db,
                                      cfg.wev_db);
        }
      } catch (const Error&) {
        rec.value = std::numeric_limits<double>::quiet_NaN();
      }
    }
    records[static_cast<std::size_t>(slot)] = std::move(rec);
  });
  return records;
}

std::vector<RunRecord> bench_runtime(const ExperimentConfig& cfg) {
  validate_run_config(cfg);
  const std::vector<SweepPoint> points = build_sweep_points(cfg);
  std::vector<RunRecord> records;
  records.reserve(points.size() * cfg.algorithms.size());

  for (std::size_t si = 0; si < points.size(); ++si) {
    for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
      const AlgorithmId algo = cfg.algorithms[ai];
      const SweepPoint& point = points[si];
      RunRecord rec;
      rec.scenario = cfg.scenario;
      rec.algorithm = algorithm_name(algo);
      rec.metric = metric_name(cfg.metric);
      rec.sweep_param = cfg.sweep_param;
      rec.sweep_value = point.value;
      rec.realization = is_per_channel(algo) ? cfg.realizations : 1;

      if (!point.scenario) {
        records.push_back(std::move(rec));
        continue;
      }
      const Scenario& sc = *point.scenario;
      const long long full_sweep =
          static_cast<long long>(sc.dims.k) * (sc.dims.n - sc.dims.k);
      try {
        long long evals = 0;
        const auto t0 = std::chrono::steady_clock::now();
        switch (algo) {
          case AlgorithmId::kGreedyBlind: {
            BlindOracle oracle(sc.r, sc.dims.m, cfg.metric);
            rec.seed = derive_seed(cfg.master_seed, kStreamBlindInit, si, 0);
            SelectionResult res =
                greedy_select(oracle, sc.dims, cfg.greedy_sweeps, rec.seed);
            for (const long long e : res.sweep_evals) {
              if (e != full_sweep) {
                throw Error(ErrorCode::kNonConvergence,
                            "greedy sweep evaluation count mismatch");
              }
            }
            evals = sweep_phase_evals(res);
            break;
          }
          case AlgorithmId::kConvexBlind: {
            SelectionResult res = convex_relax_select(sc.r, sc.dims, cfg.metric);
            evals = res.evals;
            break;
          }
          case AlgorithmId::kExhaustive: {
            BlindOracle oracle(sc.r, sc.dims.m, cfg.metric);
            SelectionResult res = exhaustive_select(oracle, sc.dims);
            evals = res.evals;
            break;
          }
          case AlgorithmId::kGreedyAware: {
            rec.seed = derive_seed(cfg.master_seed, kStreamAwareInit, si, 0);
            for (int r = 0; r < cfg.realizations; ++r) {
              const ChannelSample ch = sample_channel(
                  sc.r, sc.dims.m, derive_seed(cfg.master_seed, kStreamChannel, si,
                                               static_cast<std::uint64_t>(r)));
              AwareOracle oracle(ch, cfg.metric);
              SelectionResult res = greedy_select(
                  oracle, sc.dims, cfg.greedy_sweeps,
                  derive_seed(cfg.master_seed, kStreamAwareInit, si,
                              static_cast<std::uint64_t>(r)));
              for (const long long e : res.sweep_evals) {
                if (e != full_sweep) {
                  throw Error(ErrorCode::kNonConvergence,
                              "greedy sweep evaluation count mismatch");
                }
              }
              evals += sweep_phase_evals(res);
            }
            break;
          }
          case AlgorithmId::kConvexAware: {
            for (int r = 0; r < cfg.realizations; ++r) {
              const ChannelSample ch = sample_channel(
                  sc.r, sc.dims.m, derive_seed(cfg.master_seed, kStreamChannel, si,
                                               static_cast<std::uint64_t>(r)));
              SelectionResult res = convex_relax_select(ch, sc.dims, cfg.metric);
              evals += res.evals;
            }
            break;
          }
          case AlgorithmId::kRandom: {
            rec.seed = derive_seed(cfg.master_seed, kStreamRandomSel, si, 0);
            for (int r = 0; r < cfg.realizations; ++r) {
              random_select(sc.dims, derive_seed(cfg.master_seed, kStreamRandomSel,
                                                 si, static_cast<std::uint64_t>(r)));
            }
            evals = 0;
            break;
          }
        }
        const auto t1 = std::chrono::steady_clock::now();
        const double wall = std::chrono::duration<double>(t1 - t0).count();
        rec.wall_seconds = wall;
        const double per_run =
            is_per_channel(algo) ? wall / cfg.realizations : wall;
        rec.value = per_run * cfg.bench_scale;
        rec.oracle_evals = evals;
      } catch (const Error&) {
        rec.value = std::numeric_limits<double>::quiet_NaN();
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const RunRecord& r : records) {
    out += r.scenario;
    out.push_back(',');
    out += r.algorithm;
    out.push_back(',');
    out += r.metric;
    out.push_back(',');
    out += r.sweep_param;
    out.push_back(',');
    out += format_double(r.sweep_value);
    out.push_back(',');
    out += std::to_string(r.realization);
    out.push_back(',');
    out += format_double(r.value);
    out.push_back(',');
    out += format_double(r.wall_seconds);
    out.push_back(',');
    out += std::to_string(r.oracle_evals);
    out.push_back(',');
    out += std::to_string(r.seed);
    out.push_back('\n');
  }
  return out;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open for writing: " + path);
  }
  out << records_to_csv(records);
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed: " + path);
  }
}

std::vector<RunRecord> parse_csv(const std::string& text) {
  const std::vector<std::string> lines = split(text, '\n');
  if (lines.empty() || trim(lines[0]) != kCsvHeader) {
    throw Error(ErrorCode::kConfig, "CSV header mismatch");
  }
  std::vector<RunRecord> records;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string line = trim(lines[li]);
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 10) {
      throw Error(ErrorCode::kConfig,
                  "CSV row has " + std::to_string(f.size()) + " fields, want 10");
    }
    RunRecord r;
    r.scenario = f[0];
    r.algorithm = f[1];
    r.metric = f[2];
    r.sweep_param = f[3];
    r.sweep_value = parse_double("sweep_value", f[4]);
    r.realization = static_cast<int>(parse_int("realization", f[5]));
    r.value = std::strtod(f[6].c_str(), nullptr);  // accepts nan/inf
    r.wall_seconds = parse_double("wall_seconds", f[7]);
    r.oracle_evals = parse_int("oracle_evals", f[8]);
    r.seed = parse_u64("seed", f[9]);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace rmtsel
