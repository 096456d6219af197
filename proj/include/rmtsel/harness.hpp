// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rmtsel/scenarios.hpp"
#include "rmtsel/types.hpp"

namespace rmtsel {

enum class AlgorithmId {
  kGreedyBlind,
  kGreedyAware,
  kConvexBlind,
  kConvexAware,
  kRandom,
  kExhaustive,
};

const char* algorithm_name(AlgorithmId id) noexcept;
AlgorithmId algorithm_from_name(const std::string& name);

/// Full description of an experiment or bench run. Values <= 0 (or
/// empty strings) fall back to the scenario preset defaults.
struct ExperimentConfig {
  std::string scenario = "mimo-d2";
  ErrorMetric metric = ErrorMetric::kMse;
  std::vector<AlgorithmId> algorithms = {AlgorithmId::kGreedyBlind,
                                         AlgorithmId::kRandom};
  int realizations = 100;
  int n = -1, m = -1, k = -1;
  double d = -1.0;
  double decay_rho = -1.0;
  double sigma2 = -1.0;
  double radius = -1.0;
  std::uint64_t placement_seed = 12345;
  /// Swept parameter ("k", "d" or "decay-rho") with its values; an
  /// empty value list means a single point at the configured geometry.
  std::string sweep_param = "k";
  std::vector<double> sweep_values;
  int greedy_sweeps = 2;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0: RMT_SELECT_THREADS env var, then hardware count
  bool apply_snr = false;
  double snr_db = 20.0;
  bool wev_db = false;
  double bench_scale = 1.0;
  std::string out_path;
};

/// Parses flat `key = value` text ('#' starts a comment). Keys mirror
/// the CLI long flags. Throws Config on unknown keys or bad values.
ExperimentConfig parse_config(const std::string& text);
void apply_config_line(ExperimentConfig& cfg, const std::string& key,
                       const std::string& value);

/// One CSV row. `value` is NaN for failed runs; the harness records the
/// failure and keeps going.
struct RunRecord {
  std::string scenario;
  std::string algorithm;
  std::string metric;
  std::string sweep_param;
  double sweep_value = 0.0;
  int realization = 0;
  double value = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  long long oracle_evals = 0;
  std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader =
    "scenario,algorithm,metric,sweep_param,sweep_value,realization,value,"
    "wall_seconds,oracle_evals,seed";

/// Runs the configured algorithms over every sweep value and channel
/// realization and returns one record per (sweep value, algorithm,
/// realization), in that nesting order. Output is a pure function of
/// the config: channels and selector seeds derive from master_seed
/// alone, wall_seconds is fixed to zero, and the record order does not
/// depend on the thread count.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

/// Times each algorithm once per sweep value (averaging over
/// `realizations` runs for per-channel algorithms) and reports
/// wall-clock seconds. `value` holds the per-run time extrapolated by
/// bench_scale; oracle_evals counts sweep-phase objective evaluations.
std::vector<RunRecord> bench_runtime(const ExperimentConfig& cfg);

std::string records_to_csv(const std::vector<RunRecord>& records);
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> parse_csv(const std::string& text);

/// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic seed for a (stream, a, b) triple under a master seed.
/// Streams keep channel draws, selector initializations and random
/// selections statistically independent while staying reproducible.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t a, std::uint64_t b) noexcept;

inline constexpr std::uint64_t kStreamChannel = 1;
inline constexpr std::uint64_t kStreamBlindInit = 2;
inline constexpr std::uint64_t kStreamAwareInit = 3;
inline constexpr std::uint64_t kStreamRandomSel = 4;

/// requested > 0 wins; otherwise RMT_SELECT_THREADS, otherwise the
/// hardware concurrency (at least 1).
int resolve_threads(int requested) noexcept;

/// Runs fn(0..count-1) on up to `threads` workers. The mapping from
/// index to result slot is the caller's; exceptions propagate after all
/// workers finish.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Metric-scale post-processing: optional SNR scaling (MSE and WEV
/// divide by rho = 10^(snr_db/10), LCE subtracts log rho) followed by
/// optional dB conversion of WEV values.
double transform_value(double raw, ErrorMetric metric, bool apply_snr,
                       double snr_db, bool wev_db);

}  // namespace rmtsel
