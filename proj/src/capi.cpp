// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include "rmtsel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "rmtsel/channel.hpp"
#include "rmtsel/detequiv.hpp"
#include "rmtsel/harness.hpp"
#include "rmtsel/scenarios.hpp"
#include "rmtsel/selectors.hpp"

namespace {

thread_local std::string g_last_error;

rmtsel_status status_from_code(rmtsel::ErrorCode code) {
  return static_cast<rmtsel_status>(static_cast<int>(code));
}

template <typename Fn>
rmtsel_status guarded(Fn&& fn) {
  try {
    fn();
    return RMTSEL_OK;
  } catch (const rmtsel::Error& e) {
    g_last_error = e.what();
    return status_from_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RMTSEL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RMTSEL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return RMTSEL_ERR_INTERNAL;
  }
}

void require(bool cond, const char* message) {
  if (!cond) {
    throw rmtsel::Error(rmtsel::ErrorCode::kInvalidArgument, message);
  }
}

std::string normalized_key(const char* key) {
  std::string k(key ? key : "");
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

rmtsel::ErrorMetric metric_from_string(const char* metric) {
  const std::string m(metric ? metric : "");
  if (m == "mse") return rmtsel::ErrorMetric::kMse;
  if (m == "lce") return rmtsel::ErrorMetric::kLce;
  if (m == "wev") return rmtsel::ErrorMetric::kWev;
  throw rmtsel::Error(rmtsel::ErrorCode::kInvalidArgument,
                      "unknown metric: " + m);
}

}  // namespace

struct rmtsel_scenario {
  bool wsn = false;
  rmtsel::MimoParams mimo;
  rmtsel::WsnParams wsn_params;
  std::optional<rmtsel::Scenario> built;

  const rmtsel::Scenario& prepared() const {
    if (!built) {
      throw rmtsel::Error(rmtsel::ErrorCode::kInvalidArgument,
                          "scenario not prepared");
    }
    return *built;
  }
};

struct rmtsel_selection {
  explicit rmtsel_selection(rmtsel::SelectionVector v) : vec(std::move(v)) {}
  rmtsel::SelectionVector vec;
};

extern "C" {

const char* rmtsel_version(void) { return "0.1.0"; }

const char* rmtsel_status_name(rmtsel_status status) {
  if (status == RMTSEL_OK) return "Ok";
  if (status == RMTSEL_ERR_INTERNAL) return "Internal";
  return rmtsel::error_code_name(static_cast<rmtsel::ErrorCode>(status));
}

const char* rmtsel_last_error(void) { return g_last_error.c_str(); }

rmtsel_scenario* rmtsel_scenario_create(const char* preset) {
  rmtsel_scenario* sc = nullptr;
  const rmtsel_status st = guarded([&] {
    const std::string name(preset ? preset : "");
    auto holder = std::make_unique<rmtsel_scenario>();
    if (name == "mimo" || name == "mimo-d2") {
      holder->mimo.d = 2.0;
    } else if (name == "mimo-d1") {
      holder->mimo.d = 1.0;
    } else if (name == "mimo-d4") {
      holder->mimo.d = 4.0;
    } else if (name == "wsn") {
      holder->wsn = true;
    } else {
      throw rmtsel::Error(rmtsel::ErrorCode::kConfig,
                          "unknown scenario preset: " + name);
    }
    sc = holder.release();
  });
  return st == RMTSEL_OK ? sc : nullptr;
}

rmtsel_status rmtsel_scenario_set(rmtsel_scenario* sc, const char* key,
                                  double value) {
  return guarded([&] {
    require(sc != nullptr, "scenario handle is null");
    const std::string k = normalized_key(key);
    auto as_int = [&](const char* what) {
      if (value != std::floor(value)) {
        throw rmtsel::Error(rmtsel::ErrorCode::kInvalidArgument,
                            std::string(what) + " must be an integer");
      }
      return static_cast<int>(value);
    };
    if (k == "n") {
      sc->mimo.n = sc->wsn_params.n = as_int("n");
    } else if (k == "m") {
      sc->mimo.m = sc->wsn_params.m = as_int("m");
    } else if (k == "k") {
      sc->mimo.k = sc->wsn_params.k = as_int("k");
    } else if (k == "d") {
      sc->mimo.d = value;
    } else if (k == "decay-rho") {
      sc->wsn_params.decay_rho = value;
    } else if (k == "sigma2") {
      sc->wsn_params.sigma2 = value;
    } else if (k == "radius") {
      sc->wsn_params.radius = value;
    } else if (k == "placement-seed") {
      sc->wsn_params.placement_seed = static_cast<std::uint64_t>(value);
    } else if (k == "snr-db") {
      sc->mimo.snr_db = sc->wsn_params.snr_db = value;
    } else {
      throw rmtsel::Error(rmtsel::ErrorCode::kInvalidArgument,
                          "unknown scenario parameter: " + k);
    }
    sc->built.reset();
  });
}

rmtsel_status rmtsel_scenario_prepare(rmtsel_scenario* sc) {
  return guarded([&] {
    require(sc != nullptr, "scenario handle is null");
    sc->built = sc->wsn ? rmtsel::make_wsn(sc->wsn_params)
                        : rmtsel::make_mimo(sc->mimo);
  });
}

rmtsel_status rmtsel_scenario_dims(const rmtsel_scenario* sc, int32_t* n, int32_t* m,
                                   int32_t* k) {
  return guarded([&] {
    require(sc != nullptr, "scenario handle is null");
    const rmtsel::Scenario& built = sc->prepared();
    if (n) *n = built.dims.n;
    if (m) *m = built.dims.m;
    if (k) *k = built.dims.k;
  });
}

void rmtsel_scenario_destroy(rmtsel_scenario* sc) { delete sc; }

rmtsel_selection* rmtsel_selection_create(const int32_t* indices, int32_t count,
                                          int32_t n) {
  rmtsel_selection* out = nullptr;
  const rmtsel_status st = guarded([&] {
    require(indices != nullptr || count == 0, "index array is null");
    std::vector<int> idx(indices, indices + count);
    out = new rmtsel_selection(rmtsel::SelectionVector::binary(idx, n));
  });
  return st == RMTSEL_OK ? out : nullptr;
}

rmtsel_status rmtsel_random_selection(const rmtsel_scenario* sc, uint64_t seed,
                                      rmtsel_selection** out) {
  return guarded([&] {
    require(sc != nullptr && out != nullptr, "null argument");
    const rmtsel::Scenario& built = sc->prepared();
    *out = new rmtsel_selection(rmtsel::random_select(built.dims, seed));
  });
}

int32_t rmtsel_selection_size(const rmtsel_selection* sel) {
  return sel ? static_cast<int32_t>(sel->vec.support_size()) : -1;
}

int32_t rmtsel_selection_length(const rmtsel_selection* sel) {
  return sel ? static_cast<int32_t>(sel->vec.n()) : -1;
}

rmtsel_status rmtsel_selection_indices(const rmtsel_selection* sel, int32_t* out,
                                       int32_t capacity) {
  return guarded([&] {
    require(sel != nullptr && out != nullptr, "null argument");
    const std::vector<int> idx = sel->vec.indices();
    require(capacity >= static_cast<int32_t>(idx.size()),
            "output buffer too small");
    std::copy(idx.begin(), idx.end(), out);
  });
}

void rmtsel_selection_destroy(rmtsel_selection* sel) { delete sel; }

rmtsel_status rmtsel_detequiv_eval(const rmtsel_scenario* sc,
                                   const rmtsel_selection* sel, const char* metric,
                                   rmtsel_detequiv_result* out) {
  return guarded([&] {
    require(sc != nullptr && sel != nullptr && out != nullptr, "null argument");
    const rmtsel::Scenario& built = sc->prepared();
    const rmtsel::ErrorMetric em = metric_from_string(metric);
    rmtsel::DetEquivSolution sol;
    switch (em) {
      case rmtsel::ErrorMetric::kMse:
        sol = rmtsel::mse_bar(built.r, sel->vec, built.dims.m);
        break;
      case rmtsel::ErrorMetric::kLce:
        sol = rmtsel::lce_bar(built.r, sel->vec, built.dims.m);
        break;
      case rmtsel::ErrorMetric::kWev:
        sol = rmtsel::wev_bar(built.r, sel->vec, built.dims.m);
        break;
    }
    out->value = sol.value;
    out->scalar = sol.scalar;
    out->residual = sol.residual;
    out->iterations = sol.iterations;
  });
}

rmtsel_status rmtsel_select(const rmtsel_scenario* sc, const char* algo,
                            const char* metric, int32_t sweeps, uint64_t seed,
                            uint64_t channel_seed, rmtsel_selection** out_selection,
                            rmtsel_select_result* out_info) {
  return guarded([&] {
    require(sc != nullptr && out_selection != nullptr, "null argument");
    const rmtsel::Scenario& built = sc->prepared();
    const rmtsel::ErrorMetric em = metric_from_string(metric);
    const rmtsel::AlgorithmId id =
        rmtsel::algorithm_from_name(std::string(algo ? algo : ""));
    const int n_sweeps = sweeps > 0 ? sweeps : 2;

    rmtsel_select_result info;
    info.objective = std::numeric_limits<double>::quiet_NaN();
    info.relaxed_objective = std::numeric_limits<double>::quiet_NaN();
    info.evals = 0;
    info.sweeps = 0;
    info.converged = 1;

    std::optional<rmtsel::SelectionVector> sel;
    switch (id) {
      case rmtsel::AlgorithmId::kGreedyBlind: {
        rmtsel::BlindOracle oracle(built.r, built.dims.m, em);
        const rmtsel::SelectionResult res =
            rmtsel::greedy_select(oracle, built.dims, n_sweeps, seed);
        sel = res.selection;
        info.objective = res.objective;
        info.evals = res.evals;
        info.sweeps = res.sweeps;
        info.converged = res.converged ? 1 : 0;
        break;
      }
      case rmtsel::AlgorithmId::kConvexBlind: {
        const rmtsel::SelectionResult res =
            rmtsel::convex_relax_select(built.r, built.dims, em);
        sel = res.selection;
        info.objective = res.objective;
        info.relaxed_objective = res.relaxed_objective;
        info.evals = res.evals;
        info.sweeps = res.sweeps;
        info.converged = res.converged ? 1 : 0;
        break;
      }
      case rmtsel::AlgorithmId::kExhaustive: {
        rmtsel::BlindOracle oracle(built.r, built.dims.m, em);
        const rmtsel::SelectionResult res =
            rmtsel::exhaustive_select(oracle, built.dims);
        sel = res.selection;
        info.objective = res.objective;
        info.evals = res.evals;
        info.sweeps = res.sweeps;
        break;
      }
      case rmtsel::AlgorithmId::kGreedyAware: {
        const rmtsel::ChannelSample ch =
            rmtsel::sample_channel(built.r, built.dims.m, channel_seed);
        rmtsel::AwareOracle oracle(ch, em);
        const rmtsel::SelectionResult res =
            rmtsel::greedy_select(oracle, built.dims, n_sweeps, seed);
        sel = res.selection;
        info.objective = res.objective;
        info.evals = res.evals;
        info.sweeps = res.sweeps;
        info.converged = res.converged ? 1 : 0;
        break;
      }
      case rmtsel::AlgorithmId::kConvexAware: {
        const rmtsel::ChannelSample ch =
            rmtsel::sample_channel(built.r, built.dims.m, channel_seed);
        const rmtsel::SelectionResult res =
            rmtsel::convex_relax_select(ch, built.dims, em);
        sel = res.selection;
        info.objective = res.objective;
        info.relaxed_objective = res.relaxed_objective;
        info.evals = res.evals;
        info.sweeps = res.sweeps;
        info.converged = res.converged ? 1 : 0;
        break;
      }
      case rmtsel::AlgorithmId::kRandom: {
        sel = rmtsel::random_select(built.dims, seed);
        rmtsel::BlindOracle oracle(built.r, built.dims.m, em);
        info.objective = oracle.evaluate(*sel);
        break;
      }
    }

    *out_selection = new rmtsel_selection(*sel);
    if (out_info) *out_info = info;
  });
}

rmtsel_status rmtsel_experiment_run(const char* config_text, const char* out_path,
                                    rmtsel_run_summary* out_summary) {
  return guarded([&] {
    const rmtsel::ExperimentConfig cfg =
        rmtsel::parse_config(config_text ? config_text : "");
    const std::vector<rmtsel::RunRecord> records = rmtsel::run_experiment(cfg);
    const std::string path =
        (out_path && *out_path) ? std::string(out_path) : cfg.out_path;
    if (!path.empty()) {
      rmtsel::emit_csv(records, path);
    }
    if (out_summary) {
      out_summary->rows = static_cast<int64_t>(records.size());
      out_summary->failures = 0;
      for (const rmtsel::RunRecord& r : records) {
        if (std::isnan(r.value)) ++out_summary->failures;
      }
    }
  });
}

rmtsel_status rmtsel_bench_run(const char* config_text, const char* out_path,
                               rmtsel_run_summary* out_summary) {
  return guarded([&] {
    const rmtsel::ExperimentConfig cfg =
        rmtsel::parse_config(config_text ? config_text : "");
    const std::vector<rmtsel::RunRecord> records = rmtsel::bench_runtime(cfg);
    const std::string path =
        (out_path && *out_path) ? std::string(out_path) : cfg.out_path;
    if (!path.empty()) {
      rmtsel::emit_csv(records, path);
    }
    if (out_summary) {
      out_summary->rows = static_cast<int64_t>(records.size());
      out_summary->failures = 0;
      for (const rmtsel::RunRecord& r : records) {
        if (std::isnan(r.value)) ++out_summary->failures;
      }
    }
  });
}

}  // extern "C"
