/* SPDX-License-Identifier: Apache-2.0
 * Copyright (c) 2026 rmtsel authors
 *
 * C interface to the measurement-selection library. All functions are
 * safe to call from multiple threads as long as each handle is used by
 * one thread at a time. Failing calls return a status code and store a
 * message retrievable via rmtsel_last_error() (thread-local, valid
 * until the next failing call on the same thread).
 */

#ifndef RMTSEL_H
#define RMTSEL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmtsel_status {
  RMTSEL_OK = 0,
  RMTSEL_ERR_DIMENSION_MISMATCH = 1,
  RMTSEL_ERR_NOT_PSD = 2,
  RMTSEL_ERR_BUDGET_INFEASIBLE = 3,
  RMTSEL_ERR_SINGULAR_GRAM = 4,
  RMTSEL_ERR_UPDATE_SINGULAR = 5,
  RMTSEL_ERR_NO_ROOT = 6,
  RMTSEL_ERR_NON_CONVERGENCE = 7,
  RMTSEL_ERR_NON_POSITIVE_EDGE = 8,
  RMTSEL_ERR_EDGE_DEGENERATE = 9,
  RMTSEL_ERR_ILL_CONDITIONED = 10,
  RMTSEL_ERR_TOO_LARGE = 11,
  RMTSEL_ERR_IO = 12,
  RMTSEL_ERR_CONFIG = 13,
  RMTSEL_ERR_INVALID_ARGUMENT = 14,
  RMTSEL_ERR_INTERNAL = 100
} rmtsel_status;

typedef struct rmtsel_scenario rmtsel_scenario;
typedef struct rmtsel_selection rmtsel_selection;

const char* rmtsel_version(void);
const char* rmtsel_status_name(rmtsel_status status);
const char* rmtsel_last_error(void);

/* ---- Scenario handles ----------------------------------------------
 * Presets: "mimo", "mimo-d1", "mimo-d2", "mimo-d4", "wsn". Parameters
 * adjustable via rmtsel_scenario_set before rmtsel_scenario_prepare:
 *   n, m, k, d, decay-rho, sigma2, radius, placement-seed, snr-db
 * (underscores accepted in place of dashes). prepare() builds the
 * correlation model; evaluation calls require a prepared scenario.
 */
rmtsel_scenario* rmtsel_scenario_create(const char* preset);
rmtsel_status rmtsel_scenario_set(rmtsel_scenario* sc, const char* key, double value);
rmtsel_status rmtsel_scenario_prepare(rmtsel_scenario* sc);
rmtsel_status rmtsel_scenario_dims(const rmtsel_scenario* sc, int32_t* n, int32_t* m,
                                   int32_t* k);
void rmtsel_scenario_destroy(rmtsel_scenario* sc);

/* ---- Selection handles ---------------------------------------------
 * A selection is an ascending set of 0-based candidate indices out of n.
 */
rmtsel_selection* rmtsel_selection_create(const int32_t* indices, int32_t count,
                                          int32_t n);
rmtsel_status rmtsel_random_selection(const rmtsel_scenario* sc, uint64_t seed,
                                      rmtsel_selection** out);
int32_t rmtsel_selection_size(const rmtsel_selection* sel);
int32_t rmtsel_selection_length(const rmtsel_selection* sel);
rmtsel_status rmtsel_selection_indices(const rmtsel_selection* sel, int32_t* out,
                                       int32_t capacity);
void rmtsel_selection_destroy(rmtsel_selection* sel);

/* ---- Deterministic equivalents --------------------------------------
 * metric: "mse" | "lce" | "wev". scalar holds the fixed-point root
 * (delta for mse/lce, eta for wev).
 */
typedef struct rmtsel_detequiv_result {
  double value;
  double scalar;
  double residual;
  int32_t iterations;
} rmtsel_detequiv_result;

rmtsel_status rmtsel_detequiv_eval(const rmtsel_scenario* sc,
                                   const rmtsel_selection* sel, const char* metric,
                                   rmtsel_detequiv_result* out);

/* ---- Selection algorithms -------------------------------------------
 * algo: "greedy-blind" | "greedy-aware" | "convex-blind" |
 *       "convex-aware" | "random" | "exhaustive".
 * sweeps <= 0 selects the default (2). Channel-aware algorithms draw
 * one channel realization from channel_seed. For "random" the reported
 * objective is the blind deterministic equivalent of the drawn subset.
 */
typedef struct rmtsel_select_result {
  double objective;
  double relaxed_objective; /* NaN unless a convex algorithm ran */
  int64_t evals;
  int32_t sweeps;
  int32_t converged;
} rmtsel_select_result;

rmtsel_status rmtsel_select(const rmtsel_scenario* sc, const char* algo,
                            const char* metric, int32_t sweeps, uint64_t seed,
                            uint64_t channel_seed, rmtsel_selection** out_selection,
                            rmtsel_select_result* out_info);

/* ---- Experiments and benchmarks --------------------------------------
 * config_text uses the flat `key = value` format documented for config
 * files. When out_path is non-NULL the CSV is written there. failures
 * counts rows whose value is NaN.
 */
typedef struct rmtsel_run_summary {
  int64_t rows;
  int64_t failures;
} rmtsel_run_summary;

rmtsel_status rmtsel_experiment_run(const char* config_text, const char* out_path,
                                    rmtsel_run_summary* out_summary);
rmtsel_status rmtsel_bench_run(const char* config_text, const char* out_path,
                               rmtsel_run_summary* out_summary);

#ifdef __cplusplus
}
#endif

#endif /* RMTSEL_H */
