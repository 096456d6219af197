// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "rmtsel/channel.hpp"
#include "rmtsel/detequiv.hpp"
#include "rmtsel/types.hpp"

namespace rmtsel {

/// Objective callback shared by the combinatorial selectors. Lower is
/// better for every metric (WEV is evaluated as the reciprocal edge).
/// Implementations may keep internal caches; evaluate() is not
/// thread-safe on a shared instance.
class MetricOracle {
 public:
  virtual ~MetricOracle() = default;

  double evaluate(const SelectionVector& s) {
    ++evals_;
    return do_evaluate(s);
  }

  long long evals() const noexcept { return evals_; }

 protected:
  virtual double do_evaluate(const SelectionVector& s) = 0;

 private:
  long long evals_ = 0;
};

/// Statistics-only oracle: deterministic equivalent of the metric under
/// the stored correlation model. The correlation matrix must outlive
/// the oracle.
class BlindOracle final : public MetricOracle {
 public:
  BlindOracle(const CorrelationMatrix& r, int m, ErrorMetric metric)
      : r_(r), m_(m), metric_(metric) {}

 protected:
  double do_evaluate(const SelectionVector& s) override;

 private:
  const CorrelationMatrix& r_;
  int m_;
  ErrorMetric metric_;
};

/// Channel-aware oracle: exact measure on one realization. With
/// `incremental` set, consecutive queries that differ from the last
/// improving state by a single swap are served through O(m^2) rank-one
/// updates; anything else triggers a dense rebuild. Results match the
/// dense path to numerical precision either way.
class AwareOracle final : public MetricOracle {
 public:
  AwareOracle(const ChannelSample& h, ErrorMetric metric, bool incremental = true)
      : h_(h), metric_(metric), incremental_(incremental) {}

 protected:
  double do_evaluate(const SelectionVector& s) override;

 private:
  const ChannelSample& h_;
  ErrorMetric metric_;
  bool incremental_;
  std::optional<GramState> base_;
  double base_value_ = 0.0;
};

struct SelectionResult {
  explicit SelectionResult(SelectionVector sel) : selection(std::move(sel)) {}

  SelectionVector selection;
  double objective = 0.0;
  /// Objective before any sweep, then after each sweep (greedy), or the
  /// accepted iterates (convex). Nonincreasing.
  std::vector<double> trajectory;
  int sweeps = 0;
  /// Total oracle/objective evaluations, including the initial one.
  long long evals = 0;
  /// Swap evaluations per sweep; each entry is at most k*(n-k) and
  /// exactly k*(n-k) for full sweeps (greedy only).
  std::vector<long long> sweep_evals;
  /// Convex path only: objective of the relaxed optimum before rounding.
  double relaxed_objective = std::numeric_limits<double>::quiet_NaN();
  bool converged = true;
};

/// Local-swap descent. Starts from a seeded uniform random k-subset and
/// runs exactly `sweeps` passes. A pass snapshots the non-selected
/// candidates in ascending order; for each candidate it scores all k
/// single-swap replacements (removal indices ascending) and applies the
/// best strictly improving one (ties break to the lowest removal
/// index) before moving on. Each full pass costs exactly k*(n-k)
/// oracle evaluations.
SelectionResult greedy_select(MetricOracle& oracle, const ProblemDims& dims,
                              int sweeps, std::uint64_t seed);

struct ConvexConfig {
  int max_iters = 500;
  double grad_tol = 1e-6;     // projected-gradient norm threshold
  double armijo_c1 = 1e-4;
  double initial_step = 1.0;
  int max_backtracks = 60;
};

/// Projected-gradient descent of the deterministic equivalent over the
/// capped simplex {0 <= s_i <= 1, sum s = k}, started from the uniform
/// point (k/n) * ones, followed by top-k rounding. For WEV the descent
/// runs on -lambda_min_bar. `objective` is the metric at the rounded
/// binary selection; `relaxed_objective` the metric at the relaxed
/// optimum.
SelectionResult convex_relax_select(const CorrelationMatrix& r,
                                    const ProblemDims& dims, ErrorMetric metric,
                                    const ConvexConfig& cfg = {});

/// Channel-aware variant: same descent applied to the exact measure of
/// one realization (for WEV, on -lambda_min of the scaled Gram matrix).
SelectionResult convex_relax_select(const ChannelSample& h, const ProblemDims& dims,
                                    ErrorMetric metric, const ConvexConfig& cfg = {});

/// Euclidean projection onto {0 <= s_i <= 1, sum s = k} by bisection on
/// the shift of clamp(v - tau, 0, 1); stops once |sum - k| <= 1e-10.
Eigen::VectorXd project_capped_simplex(const Eigen::Ref<const Eigen::VectorXd>& v,
                                       int k);

/// Binary selection of the k largest weights, ties to the lower index.
SelectionVector round_topk(const Eigen::Ref<const Eigen::VectorXd>& s, int k);

/// Uniform random k-subset (selection only; no objective involved).
SelectionVector random_select(const ProblemDims& dims, std::uint64_t seed);

/// Full enumeration of all k-subsets; throws TooLarge when C(n,k)
/// exceeds `cap`. Ties resolve to the lexicographically smallest subset.
SelectionResult exhaustive_select(MetricOracle& oracle, const ProblemDims& dims,
                                  long long cap = 1000000);

}  // namespace rmtsel
