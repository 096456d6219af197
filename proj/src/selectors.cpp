// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include "rmtsel/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rmtsel/gradients.hpp"

namespace rmtsel {

double BlindOracle::do_evaluate(const SelectionVector& s) {
  switch (metric_) {
    case ErrorMetric::kMse: return mse_bar(r_, s, m_).value;
    case ErrorMetric::kLce: return lce_bar(r_, s, m_).value;
    case ErrorMetric::kWev: return wev_bar(r_, s, m_).value;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown metric");
}

double AwareOracle::do_evaluate(const SelectionVector& s) {
  if (!incremental_) {
    return exact_measure(h_, s, metric_);
  }
  const int n = h_.n();
  if (base_) {
    int removed = -1, added = -1, diffs = 0;
    for (int i = 0; i < n && diffs <= 2; ++i) {
      const bool was = base_->selection.selected(i);
      const bool now = s.selected(i);
      if (was == now) continue;
      ++diffs;
      (was ? removed : added) = i;
    }
    if (diffs == 0) return base_value_;
    if (diffs == 2 && removed >= 0 && added >= 0) {
      double value;
      std::optional<GramState> next;
      try {
        next = swap_update(*base_, h_, removed, added);
        value = gram_measure(*next, n, metric_);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUpdateSingular) throw;
        next = make_gram_state(h_, s);
        value = gram_measure(*next, n, metric_);
      }
      // Following the improving states keeps greedy's accepted path a
      // single swap away from the cache at every query.
      if (value < base_value_) {
        base_ = std::move(next);
        base_value_ = value;
      }
      return value;
    }
  }
  base_ = make_gram_state(h_, s);
  base_value_ = gram_measure(*base_, n, metric_);
  return base_value_;
}

SelectionResult greedy_select(MetricOracle& oracle, const ProblemDims& dims,
                              int sweeps, std::uint64_t seed) {
  dims.validate();
  if (sweeps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sweep count must be at least 1");
  }
  SelectionVector s = random_select(dims, seed);
  SelectionResult res(s);
  double best = oracle.evaluate(s);
  res.trajectory.push_back(best);
  res.evals = 1;

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    bool improved_in_sweep = false;
    long long count = 0;
    std::vector<int> candidates;
    candidates.reserve(dims.n - dims.k);
    for (int j = 0; j < dims.n; ++j) {
      if (!s.selected(j)) candidates.push_back(j);
    }
    for (int j : candidates) {
      const std::vector<int> current = s.indices();
      double best_v = best;
      int best_i = -1;
      for (int i : current) {
        const double v = oracle.evaluate(s.with_swap(i, j));
        ++count;
        if (v < best_v) {
          best_v = v;
          best_i = i;
        }
      }
      if (best_i >= 0) {
        s = s.with_swap(best_i, j);
        best = best_v;
        improved_in_sweep = true;
      }
    }
    res.sweep_evals.push_back(count);
    res.evals += count;
    res.trajectory.push_back(best);
    res.sweeps = sweep + 1;
    res.converged = !improved_in_sweep;
  }
  res.selection = s;
  res.objective = best;
  return res;
}

Eigen::VectorXd project_capped_simplex(const Eigen::Ref<const Eigen::VectorXd>& v,
                                       int k) {
  const int n = static_cast<int>(v.size());
  if (k < 0 || k > n) {
    throw Error(ErrorCode::kBudgetInfeasible,
                "projection target k must lie in [0, n]");
  }
  if (k == n) return Eigen::VectorXd::Ones(n);
  if (k == 0) return Eigen::VectorXd::Zero(n);

  const auto clipped_sum = [&](double tau) {
    return (v.array() - tau).cwiseMax(0.0).cwiseMin(1.0).sum();
  };
  double lo = v.minCoeff() - 1.0;  // sum = n >= k
  double hi = v.maxCoeff();        // sum = 0 <= k
  double tau = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    tau = 0.5 * (lo + hi);
    const double sum = clipped_sum(tau);
    if (std::abs(sum - k) <= 1e-10) {
      return (v.array() - tau).cwiseMax(0.0).cwiseMin(1.0);
    }
    if (sum > k) {
      lo = tau;
    } else {
      hi = tau;
    }
  }
  throw Error(ErrorCode::kNonConvergence, "capped-simplex projection stalled");
}

SelectionVector round_topk(const Eigen::Ref<const Eigen::VectorXd>& s, int k) {
  const int n = static_cast<int>(s.size());
  if (k < 0 || k > n) {
    throw Error(ErrorCode::kBudgetInfeasible, "rounding target k must lie in [0, n]");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return s[a] > s[b]; });
  order.resize(k);
  return SelectionVector::binary(order, n);
}

SelectionVector random_select(const ProblemDims& dims, std::uint64_t seed) {
  dims.validate();
  std::vector<int> pool(dims.n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> chosen;
  chosen.reserve(dims.k);
  std::mt19937_64 rng(seed);
  std::sample(pool.begin(), pool.end(), std::back_inserter(chosen), dims.k, rng);
  return SelectionVector::binary(chosen, dims.n);
}

namespace {

// Descent-scale problem plus the arithmetic map back to metric scale.
struct RelaxedProblem {
  std::function<double(const Eigen::VectorXd&)> descent_value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> descent_grad;
  std::function<double(double)> report;
  std::function<double(const SelectionVector&)> binary_report;
};

SelectionResult run_pgd(const RelaxedProblem& prob, const ProblemDims& dims,
                        const ConvexConfig& cfg) {
  dims.validate();
  const int n = dims.n;
  Eigen::VectorXd s =
      Eigen::VectorXd::Constant(n, static_cast<double>(dims.k) / n);
  double f = prob.descent_value(s);
  long long evals = 1;
  std::vector<double> trajectory{prob.report(f)};
  bool converged = false;
  int iters = 0;

  for (int it = 0; it < cfg.max_iters; ++it) {
    const Eigen::VectorXd g = prob.descent_grad(s);
    ++evals;
    const Eigen::VectorXd pg = s - project_capped_simplex(s - g, dims.k);
    if (pg.norm() <= cfg.grad_tol) {
      converged = true;
      break;
    }
    double step = cfg.initial_step;
    bool accepted = false;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      const Eigen::VectorXd cand = project_capped_simplex(s - step * g, dims.k);
      const double fc = prob.descent_value(cand);
      ++evals;
      if (fc <= f + cfg.armijo_c1 * g.dot(cand - s)) {
        s = cand;
        f = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++iters;
    if (!accepted) break;  // step collapsed; treat as stationary
    trajectory.push_back(prob.report(f));
  }

  SelectionVector rounded = round_topk(s, dims.k);
  SelectionResult res(rounded);
  res.objective = prob.binary_report(rounded);
  ++evals;
  res.relaxed_objective = prob.report(f);
  res.trajectory = std::move(trajectory);
  res.sweeps = iters;
  res.evals = evals;
  res.converged = converged;
  return res;
}

RelaxedProblem blind_problem(const CorrelationMatrix& r, const ProblemDims& dims,
                             ErrorMetric metric) {
  RelaxedProblem prob;
  const int m = dims.m;
  if (metric == ErrorMetric::kWev) {
    prob.descent_value = [&r, m](const Eigen::VectorXd& s) {
      return -lambda_min_bar(r, s, m).value;
    };
    prob.descent_grad = [&r, m](const Eigen::VectorXd& s) {
      return Eigen::VectorXd(-bar_value_and_grad(r, s, m, ErrorMetric::kWev).grad);
    };
    prob.report = [](double f) { return -1.0 / f; };
    prob.binary_report = [&r, m](const SelectionVector& sel) {
      return wev_bar(r, sel, m).value;
    };
  } else {
    prob.descent_value = [&r, m, metric](const Eigen::VectorXd& s) {
      return metric == ErrorMetric::kMse ? mse_bar(r, s, m).value
                                         : lce_bar(r, s, m).value;
    };
    prob.descent_grad = [&r, m, metric](const Eigen::VectorXd& s) {
      return bar_value_and_grad(r, s, m, metric).grad;
    };
    prob.report = [](double f) { return f; };
    prob.binary_report = [&r, m, metric](const SelectionVector& sel) {
      return metric == ErrorMetric::kMse ? mse_bar(r, sel, m).value
                                         : lce_bar(r, sel, m).value;
    };
  }
  return prob;
}

RelaxedProblem aware_problem(const ChannelSample& h, ErrorMetric metric) {
  RelaxedProblem prob;
  if (metric == ErrorMetric::kWev) {
    // Descend on -lambda_min((1/m) G); the metric is its reciprocal.
    prob.descent_value = [&h](const Eigen::VectorXd& s) {
      return -1.0 / exact_measure(h, s, ErrorMetric::kWev);
    };
    prob.descent_grad = [&h](const Eigen::VectorXd& s) {
      return Eigen::VectorXd(-exact_gradient(h, s, ErrorMetric::kWev));
    };
    prob.report = [](double f) { return -1.0 / f; };
  } else {
    prob.descent_value = [&h, metric](const Eigen::VectorXd& s) {
      return exact_measure(h, s, metric);
    };
    prob.descent_grad = [&h, metric](const Eigen::VectorXd& s) {
      return exact_gradient(h, s, metric);
    };
    prob.report = [](double f) { return f; };
  }
  prob.binary_report = [&h, metric](const SelectionVector& sel) {
    return exact_measure(h, sel, metric);
  };
  return prob;
}

}  // namespace

SelectionResult convex_relax_select(const CorrelationMatrix& r,
                                    const ProblemDims& dims, ErrorMetric metric,
                                    const ConvexConfig& cfg) {
  if (r.n() != dims.n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "correlation size does not match dims.n");
  }
  return run_pgd(blind_problem(r, dims, metric), dims, cfg);
}

SelectionResult convex_relax_select(const ChannelSample& h, const ProblemDims& dims,
                                    ErrorMetric metric, const ConvexConfig& cfg) {
  if (h.n() != dims.n || h.m() != dims.m) {
    throw Error(ErrorCode::kDimensionMismatch,
                "channel size does not match dims");
  }
  return run_pgd(aware_problem(h, metric), dims, cfg);
}

SelectionResult exhaustive_select(MetricOracle& oracle, const ProblemDims& dims,
                                  long long cap) {
  dims.validate();
  const int n = dims.n;
  const int k = dims.k;
  long double combos = 1.0L;
  for (int i = 1; i <= k; ++i) {
    combos *= static_cast<long double>(n - k + i) / i;
    if (combos > 4e18L) break;
  }
  if (combos > static_cast<long double>(cap)) {
    throw Error(ErrorCode::kTooLarge,
                "C(n,k) exceeds the enumeration cap of " + std::to_string(cap));
  }

  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  SelectionVector best_sel = SelectionVector::binary(idx, n);
  double best = oracle.evaluate(best_sel);
  long long count = 1;
  while (true) {
    // Advance to the next combination in lexicographic order.
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;

    SelectionVector sel = SelectionVector::binary(idx, n);
    const double v = oracle.evaluate(sel);
    ++count;
    if (v < best) {
      best = v;
      best_sel = sel;
    }
  }

  SelectionResult res(best_sel);
  res.objective = best;
  res.trajectory = {best};
  res.sweeps = 1;
  res.evals = count;
  res.converged = true;
  return res;
}

}  // namespace rmtsel
