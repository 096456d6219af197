// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#pragma once

#include <Eigen/Dense>

#include "rmtsel/types.hpp"

namespace rmtsel {

/// Result of a deterministic-equivalent evaluation. `scalar` is the
/// underlying fixed-point root (delta for MSE/LCE, eta for WEV),
/// `value` the metric-scale figure, `residual` the fixed-point defect
/// at the returned root.
struct DetEquivSolution {
  double scalar = 0.0;
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Solves delta * tr[R_s (I + delta R_s)^{-1}] = m for delta > 0 with
/// R_s = R^{1/2} diag(s) R^{1/2}. The asymptotic MSE equals delta.
/// Accepts any entrywise nonnegative weight vector s (not just [0,1]).
/// Throws NoRoot when rank(R_s) <= m and NonConvergence when the
/// residual cannot be brought below 1e-10 * max(1, delta).
DetEquivSolution mse_bar(const CorrelationMatrix& r,
                         const Eigen::Ref<const Eigen::VectorXd>& s, int m);
DetEquivSolution mse_bar(const CorrelationMatrix& r, const SelectionVector& s,
                         int m);

/// Asymptotic normalized log-volume of the confidence ellipsoid,
///   -(1/m) log det(I + delta R_s) + log((n/m) delta) + 1,
/// evaluated at the mse_bar root.
DetEquivSolution lce_bar(const CorrelationMatrix& r,
                         const Eigen::Ref<const Eigen::VectorXd>& s, int m);
DetEquivSolution lce_bar(const CorrelationMatrix& r, const SelectionVector& s,
                         int m);

/// Solves eta^2 * tr[R_s^2 (I + eta R_s)^{-2}] = m for eta > 0 and
/// returns the asymptotic smallest eigenvalue of (1/m) H_S^H H_S,
///   lambda_min_bar = -1/eta + (1/m) tr[R_s (I + eta R_s)^{-1}],
/// in `value` with eta in `scalar`. Throws NoRoot when rank(R_s) <= m
/// (the defect cannot reach zero) and NonPositiveEdge when the
/// resulting edge is below 1e-12.
DetEquivSolution lambda_min_bar(const CorrelationMatrix& r,
                                const Eigen::Ref<const Eigen::VectorXd>& s,
                                int m);
DetEquivSolution lambda_min_bar(const CorrelationMatrix& r,
                                const SelectionVector& s, int m);

/// Worst-case eigenvalue figure: reciprocal of lambda_min_bar. Lower is
/// better, matching the exact measure m / lambda_min(H_S^H H_S).
DetEquivSolution wev_bar(const CorrelationMatrix& r,
                         const Eigen::Ref<const Eigen::VectorXd>& s, int m);
DetEquivSolution wev_bar(const CorrelationMatrix& r, const SelectionVector& s,
                         int m);

namespace detail {

/// Nonzero spectrum of R^{1/2} diag(s) R^{1/2}, obtained from the
/// similar matrix diag(sqrt(s)) R diag(sqrt(s)) restricted to the
/// support of s. Entries outside the support contribute exact zeros,
/// tracked by count instead of being materialized.
struct EffectiveSpectrum {
  Eigen::VectorXd lambda;  // eigenvalues on the support, clamped at 0
  int ambient = 0;         // n
  int zeros_outside = 0;   // n - |support|
  int positive = 0;        // eigenvalues above 1e-12 * lambda_max
};

EffectiveSpectrum effective_spectrum(const CorrelationMatrix& r,
                                     const Eigen::Ref<const Eigen::VectorXd>& s);

/// Wraps an explicit full eigenvalue list (ambient size, no implicit zeros).
EffectiveSpectrum spectrum_from_eigenvalues(const Eigen::VectorXd& lambda);

double trace_r_resolvent(const EffectiveSpectrum& sp, double t);  // tr[R_s(I+tR_s)^-1]
double trace_resolvent(const EffectiveSpectrum& sp, double t);    // tr[(I+tR_s)^-1]
double logdet_i_plus(const EffectiveSpectrum& sp, double t);      // log det(I+tR_s)
double eta_defect(const EffectiveSpectrum& sp, double t, int m);  // t^2/m tr[R_s^2(I+tR_s)^-2] - 1

struct RootSolve {
  double root = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Damped fixed point delta <- (delta + m / tr[R_s(I+delta R_s)^{-1}])/2
/// with bisection fallback; both paths solve the same equation.
RootSolve solve_delta(const EffectiveSpectrum& sp, int m);
RootSolve solve_delta_fixed_point(const EffectiveSpectrum& sp, int m);
RootSolve solve_delta_bisection(const EffectiveSpectrum& sp, int m);

/// Bisection on the strictly increasing eta defect.
RootSolve solve_eta(const EffectiveSpectrum& sp, int m);

}  // namespace detail
}  // namespace rmtsel
