// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#pragma once

#include <Eigen/Dense>

#include "rmtsel/types.hpp"

namespace rmtsel {

/// Deterministic-equivalent value together with its gradient in the
/// selection weights. For kMse and kLce `value` is the metric itself;
/// for kWev it is the spectrum edge lambda_min_bar (the quantity whose
/// gradient is returned), with `scalar` holding delta or eta.
struct BarValueGrad {
  double value = 0.0;
  double scalar = 0.0;
  Eigen::VectorXd grad;
};

/// Evaluates the deterministic equivalent and its analytic gradient in
/// one pass (a single eigendecomposition of R^{1/2} diag(s) R^{1/2}).
/// Weights must be entrywise nonnegative with rank(R_s) > m.
BarValueGrad bar_value_and_grad(const CorrelationMatrix& r,
                                const Eigen::Ref<const Eigen::VectorXd>& s, int m,
                                ErrorMetric metric);

Eigen::VectorXd grad_mse_bar(const CorrelationMatrix& r,
                             const Eigen::Ref<const Eigen::VectorXd>& s, int m);
Eigen::VectorXd grad_lce_bar(const CorrelationMatrix& r,
                             const Eigen::Ref<const Eigen::VectorXd>& s, int m);
/// Gradient of the asymptotic spectrum edge lambda_min_bar (selection
/// quality improves as this increases).
Eigen::VectorXd grad_lambda_min_bar(const CorrelationMatrix& r,
                                    const Eigen::Ref<const Eigen::VectorXd>& s,
                                    int m);

}  // namespace rmtsel
