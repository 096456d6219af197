// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "rmtsel/types.hpp"

namespace rmtsel {

/// One realization H = R^{1/2} W of the correlated measurement matrix,
/// with W holding iid CN(0,1) entries. Reproducible from the seed: W is
/// drawn from std::mt19937_64 via std::normal_distribution<double>(0, 1/sqrt(2)),
/// real part then imaginary part, row by row within each row left to right.
struct ChannelSample {
  Eigen::MatrixXcd h;  // n x m
  std::uint64_t seed = 0;

  int n() const noexcept { return static_cast<int>(h.rows()); }
  int m() const noexcept { return static_cast<int>(h.cols()); }
};

ChannelSample sample_channel(const CorrelationMatrix& r, int m, std::uint64_t seed);

/// Exact finite-n measures on one realization, all driven by the
/// weighted Gram matrix G(s) = H^H diag(s) H. Binary and relaxed
/// weight vectors are both accepted; rows with weight zero drop out.
/// Throws SingularGram when lambda_min(G) < 1e-12 * lambda_max(G).
double mse_exact(const ChannelSample& h, const SelectionVector& s);
double lce_exact(const ChannelSample& h, const SelectionVector& s);
double wev_exact(const ChannelSample& h, const SelectionVector& s);
double exact_measure(const ChannelSample& h, const SelectionVector& s,
                     ErrorMetric metric);

/// Relaxed-weight variants used by the channel-aware interior-point path.
double exact_measure(const ChannelSample& h,
                     const Eigen::Ref<const Eigen::VectorXd>& s,
                     ErrorMetric metric);

/// Gradient of the exact measure at relaxed weights s. For WEV the
/// returned vector is the gradient of lambda_min((1/m) G(s)), i.e. the
/// quantity the selector maximizes; callers flip the sign for descent.
Eigen::VectorXd exact_gradient(const ChannelSample& h,
                               const Eigen::Ref<const Eigen::VectorXd>& s,
                               ErrorMetric metric);

/// Cached Gram factorization for incremental swap evaluation:
/// G = H_S^H H_S for the current binary selection, its inverse and
/// log-determinant kept in sync through rank-one updates.
struct GramState {
  Eigen::MatrixXcd gram;
  Eigen::MatrixXcd gram_inv;
  double log_det = 0.0;
  SelectionVector selection;
};

GramState make_gram_state(const ChannelSample& h, const SelectionVector& s);

/// Applies one swap (drop row `remove`, take row `add`) in O(m^2) via
/// two rank-one corrections: the addition first, then the removal,
/// keeping the intermediate matrix positive definite. Throws
/// UpdateSingular when the downdate denominator falls below 1e-12; the
/// caller should rebuild from scratch in that case.
GramState swap_update(const GramState& state, const ChannelSample& h, int remove,
                      int add);

double gram_mse(const GramState& state);
double gram_lce(const GramState& state, int n_total);
double gram_wev(const GramState& state);
double gram_measure(const GramState& state, int n_total, ErrorMetric metric);

}  // namespace rmtsel
