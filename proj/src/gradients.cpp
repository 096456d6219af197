// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include "rmtsel/gradients.hpp"

#include <cmath>

#include "rmtsel/detequiv.hpp"

namespace rmtsel {

namespace {

// Shared eigen-basis data for the gradient kernels. With
// R_s = U diag(lambda) U^H and M = U^H R^{1/2}, the diagonal
// [R^{1/2} (I + t R_s)^{-q} R^{1/2}]_ii equals sum_j P(j,i) (1+t lambda_j)^{-q}
// where P = |M|^2 entrywise.
struct EigBasis {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd p;  // n x n, column i belongs to coordinate i
};

EigBasis decompose(const CorrelationMatrix& r,
                   const Eigen::Ref<const Eigen::VectorXd>& s) {
  const int n = r.n();
  if (s.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weight vector length does not match correlation size");
  }
  if (s.minCoeff() < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "selection weights must be nonnegative");
  }
  EigBasis basis;
  if (r.is_real()) {
    const Eigen::MatrixXd half = r.sqrt().real();
    const Eigen::MatrixXd rs = half * s.asDiagonal() * half;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        0.5 * (rs + rs.transpose()));
    if (eig.info() != Eigen::Success) {
      throw Error(ErrorCode::kNonConvergence, "weighted correlation eigensolve failed");
    }
    basis.lambda = eig.eigenvalues().cwiseMax(0.0);
    basis.p = (eig.eigenvectors().transpose() * half).cwiseAbs2();
  } else {
    const Eigen::MatrixXcd& half = r.sqrt();
    const Eigen::MatrixXcd rs = half * s.asDiagonal() * half;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
        0.5 * (rs + rs.adjoint()));
    if (eig.info() != Eigen::Success) {
      throw Error(ErrorCode::kNonConvergence, "weighted correlation eigensolve failed");
    }
    basis.lambda = eig.eigenvalues().cwiseMax(0.0);
    basis.p = (eig.eigenvectors().adjoint() * half).cwiseAbs2();
  }
  return basis;
}

Eigen::VectorXd resolvent_weights(const EigBasis& b, double t, int q) {
  Eigen::VectorXd w(b.lambda.size());
  for (Eigen::Index j = 0; j < b.lambda.size(); ++j) {
    w[j] = std::pow(1.0 + t * b.lambda[j], -q);
  }
  return w;
}

double trace_rs_resolvent_pow(const EigBasis& b, double t, int q) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < b.lambda.size(); ++j) {
    acc += b.lambda[j] * std::pow(1.0 + t * b.lambda[j], -q);
  }
  return acc;
}

}  // namespace

BarValueGrad bar_value_and_grad(const CorrelationMatrix& r,
                                const Eigen::Ref<const Eigen::VectorXd>& s, int m,
                                ErrorMetric metric) {
  const EigBasis basis = decompose(r, s);
  const detail::EffectiveSpectrum sp = detail::spectrum_from_eigenvalues(basis.lambda);
  const int n = r.n();
  const double md = static_cast<double>(m);
  BarValueGrad out;

  if (metric == ErrorMetric::kMse || metric == ErrorMetric::kLce) {
    const detail::RootSolve root = detail::solve_delta(sp, m);
    const double delta = root.root;
    out.scalar = delta;
    // delta'_i = -delta [R^{1/2}(I+dR_s)^{-2}R^{1/2}]_ii / tr[R_s(I+dR_s)^{-2}]
    const Eigen::VectorXd diag2 = basis.p.transpose() * resolvent_weights(basis, delta, 2);
    const Eigen::VectorXd dprime =
        -delta / trace_rs_resolvent_pow(basis, delta, 2) * diag2;
    if (metric == ErrorMetric::kMse) {
      out.value = delta;
      out.grad = dprime;
    } else {
      const double c = static_cast<double>(n) / md;
      out.value = -detail::logdet_i_plus(sp, delta) / md + std::log(c * delta) + 1.0;
      const Eigen::VectorXd diag1 =
          basis.p.transpose() * resolvent_weights(basis, delta, 1);
      const double tr_inv = detail::trace_resolvent(sp, delta);
      out.grad = ((1.0 - c) / delta + tr_inv / (md * delta)) * dprime -
                 (delta / md) * diag1;
    }
    return out;
  }

  const detail::RootSolve root = detail::solve_eta(sp, m);
  const double eta = root.root;
  out.scalar = eta;
  out.value = -1.0 / eta + detail::trace_r_resolvent(sp, eta) / md;
  if (!(out.value > 0.0)) {
    throw Error(ErrorCode::kNonPositiveEdge,
                "asymptotic spectrum edge is not positive");
  }
  const Eigen::VectorXd diag2 = basis.p.transpose() * resolvent_weights(basis, eta, 2);
  const Eigen::VectorXd diag3 = basis.p.transpose() * resolvent_weights(basis, eta, 3);
  const double tr2 = trace_rs_resolvent_pow(basis, eta, 2);
  const double tr3 = trace_rs_resolvent_pow(basis, eta, 3);
  if (tr2 - tr3 < 1e-12) {
    throw Error(ErrorCode::kEdgeDegenerate,
                "eta sensitivity denominator vanished");
  }
  const Eigen::VectorXd eprime = -eta / (tr2 - tr3) * (diag2 - diag3);
  const double c = static_cast<double>(n) / md;
  const double tr_inv1 = detail::trace_resolvent(sp, eta);
  double tr_inv2 = static_cast<double>(n);
  for (Eigen::Index j = 0; j < basis.lambda.size(); ++j) {
    const double d = 1.0 + eta * basis.lambda[j];
    tr_inv2 += 1.0 / (d * d) - 1.0;
  }
  out.grad = (-(c - 1.0) / (eta * eta) + (2.0 * tr_inv1 - tr_inv2) / (md * eta * eta)) *
                 eprime +
             diag2 / md;
  return out;
}

Eigen::VectorXd grad_mse_bar(const CorrelationMatrix& r,
                             const Eigen::Ref<const Eigen::VectorXd>& s, int m) {
  return bar_value_and_grad(r, s, m, ErrorMetric::kMse).grad;
}

Eigen::VectorXd grad_lce_bar(const CorrelationMatrix& r,
                             const Eigen::Ref<const Eigen::VectorXd>& s, int m) {
  return bar_value_and_grad(r, s, m, ErrorMetric::kLce).grad;
}

Eigen::VectorXd grad_lambda_min_bar(const CorrelationMatrix& r,
                                    const Eigen::Ref<const Eigen::VectorXd>& s,
                                    int m) {
  return bar_value_and_grad(r, s, m, ErrorMetric::kWev).grad;
}

}  // namespace rmtsel
