// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include "rmtsel/channel.hpp"

#include <cmath>
#include <random>
#include <string>

namespace rmtsel {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_weights(const ChannelSample& h, const Eigen::Ref<const Eigen::VectorXd>& s) {
  if (s.size() != h.n()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weight vector length " + std::to_string(s.size()) +
                    " does not match n=" + std::to_string(h.n()));
  }
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "weights must be nonnegative");
    }
  }
}

Eigen::MatrixXcd weighted_gram(const ChannelSample& h,
                               const Eigen::Ref<const Eigen::VectorXd>& s) {
  check_weights(h, s);
  const int m = h.m();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(m, m);
  // G = sum_i s_i h_i h_i^H accumulated via the scaled row block.
  for (int i = 0; i < h.n(); ++i) {
    if (s[i] > 0.0) {
      g.selfadjointView<Eigen::Lower>().rankUpdate(h.h.row(i).adjoint(), s[i]);
    }
  }
  return g.selfadjointView<Eigen::Lower>();
}

struct GramEig {
  Eigen::VectorXd lambda;     // ascending
  Eigen::MatrixXcd vectors;   // empty unless requested
};

GramEig gram_spectrum(const Eigen::MatrixXcd& g, bool with_vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
      g, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNonConvergence, "Gram eigensolve failed");
  }
  GramEig out;
  out.lambda = eig.eigenvalues();
  const double lmax = out.lambda[out.lambda.size() - 1];
  if (!(lmax > 0.0) || out.lambda[0] < 1e-12 * lmax) {
    throw Error(ErrorCode::kSingularGram,
                "weighted Gram matrix is numerically singular");
  }
  if (with_vectors) out.vectors = eig.eigenvectors();
  return out;
}

double measure_from_lambda(const Eigen::VectorXd& lambda, int n_total,
                           ErrorMetric metric) {
  const int m = static_cast<int>(lambda.size());
  switch (metric) {
    case ErrorMetric::kMse:
      return lambda.cwiseInverse().sum();
    case ErrorMetric::kLce:
      return std::log(static_cast<double>(n_total)) -
             lambda.array().log().sum() / static_cast<double>(m);
    case ErrorMetric::kWev:
      return static_cast<double>(m) / lambda[0];
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown metric");
}

}  // namespace

ChannelSample sample_channel(const CorrelationMatrix& r, int m, std::uint64_t seed) {
  if (m <= 0) {
    throw Error(ErrorCode::kDimensionMismatch, "m must be positive");
  }
  const int n = r.n();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, kInvSqrt2);
  Eigen::MatrixXcd w(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      w(i, j) = std::complex<double>(re, im);
    }
  }
  return ChannelSample{r.sqrt() * w, seed};
}

double exact_measure(const ChannelSample& h,
                     const Eigen::Ref<const Eigen::VectorXd>& s,
                     ErrorMetric metric) {
  const GramEig eig =
      gram_spectrum(weighted_gram(h, s), false);
  return measure_from_lambda(eig.lambda, h.n(), metric);
}

double exact_measure(const ChannelSample& h, const SelectionVector& s,
                     ErrorMetric metric) {
  return exact_measure(h, Eigen::Ref<const Eigen::VectorXd>(s.weights()), metric);
}

double mse_exact(const ChannelSample& h, const SelectionVector& s) {
  return exact_measure(h, s, ErrorMetric::kMse);
}

double lce_exact(const ChannelSample& h, const SelectionVector& s) {
  return exact_measure(h, s, ErrorMetric::kLce);
}

double wev_exact(const ChannelSample& h, const SelectionVector& s) {
  return exact_measure(h, s, ErrorMetric::kWev);
}

Eigen::VectorXd exact_gradient(const ChannelSample& h,
                               const Eigen::Ref<const Eigen::VectorXd>& s,
                               ErrorMetric metric) {
  const Eigen::MatrixXcd g = weighted_gram(h, s);
  const GramEig eig = gram_spectrum(g, true);
  const int n = h.n();
  const int m = h.m();
  Eigen::VectorXd grad(n);
  switch (metric) {
    case ErrorMetric::kMse: {
      const Eigen::MatrixXcd ginv = eig.vectors *
                                    eig.lambda.cwiseInverse().asDiagonal() *
                                    eig.vectors.adjoint();
      const Eigen::MatrixXcd b = h.h * ginv;  // row i holds h_i^H G^{-1}
      grad = -b.rowwise().squaredNorm();
      break;
    }
    case ErrorMetric::kLce: {
      const Eigen::MatrixXcd ginv = eig.vectors *
                                    eig.lambda.cwiseInverse().asDiagonal() *
                                    eig.vectors.adjoint();
      const Eigen::MatrixXcd b = h.h * ginv;
      grad = -(b.cwiseProduct(h.h.conjugate())).rowwise().sum().real() /
             static_cast<double>(m);
      break;
    }
    case ErrorMetric::kWev: {
      // Gradient of lambda_min((1/m) G); simple eigenvalue assumed,
      // otherwise this is a valid subgradient.
      const Eigen::VectorXcd vmin = eig.vectors.col(0);
      grad = (h.h * vmin).cwiseAbs2() / static_cast<double>(m);
      break;
    }
  }
  return grad;
}

GramState make_gram_state(const ChannelSample& h, const SelectionVector& s) {
  if (s.n() != h.n()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "selection length does not match channel rows");
  }
  if (!s.is_binary()) {
    throw Error(ErrorCode::kInvalidArgument, "GramState requires a binary selection");
  }
  const Eigen::MatrixXcd g = weighted_gram(h, s.weights());
  const GramEig eig = gram_spectrum(g, true);
  GramState state{g,
                  eig.vectors * eig.lambda.cwiseInverse().asDiagonal() *
                      eig.vectors.adjoint(),
                  eig.lambda.array().log().sum(), s};
  return state;
}

GramState swap_update(const GramState& state, const ChannelSample& h, int remove,
                      int add) {
  if (state.selection.n() != h.n()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "state selection does not match channel rows");
  }
  SelectionVector next = state.selection.with_swap(remove, add);

  const Eigen::VectorXcd u = h.h.row(add).adjoint();
  const Eigen::VectorXcd gu = state.gram_inv * u;
  const double d1 = 1.0 + u.dot(gu).real();
  if (std::abs(d1) < 1e-12) {
    throw Error(ErrorCode::kUpdateSingular, "rank-one addition denominator vanished");
  }
  Eigen::MatrixXcd inv = state.gram_inv;
  inv.noalias() -= (gu * gu.adjoint()) / d1;
  double log_det = state.log_det + std::log(d1);

  const Eigen::VectorXcd v = h.h.row(remove).adjoint();
  const Eigen::VectorXcd av = inv * v;
  const double d2 = 1.0 - v.dot(av).real();
  if (d2 < 1e-12) {
    throw Error(ErrorCode::kUpdateSingular, "rank-one removal denominator vanished");
  }
  inv.noalias() += (av * av.adjoint()) / d2;
  log_det += std::log(d2);
  inv = 0.5 * (inv + inv.adjoint()).eval();

  Eigen::MatrixXcd gram = state.gram;
  gram.noalias() += u * u.adjoint();
  gram.noalias() -= v * v.adjoint();
  gram = 0.5 * (gram + gram.adjoint()).eval();

  return GramState{std::move(gram), std::move(inv), log_det, std::move(next)};
}

double gram_mse(const GramState& state) { return state.gram_inv.trace().real(); }

double gram_lce(const GramState& state, int n_total) {
  return std::log(static_cast<double>(n_total)) -
         state.log_det / static_cast<double>(state.gram.rows());
}

double gram_wev(const GramState& state) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(state.gram,
                                                      Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNonConvergence, "Gram eigensolve failed");
  }
  const double lmin = eig.eigenvalues()[0];
  if (!(lmin > 0.0)) {
    throw Error(ErrorCode::kSingularGram, "Gram matrix lost positive definiteness");
  }
  return static_cast<double>(state.gram.rows()) / lmin;
}

double gram_measure(const GramState& state, int n_total, ErrorMetric metric) {
  switch (metric) {
    case ErrorMetric::kMse: return gram_mse(state);
    case ErrorMetric::kLce: return gram_lce(state, n_total);
    case ErrorMetric::kWev: return gram_wev(state);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown metric");
}

}  // namespace rmtsel
