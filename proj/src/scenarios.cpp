// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include "rmtsel/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

namespace rmtsel {

Scenario make_mimo(const MimoParams& params) {
  ProblemDims dims{params.n, params.m, params.k};
  dims.validate();
  if (params.d <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "antenna spacing d must be positive");
  }
  Eigen::MatrixXd r(params.n, params.n);
  const double a = 0.05 * params.d * params.d;
  for (int i = 0; i < params.n; ++i) {
    for (int j = 0; j < params.n; ++j) {
      const double diff = static_cast<double>(i - j);
      r(i, j) = std::exp(-a * diff * diff);
    }
  }
  std::string spacing;
  if (params.d == std::floor(params.d) && params.d < 1e15) {
    spacing = std::to_string(static_cast<long long>(params.d));
  } else {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", params.d);
    spacing = buf;
  }
  return Scenario{"mimo-d" + spacing, dims, CorrelationMatrix(r), params.snr_db,
                  Eigen::MatrixXd()};
}

Eigen::MatrixXd place_sensors(int n, double radius, std::uint64_t seed) {
  if (n <= 0 || radius <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "need n > 0 and radius > 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd pos(n, 2);
  for (int i = 0; i < n; ++i) {
    const double rad = radius * std::sqrt(unit(rng));
    const double ang = 2.0 * M_PI * unit(rng);
    pos(i, 0) = rad * std::cos(ang);
    pos(i, 1) = rad * std::sin(ang);
  }
  return pos;
}

CorrelationMatrix wsn_correlation(const Eigen::MatrixXd& positions,
                                  double decay_rho, double sigma2) {
  if (positions.rows() < 1 || positions.cols() != 2) {
    throw Error(ErrorCode::kDimensionMismatch, "positions must be n x 2");
  }
  if (sigma2 <= 0.0 || decay_rho <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sigma2 and decay_rho must be positive");
  }
  const int n = static_cast<int>(positions.rows());
  Eigen::MatrixXd phi(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double dist = (positions.row(i) - positions.row(j)).norm();
      phi(i, j) = sigma2 * std::exp(-decay_rho * dist);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(phi);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNonConvergence, "field covariance eigensolve failed");
  }
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmax / lmin > 1e12) {
    throw Error(ErrorCode::kIllConditioned,
                "field covariance condition number exceeds 1e12");
  }
  Eigen::MatrixXd r = eig.eigenvectors() *
                      eig.eigenvalues().cwiseInverse().asDiagonal() *
                      eig.eigenvectors().transpose();
  r = 0.5 * (r + r.transpose()).eval();
  return CorrelationMatrix(r);
}

Scenario make_wsn(const WsnParams& params) {
  ProblemDims dims{params.n, params.m, params.k};
  dims.validate();
  if (params.radius <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "radius must be positive");
  }
  Eigen::MatrixXd pos = place_sensors(params.n, params.radius, params.placement_seed);
  return Scenario{"wsn", dims, wsn_correlation(pos, params.decay_rho, params.sigma2),
                  params.snr_db, pos};
}

Scenario make_preset(const std::string& name) {
  if (name == "mimo-d1") {
    MimoParams p;
    p.d = 1.0;
    return make_mimo(p);
  }
  if (name == "mimo-d2") {
    return make_mimo(MimoParams{});
  }
  if (name == "mimo-d4") {
    MimoParams p;
    p.d = 4.0;
    return make_mimo(p);
  }
  if (name == "wsn") {
    return make_wsn(WsnParams{});
  }
  throw Error(ErrorCode::kConfig, "unknown scenario preset: " + name);
}

}  // namespace rmtsel
