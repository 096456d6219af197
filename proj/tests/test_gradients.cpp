// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "rmtsel/detequiv.hpp"
#include "rmtsel/gradients.hpp"
#include "test_util.hpp"

using namespace rmtsel;

namespace {

double bar_value(const CorrelationMatrix& r, const Eigen::VectorXd& s, int m,
                 ErrorMetric metric) {
  switch (metric) {
    case ErrorMetric::kMse: return mse_bar(r, s, m).value;
    case ErrorMetric::kLce: return lce_bar(r, s, m).value;
    default: return lambda_min_bar(r, s, m).value;
  }
}

Eigen::VectorXd central_difference(const CorrelationMatrix& r,
                                   const Eigen::VectorXd& s, int m,
                                   ErrorMetric metric, double step) {
  Eigen::VectorXd fd(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    Eigen::VectorXd up = s, dn = s;
    up[i] += step;
    dn[i] -= step;
    fd[i] = (bar_value(r, up, m, metric) - bar_value(r, dn, m, metric)) /
            (2.0 * step);
  }
  return fd;
}

}  // namespace

TEST_CASE("uncorrelated gradient closed forms") {
  const int n = 100, m = 30, k = 50;
  CorrelationMatrix r{Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n))};
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  s.head(k).setOnes();

  // delta = 1.5; selected entries see -delta/k, unselected
  // -delta (1+delta)^2 / k.
  Eigen::VectorXd g = grad_mse_bar(r, s, m);
  CHECK(g[0] == doctest::Approx(-0.03).epsilon(1e-11));
  CHECK(g[k] == doctest::Approx(-0.1875).epsilon(1e-11));

  // Same structure pushed through the log-volume expression.
  Eigen::VectorXd gl = grad_lce_bar(r, s, m);
  CHECK(gl[0] == doctest::Approx(-0.02).epsilon(1e-11));
  CHECK(gl[k] == doctest::Approx(-0.05).epsilon(1e-11));

  // Edge gradient: the eta' terms cancel at the fixed point and the
  // diagonal term survives, (1/m)(1+eta s_i)^{-2}.
  const double edge_sel =
      std::pow(std::sqrt(50.0) - std::sqrt(30.0), 2.0) / (m * k);
  Eigen::VectorXd ge = grad_lambda_min_bar(r, s, m);
  CHECK(ge[0] == doctest::Approx(edge_sel).epsilon(1e-9));
  CHECK(ge[k] == doctest::Approx(1.0 / m).epsilon(1e-9));
}

TEST_CASE("analytic gradients match central differences") {
  const int n = 40, m = 12;
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  for (int point = 0; point < 5; ++point) {
    CorrelationMatrix r =
        testutil::random_correlation(n, 400 + static_cast<std::uint64_t>(point));
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s[i] = unif(rng);

    for (ErrorMetric metric :
         {ErrorMetric::kMse, ErrorMetric::kLce, ErrorMetric::kWev}) {
      BarValueGrad bg = bar_value_and_grad(r, s, m, metric);
      Eigen::VectorXd fd = central_difference(r, s, m, metric, 1e-6);
      const double rel = (bg.grad - fd).norm() / fd.norm();
      CHECK(rel <= (metric == ErrorMetric::kWev ? 1e-4 : 1e-5));
    }
  }
}

TEST_CASE("gradient output is consistent with the equivalents") {
  CorrelationMatrix r = testutil::random_correlation_complex(24, 5);
  Eigen::VectorXd s = Eigen::VectorXd::Constant(24, 0.45);
  const int m = 7;

  BarValueGrad mse = bar_value_and_grad(r, s, m, ErrorMetric::kMse);
  CHECK(mse.value == doctest::Approx(mse_bar(r, s, m).value).epsilon(1e-12));
  CHECK(mse.scalar == doctest::Approx(mse_bar(r, s, m).scalar).epsilon(1e-12));

  BarValueGrad lce = bar_value_and_grad(r, s, m, ErrorMetric::kLce);
  CHECK(lce.value == doctest::Approx(lce_bar(r, s, m).value).epsilon(1e-12));

  BarValueGrad wev = bar_value_and_grad(r, s, m, ErrorMetric::kWev);
  CHECK(wev.value == doctest::Approx(lambda_min_bar(r, s, m).value).epsilon(1e-10));

  // Wrapper functions reuse the same computation.
  CHECK((grad_mse_bar(r, s, m) - mse.grad).norm() == 0.0);
  CHECK((grad_lce_bar(r, s, m) - lce.grad).norm() == 0.0);
  CHECK((grad_lambda_min_bar(r, s, m) - wev.grad).norm() == 0.0);
}

TEST_CASE("reported worst-case figure follows the chain rule") {
  CorrelationMatrix r = testutil::random_correlation(20, 8);
  Eigen::VectorXd s = Eigen::VectorXd::Constant(20, 0.6);
  const int m = 6;

  BarValueGrad edge = bar_value_and_grad(r, s, m, ErrorMetric::kWev);
  // d(1/f) = -f'/f^2 against a finite difference of the reported value.
  const double step = 1e-6;
  for (int i : {0, 7, 19}) {
    Eigen::VectorXd up = s, dn = s;
    up[i] += step;
    dn[i] -= step;
    const double fd =
        (wev_bar(r, up, m).value - wev_bar(r, dn, m).value) / (2.0 * step);
    const double chain = -edge.grad[i] / (edge.value * edge.value);
    CHECK(fd == doctest::Approx(chain).epsilon(1e-5));
  }
}

TEST_CASE("MSE equivalent strictly improves in every coordinate") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    CorrelationMatrix r = testutil::random_correlation(18, seed + 70);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    Eigen::VectorXd s(18);
    for (int i = 0; i < 18; ++i) s[i] = unif(rng);
    Eigen::VectorXd g = grad_mse_bar(r, s, 5);
    CHECK(g.maxCoeff() < 0.0);
  }
}

TEST_CASE("gradients are equivariant under relabeling") {
  const int n = 16, m = 4;
  CorrelationMatrix r = testutil::random_correlation_complex(n, 91);
  Eigen::VectorXd s(n);
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  for (int i = 0; i < n; ++i) s[i] = unif(rng);

  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXcd rp(n, n);
  Eigen::VectorXd sp(n);
  for (int i = 0; i < n; ++i) {
    sp[perm[i]] = s[i];
    for (int j = 0; j < n; ++j) rp(perm[i], perm[j]) = r.matrix()(i, j);
  }
  CorrelationMatrix r2(rp);

  for (ErrorMetric metric :
       {ErrorMetric::kMse, ErrorMetric::kLce, ErrorMetric::kWev}) {
    Eigen::VectorXd g = bar_value_and_grad(r, s, m, metric).grad;
    Eigen::VectorXd g2 = bar_value_and_grad(r2, sp, m, metric).grad;
    for (int i = 0; i < n; ++i) {
      CHECK(g[i] == doctest::Approx(g2[perm[i]]).epsilon(1e-10));
    }
  }
}

TEST_CASE("degenerate spectra are reported, not silently differentiated") {
  // Two equal eigenvalues scaled so the edge stays barely positive while
  // the eta-derivative denominator collapses below its guard.
  CorrelationMatrix tiny{Eigen::MatrixXd(7e-12 * Eigen::MatrixXd::Identity(2, 2))};
  Eigen::VectorXd ones2 = Eigen::VectorXd::Ones(2);
  CHECK_RMTSEL_ERROR(bar_value_and_grad(tiny, ones2, 1, ErrorMetric::kWev),
                     kEdgeDegenerate);

  // Insufficient rank surfaces from the underlying solver.
  CorrelationMatrix eye{Eigen::MatrixXd(Eigen::MatrixXd::Identity(10, 10))};
  Eigen::VectorXd s = Eigen::VectorXd::Zero(10);
  s.head(3).setOnes();
  CHECK_RMTSEL_ERROR(bar_value_and_grad(eye, s, 3, ErrorMetric::kMse), kNoRoot);
  CHECK_RMTSEL_ERROR(bar_value_and_grad(eye, s, 3, ErrorMetric::kWev), kNoRoot);
}
