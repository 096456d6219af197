// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "rmtsel/channel.hpp"
#include "rmtsel/scenarios.hpp"
#include "test_util.hpp"

using namespace rmtsel;

namespace {

ChannelSample fixed_ones_channel() {
  // H = [1; 1; 1], the n=3, m=1 hand example.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Ones(3, 1);
  return ChannelSample{h, 0};
}

// Naive route: materialize the selected rows and apply the textbook
// formulas through dense inverses and log-determinants.
double naive_measure(const ChannelSample& h, const SelectionVector& s,
                     ErrorMetric metric) {
  const std::vector<int> idx = s.indices();
  const int m = h.m();
  Eigen::MatrixXcd rows(static_cast<int>(idx.size()), m);
  for (size_t r = 0; r < idx.size(); ++r) rows.row(static_cast<int>(r)) = h.h.row(idx[r]);
  Eigen::MatrixXcd g = rows.adjoint() * rows;
  switch (metric) {
    case ErrorMetric::kMse:
      return g.inverse().trace().real();
    case ErrorMetric::kLce: {
      const double logdet = std::log(
          ((1.0 / h.n()) * g).determinant().real());
      return -logdet / m;
    }
    default: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g);
      return m / eig.eigenvalues()(0);
    }
  }
}

}  // namespace

TEST_CASE("hand-computed single-parameter measures") {
  ChannelSample h = fixed_ones_channel();
  SelectionVector s = SelectionVector::binary({0, 1}, 3);
  CHECK(mse_exact(h, s) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lce_exact(h, s) == doctest::Approx(std::log(1.5)).epsilon(1e-12));
  CHECK(wev_exact(h, s) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("channel draws are reproducible and follow the documented order") {
  CorrelationMatrix r = testutil::random_correlation(12, 3);
  ChannelSample a = sample_channel(r, 4, 42);
  ChannelSample b = sample_channel(r, 4, 42);
  CHECK((a.h - b.h).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.seed == 42);

  ChannelSample c = sample_channel(r, 4, 43);
  CHECK((a.h - c.h).cwiseAbs().maxCoeff() > 0.0);

  // Recompute W with the stated generator contract: mt19937_64, normal
  // stddev 1/sqrt(2), row-major entries, real part before imaginary.
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
  Eigen::MatrixXcd w(12, 4);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      w(i, j) = std::complex<double>(re, im);
    }
  }
  CHECK((a.h - r.sqrt() * w).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("channel entries carry unit variance") {
  CorrelationMatrix r{Eigen::MatrixXd(Eigen::MatrixXd::Identity(100, 100))};
  double acc = 0.0;
  int entries = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    ChannelSample h = sample_channel(r, 30, 900 + seed);
    acc += h.h.cwiseAbs2().sum();
    entries += 100 * 30;
  }
  CHECK(entries >= 100000);
  CHECK(acc / entries >= 0.99);
  CHECK(acc / entries <= 1.01);
}

TEST_CASE("Frobenius moment matches the correlation trace") {
  Scenario sc = make_preset("mimo-d2");
  const double expect = sc.r.matrix().trace().real() / sc.dims.n;
  double acc = 0.0;
  const int draws = 100;
  for (int i = 0; i < draws; ++i) {
    ChannelSample h = sample_channel(sc.r, sc.dims.m, 500 + static_cast<std::uint64_t>(i));
    acc += h.h.cwiseAbs2().sum() / (sc.dims.n * sc.dims.m);
  }
  const double mean = acc / draws;
  CHECK(std::abs(mean - expect) <= 0.02 * expect);
}

TEST_CASE("uncorrelated Monte Carlo means land on the Wishart values") {
  CorrelationMatrix r{Eigen::MatrixXd(Eigen::MatrixXd::Identity(100, 100))};
  SelectionVector s = testutil::random_binary(100, 50, 11);
  const int m = 30;
  double mse_acc = 0.0, wev_acc = 0.0;
  const int draws = 500;
  for (int i = 0; i < draws; ++i) {
    ChannelSample h = sample_channel(r, m, 7000 + static_cast<std::uint64_t>(i));
    mse_acc += mse_exact(h, s);
    wev_acc += wev_exact(h, s);
  }
  // E trace(G^{-1}) = m/(k-m) for a complex Wishart Gram.
  CHECK(std::abs(mse_acc / draws - 1.5) <= 0.03 * 1.5);
  // The asymptotic edge reciprocal is approached from below and slowly:
  // the smallest eigenvalue concentrates above the limiting support
  // endpoint with O(k^{-2/3}) fluctuations, giving a one-sided ~30% gap
  // at k=50 (measured 12.8% at k=200, 7.8% at k=500, same aspect).
  const double wev_expect =
      30.0 / std::pow(std::sqrt(50.0) - std::sqrt(30.0), 2.0);
  CHECK(wev_acc / draws < wev_expect);
  CHECK(std::abs(wev_acc / draws - wev_expect) <= 0.35 * wev_expect);
}

TEST_CASE("measures agree with the naive dense route") {
  CorrelationMatrix r = testutil::random_correlation_complex(20, 6);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ChannelSample h = sample_channel(r, 5, seed);
    SelectionVector s = testutil::random_binary(20, 9, seed + 40);
    for (ErrorMetric metric :
         {ErrorMetric::kMse, ErrorMetric::kLce, ErrorMetric::kWev}) {
      const double fast = exact_measure(h, s, metric);
      const double slow = naive_measure(h, s, metric);
      CHECK(fast == doctest::Approx(slow).epsilon(1e-10));
    }
  }
}

TEST_CASE("eigenvalue-trace inequality bounds the worst direction") {
  CorrelationMatrix r = testutil::random_correlation(25, 2);
  ChannelSample h = sample_channel(r, 6, 88);
  SelectionVector s = testutil::random_binary(25, 12, 3);
  // lambda_min(G) <= trace(G)/m, expressed through the reported measures.
  const double lam_min = h.m() / wev_exact(h, s);
  const std::vector<int> idx = s.indices();
  double trace = 0.0;
  for (int i : idx) trace += h.h.row(i).squaredNorm();
  CHECK(lam_min <= trace / h.m() + 1e-12);
}

TEST_CASE("rank-deficient selections raise SingularGram") {
  CorrelationMatrix r = testutil::random_correlation(10, 5);
  ChannelSample h = sample_channel(r, 4, 9);
  // Two rows cannot span a rank-4 Gram matrix.
  SelectionVector s = SelectionVector::binary({0, 1}, 10);
  CHECK_RMTSEL_ERROR(mse_exact(h, s), kSingularGram);
  CHECK_RMTSEL_ERROR(lce_exact(h, s), kSingularGram);
  CHECK_RMTSEL_ERROR(wev_exact(h, s), kSingularGram);
}

TEST_CASE("measures scale with the channel amplitude") {
  CorrelationMatrix r = testutil::random_correlation(14, 7);
  ChannelSample h = sample_channel(r, 4, 31);
  SelectionVector s = testutil::random_binary(14, 8, 12);
  const double alpha = 2.5;
  ChannelSample ha{alpha * h.h, h.seed};

  CHECK(mse_exact(ha, s) ==
        doctest::Approx(mse_exact(h, s) / (alpha * alpha)).epsilon(1e-10));
  CHECK(lce_exact(ha, s) ==
        doctest::Approx(lce_exact(h, s) - 2.0 * std::log(alpha)).epsilon(1e-10));
  CHECK(wev_exact(ha, s) ==
        doctest::Approx(wev_exact(h, s) / (alpha * alpha)).epsilon(1e-10));
}

TEST_CASE("adding a measurement never hurts MSE or WEV") {
  CorrelationMatrix r = testutil::random_correlation(16, 13);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    ChannelSample h = sample_channel(r, 5, seed);
    SelectionVector s = testutil::random_binary(16, 8, seed + 60);
    int extra = 0;
    while (s.selected(extra)) ++extra;
    std::vector<int> grown = s.indices();
    grown.push_back(extra);
    SelectionVector sg = SelectionVector::binary(grown, 16);

    CHECK(mse_exact(h, sg) <= mse_exact(h, s) + 1e-12);
    CHECK(wev_exact(h, sg) <= wev_exact(h, s) + 1e-12);
  }
}

TEST_CASE("gram state tracks the dense factorization") {
  CorrelationMatrix r = testutil::random_correlation_complex(20, 21);
  ChannelSample h = sample_channel(r, 5, 14);
  SelectionVector s = testutil::random_binary(20, 10, 4);
  GramState state = make_gram_state(h, s);

  const int m = h.m();
  CHECK((state.gram * state.gram_inv - Eigen::MatrixXcd::Identity(m, m))
            .operatorNorm() <= 1e-8);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(state.gram);
  const double logdet = eig.eigenvalues().array().log().sum();
  CHECK(state.log_det == doctest::Approx(logdet).epsilon(1e-8));

  CHECK(mse_exact(h, s) ==
        doctest::Approx(state.gram_inv.trace().real()).epsilon(1e-10));
  for (ErrorMetric metric :
       {ErrorMetric::kMse, ErrorMetric::kLce, ErrorMetric::kWev}) {
    CHECK(gram_measure(state, h.n(), metric) ==
          doctest::Approx(exact_measure(h, s, metric)).epsilon(1e-9));
  }
}

TEST_CASE("swap updates match dense recomputation") {
  CorrelationMatrix r = testutil::random_correlation_complex(20, 30);
  ChannelSample h = sample_channel(r, 5, 77);
  SelectionVector s0 = testutil::random_binary(20, 9, 8);
  GramState state = make_gram_state(h, s0);

  std::mt19937_64 rng(19);
  for (int step = 0; step < 500; ++step) {
    const std::vector<int> in = state.selection.indices();
    std::vector<int> out;
    for (int i = 0; i < 20; ++i)
      if (!state.selection.selected(i)) out.push_back(i);
    const int remove = in[rng() % in.size()];
    const int add = out[rng() % out.size()];

    state = swap_update(state, h, remove, add);
    GramState fresh = make_gram_state(h, state.selection);
    CHECK((state.gram_inv - fresh.gram_inv).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(std::abs(state.log_det - fresh.log_det) <= 1e-8);
  }
}

TEST_CASE("swap then swap back restores the state") {
  CorrelationMatrix r = testutil::random_correlation(15, 44);
  ChannelSample h = sample_channel(r, 4, 90);
  SelectionVector s = testutil::random_binary(15, 7, 2);
  GramState base = make_gram_state(h, s);

  int add = 0;
  while (s.selected(add)) ++add;
  GramState there = swap_update(base, h, s.indices()[0], add);
  GramState back = swap_update(there, h, add, s.indices()[0]);

  CHECK((back.gram_inv - base.gram_inv).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(std::abs(back.log_det - base.log_det) <= 1e-10);
}

TEST_CASE("degenerate swaps are rejected") {
  // Rows 0, 1, 3 share one direction; swapping row 2 out of {0,1,2}
  // for row 3 collapses the Gram matrix and must signal the caller.
  Eigen::MatrixXcd rows(4, 2);
  rows << 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0;
  ChannelSample h{rows, 0};
  GramState state = make_gram_state(h, SelectionVector::binary({0, 1, 2}, 4));

  CHECK_RMTSEL_ERROR(swap_update(state, h, 2, 3), kUpdateSingular);
  // Identical indices violate the swap precondition outright.
  CHECK_RMTSEL_ERROR(swap_update(state, h, 2, 2), kInvalidArgument);
}

TEST_CASE("exact gradients match finite differences") {
  CorrelationMatrix r = testutil::random_correlation_complex(12, 50);
  ChannelSample h = sample_channel(r, 4, 33);
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unif(0.3, 0.9);
  Eigen::VectorXd s(12);
  for (int i = 0; i < 12; ++i) s[i] = unif(rng);

  const double step = 1e-6;
  for (ErrorMetric metric :
       {ErrorMetric::kMse, ErrorMetric::kLce, ErrorMetric::kWev}) {
    // For WEV the analytic vector differentiates lambda_min of the
    // scaled Gram matrix, so difference that same function.
    auto f = [&](const Eigen::VectorXd& x) {
      if (metric == ErrorMetric::kWev)
        return 1.0 / exact_measure(h, x, ErrorMetric::kWev);
      return exact_measure(h, x, metric);
    };
    Eigen::VectorXd grad = exact_gradient(h, s, metric);
    Eigen::VectorXd fd(12);
    for (int i = 0; i < 12; ++i) {
      Eigen::VectorXd up = s, dn = s;
      up[i] += step;
      dn[i] -= step;
      fd[i] = (f(up) - f(dn)) / (2.0 * step);
    }
    CHECK((grad - fd).norm() / std::max(1e-12, fd.norm()) <= 1e-5);
  }
}
