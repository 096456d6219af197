// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include <doctest.h>

#include <Eigen/Dense>
#include <complex>

#include "rmtsel/types.hpp"
#include "test_util.hpp"

using rmtsel::CorrelationMatrix;
using rmtsel::ErrorCode;
using rmtsel::ProblemDims;
using rmtsel::SelectionVector;

TEST_CASE("ProblemDims accepts the standard geometry and rejects bad budgets") {
  ProblemDims ok{100, 30, 50};
  CHECK_NOTHROW(ok.validate());

  CHECK_RMTSEL_ERROR((ProblemDims{4, 2, 2}.validate()), kBudgetInfeasible);
  CHECK_RMTSEL_ERROR((ProblemDims{4, 2, 5}.validate()), kBudgetInfeasible);
  CHECK_RMTSEL_ERROR((ProblemDims{0, 2, 3}.validate()), kDimensionMismatch);
  CHECK_RMTSEL_ERROR((ProblemDims{4, 0, 3}.validate()), kDimensionMismatch);
}

TEST_CASE("CorrelationMatrix square root round-trips") {
  SUBCASE("identity") {
    CorrelationMatrix r(Eigen::MatrixXd(Eigen::MatrixXd::Identity(5, 5)));
    CHECK(r.is_real());
    CHECK((r.sqrt() - Eigen::MatrixXcd::Identity(5, 5)).norm() <= 1e-12);
  }

  SUBCASE("known 2x2 spectrum") {
    Eigen::MatrixXd m(2, 2);
    m << 2.0, 1.0, 1.0, 2.0;
    CorrelationMatrix r(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r.sqrt());
    CHECK(eig.eigenvalues()(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues()(1) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  }

  SUBCASE("random real and complex instances") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CorrelationMatrix rr = testutil::random_correlation(20, seed);
      double rel = (rr.sqrt() * rr.sqrt() - rr.matrix()).norm() / rr.matrix().norm();
      CHECK(rel <= 1e-10);

      CorrelationMatrix rc = testutil::random_correlation_complex(20, seed);
      CHECK_FALSE(rc.is_real());
      rel = (rc.sqrt() * rc.sqrt() - rc.matrix()).norm() / rc.matrix().norm();
      CHECK(rel <= 1e-10);
    }
  }
}

TEST_CASE("CorrelationMatrix rejects invalid inputs") {
  SUBCASE("indefinite matrix") {
    // Off-diagonal 2 with unit diagonal has eigenvalue 1 - 2 < 0.
    Eigen::MatrixXd m(3, 3);
    m << 1.0, 2.0, 0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 1.0;
    CHECK_RMTSEL_ERROR(CorrelationMatrix(m), kNotPsd);
  }

  SUBCASE("non-Hermitian matrix") {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.5, -0.5, 1.0;
    CHECK_RMTSEL_ERROR(CorrelationMatrix(m), kNotPsd);
  }

  SUBCASE("non-square matrix") {
    CHECK_RMTSEL_ERROR(CorrelationMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Ones(2, 3))),
                       kDimensionMismatch);
  }

  SUBCASE("roundoff-level negative eigenvalue clamps to zero") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1e-14;
    CorrelationMatrix r(m);
    Eigen::MatrixXcd sq = r.sqrt() * r.sqrt();
    CHECK(std::abs(sq(0, 0).real() - 1.0) <= 1e-12);
    CHECK(std::abs(sq(1, 1)) <= 1e-12);
  }
}

TEST_CASE("SelectionVector binary mode") {
  SelectionVector s = SelectionVector::binary({1, 3}, 5);
  CHECK(s.n() == 5);
  CHECK(s.is_binary());
  CHECK(s.support_size() == 2);
  CHECK(s.sum() == doctest::Approx(2.0));
  CHECK_FALSE(s.selected(0));
  CHECK(s.selected(1));
  CHECK(s.selected(3));

  SUBCASE("index round trip is the identity") {
    std::vector<int> idx = s.indices();
    CHECK(idx == std::vector<int>{1, 3});
    SelectionVector rebuilt = SelectionVector::binary(idx, s.n());
    CHECK((rebuilt.weights() - s.weights()).norm() == 0.0);
  }

  SUBCASE("invalid constructions") {
    CHECK_RMTSEL_ERROR(SelectionVector::binary({5}, 5), kInvalidArgument);
    CHECK_RMTSEL_ERROR(SelectionVector::binary({-1}, 5), kInvalidArgument);
    CHECK_RMTSEL_ERROR(SelectionVector::binary({2, 2}, 5), kInvalidArgument);
    Eigen::VectorXd half(2);
    half << 1.0, 0.5;
    CHECK_RMTSEL_ERROR(SelectionVector::binary_from_mask(half), kInvalidArgument);
  }

  SUBCASE("swap semantics") {
    SelectionVector t = s.with_swap(1, 0);
    CHECK(t.indices() == std::vector<int>{0, 3});
    // Source selection is untouched.
    CHECK(s.indices() == std::vector<int>{1, 3});

    CHECK_RMTSEL_ERROR(s.with_swap(0, 2), kInvalidArgument);  // remove unselected
    CHECK_RMTSEL_ERROR(s.with_swap(1, 3), kInvalidArgument);  // add selected
    CHECK_RMTSEL_ERROR(s.with_swap(1, 1), kInvalidArgument);  // remove == add
  }
}

TEST_CASE("SelectionVector relaxed mode") {
  Eigen::VectorXd w(4);
  w << 0.0, 0.25, 1.0, 0.75;
  SelectionVector s = SelectionVector::relaxed(w);
  CHECK_FALSE(s.is_binary());
  CHECK(s.sum() == doctest::Approx(2.0));
  CHECK(s.support_size() == 3);
  CHECK_RMTSEL_ERROR(s.indices(), kInvalidArgument);
  CHECK_RMTSEL_ERROR(s.with_swap(2, 0), kInvalidArgument);

  Eigen::VectorXd bad(2);
  bad << -0.1, 0.5;
  CHECK_RMTSEL_ERROR(SelectionVector::relaxed(bad), kInvalidArgument);
  bad << 0.1, 1.5;
  CHECK_RMTSEL_ERROR(SelectionVector::relaxed(bad), kInvalidArgument);
}

TEST_CASE("validate ties dims and selection together") {
  ProblemDims dims{100, 30, 50};
  SelectionVector good = testutil::random_binary(100, 50, 7);
  CHECK_NOTHROW(rmtsel::validate(dims, good));

  SelectionVector short_vec = testutil::random_binary(99, 50, 7);
  CHECK_RMTSEL_ERROR(rmtsel::validate(dims, short_vec), kDimensionMismatch);

  SelectionVector wrong_budget = testutil::random_binary(100, 49, 7);
  CHECK_RMTSEL_ERROR(rmtsel::validate(dims, wrong_budget), kBudgetInfeasible);
}
