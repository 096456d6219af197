// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "rmtsel/scenarios.hpp"
#include "test_util.hpp"

using namespace rmtsel;

TEST_CASE("antenna correlation kernel entries") {
  MimoParams p;
  p.n = 20;
  p.m = 4;
  p.k = 10;

  SUBCASE("spacing two") {
    p.d = 2.0;
    Scenario sc = make_mimo(p);
    CHECK(sc.id == "mimo-d2");
    const Eigen::MatrixXd r = sc.r.real_matrix();
    CHECK(r(3, 4) == doctest::Approx(std::exp(-0.2)).epsilon(1e-12));
    CHECK(r.diagonal().isOnes(1e-15));
  }

  SUBCASE("spacing four reaches the near-uncorrelated regime") {
    p.d = 4.0;
    Scenario sc = make_mimo(p);
    const Eigen::MatrixXd r = sc.r.real_matrix();
    CHECK(r(0, 3) == doctest::Approx(std::exp(-7.2)).epsilon(1e-12));
    CHECK(r(0, 3) <= 1e-3);
  }

  SUBCASE("entries depend only on the index distance") {
    p.d = 1.0;
    Scenario sc = make_mimo(p);
    const Eigen::MatrixXd r = sc.r.real_matrix();
    for (int i = 0; i + 5 < 20; ++i) {
      CHECK(r(i, i + 5) == doctest::Approx(r(0, 5)).epsilon(1e-15));
      CHECK(r(i, i + 5) == doctest::Approx(r(i + 5, i)).epsilon(1e-15));
    }
  }

  SUBCASE("invalid spacing") {
    p.d = 0.0;
    CHECK_RMTSEL_ERROR(make_mimo(p), kInvalidArgument);
  }
}

TEST_CASE("sensor placement is area-uniform on the disk") {
  Eigen::MatrixXd pos = place_sensors(100000, 30.0, 99);
  REQUIRE(pos.rows() == 100000);

  double sq_acc = 0.0;
  double max_r = 0.0;
  for (int i = 0; i < pos.rows(); ++i) {
    const double sq = pos.row(i).squaredNorm();
    sq_acc += sq;
    max_r = std::max(max_r, std::sqrt(sq));
  }
  CHECK(max_r <= 30.0);
  // E r^2 = radius^2 / 2 for an area-uniform draw.
  CHECK(std::abs(sq_acc / pos.rows() - 450.0) <= 0.02 * 450.0);

  SUBCASE("fixed seed gives a fixed layout") {
    Eigen::MatrixXd again = place_sensors(100, 30.0, 12345);
    Eigen::MatrixXd twice = place_sensors(100, 30.0, 12345);
    CHECK((again - twice).cwiseAbs().maxCoeff() == 0.0);
    Eigen::MatrixXd other = place_sensors(100, 30.0, 12346);
    CHECK((again - other).cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("field covariance inversion against a dense oracle") {
  Eigen::MatrixXd pos(5, 2);
  pos << 0.0, 0.0, 3.0, 0.0, 0.0, 4.0, -2.0, 1.0, 5.0, -3.0;
  const double rho = 0.25, sigma2 = 1.5;

  Eigen::MatrixXd phi(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      phi(i, j) = sigma2 * std::exp(-rho * (pos.row(i) - pos.row(j)).norm());

  CHECK(phi(0, 1) == doctest::Approx(sigma2 * std::exp(-0.75)).epsilon(1e-12));
  CHECK(phi(1, 2) == doctest::Approx(sigma2 * std::exp(-1.25)).epsilon(1e-12));

  CorrelationMatrix r = wsn_correlation(pos, rho, sigma2);
  Eigen::MatrixXd oracle = phi.inverse();
  CHECK((r.real_matrix() - oracle).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((phi * r.real_matrix() - Eigen::MatrixXd::Identity(5, 5)).norm() <= 1e-8);
}

TEST_CASE("degenerate and limiting sensor layouts") {
  SUBCASE("duplicate positions are rejected") {
    Eigen::MatrixXd pos(3, 2);
    pos << 1.0, 2.0, 1.0, 2.0, 4.0, 5.0;
    CHECK_RMTSEL_ERROR(wsn_correlation(pos, 0.1, 1.0), kIllConditioned);
  }

  SUBCASE("fast decay collapses to scaled identity") {
    Eigen::MatrixXd pos(4, 2);
    pos << 0.0, 0.0, 5.0, 0.0, 0.0, 5.0, 7.0, 3.0;
    const double sigma2 = 2.0;
    CorrelationMatrix r = wsn_correlation(pos, 1e3, sigma2);
    Eigen::MatrixXd expect = (1.0 / sigma2) * Eigen::MatrixXd::Identity(4, 4);
    CHECK((r.real_matrix() - expect).cwiseAbs().maxCoeff() <= 1e-6);
  }

  SUBCASE("relabeling sensors relabels the correlation") {
    Eigen::MatrixXd pos(4, 2);
    pos << 0.0, 0.0, 6.0, 1.0, -3.0, 2.0, 2.0, -5.0;
    CorrelationMatrix r = wsn_correlation(pos, 0.2, 1.0);

    const int perm[4] = {2, 0, 3, 1};
    Eigen::MatrixXd pos2(4, 2);
    for (int i = 0; i < 4; ++i) pos2.row(perm[i]) = pos.row(i);
    CorrelationMatrix r2 = wsn_correlation(pos2, 0.2, 1.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(r.real_matrix()(i, j) ==
              doctest::Approx(r2.real_matrix()(perm[i], perm[j])).epsilon(1e-10));
  }
}

TEST_CASE("sensor scenario assembles placement and inversion") {
  WsnParams p;
  p.n = 40;
  p.m = 10;
  p.k = 20;
  p.placement_seed = 777;
  Scenario sc = make_wsn(p);
  CHECK(sc.id == "wsn");
  CHECK(sc.positions.rows() == 40);
  CHECK((sc.positions - place_sensors(40, p.radius, 777)).cwiseAbs().maxCoeff() ==
        0.0);

  // Rebuild the covariance from the stored positions; its product with
  // the scenario correlation is the identity.
  Eigen::MatrixXd phi(40, 40);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j)
      phi(i, j) = p.sigma2 * std::exp(-p.decay_rho *
                                      (sc.positions.row(i) - sc.positions.row(j)).norm());
  CHECK((phi * sc.r.real_matrix() - Eigen::MatrixXd::Identity(40, 40))
            .operatorNorm() <= 1e-8);
}

TEST_CASE("presets resolve by name") {
  Scenario d1 = make_preset("mimo-d1");
  CHECK(d1.id == "mimo-d1");
  CHECK(d1.dims.n == 100);
  CHECK(d1.dims.m == 30);
  CHECK(d1.dims.k == 50);
  CHECK(d1.snr_db == 20.0);
  CHECK(d1.r.real_matrix()(0, 1) == doctest::Approx(std::exp(-0.05)).epsilon(1e-12));

  Scenario d4 = make_preset("mimo-d4");
  CHECK(d4.r.real_matrix()(0, 1) == doctest::Approx(std::exp(-0.8)).epsilon(1e-12));

  Scenario wsn = make_preset("wsn");
  CHECK(wsn.dims.n == 100);
  CHECK(wsn.positions.rows() == 100);

  CHECK_RMTSEL_ERROR(make_preset("mimo-d3x"), kConfig);
}
