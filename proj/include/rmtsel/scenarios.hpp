// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#pragma once

#include <cstdint>
#include <string>

#include "rmtsel/types.hpp"

namespace rmtsel {

/// Uplink antenna-selection model: candidate antennas on a uniform
/// line, R_ij = exp(-0.05 d^2 (i-j)^2) with d the element spacing.
struct MimoParams {
  int n = 100;
  int m = 30;
  int k = 50;
  double d = 2.0;
  double snr_db = 20.0;
};

/// Sensor-selection model: n sensors placed area-uniformly on a disk,
/// field covariance Phi_ij = sigma2 * exp(-decay_rho * ||S_i - S_j||),
/// candidate correlation R = Phi^{-1}. Placement is reproducible from
/// placement_seed (per sensor: radius draw, then angle draw, both
/// uniform on [0,1) from std::mt19937_64).
struct WsnParams {
  int n = 100;
  int m = 30;
  int k = 50;
  double sigma2 = 1.0;
  double decay_rho = 0.1;
  double radius = 30.0;
  double snr_db = 20.0;
  std::uint64_t placement_seed = 12345;
};

struct Scenario {
  std::string id;
  ProblemDims dims;
  CorrelationMatrix r;
  double snr_db = 20.0;
  Eigen::MatrixXd positions;  // n x 2, WSN only (empty otherwise)
};

Scenario make_mimo(const MimoParams& params);

/// Area-uniform placement on the disk of the given radius: per sensor the
/// radius is radius*sqrt(u1) and the angle 2*pi*u2. Returns an n x 2 matrix.
Eigen::MatrixXd place_sensors(int n, double radius, std::uint64_t seed);

/// Inverse field covariance for explicit sensor positions (n x 2 rows).
/// Throws IllConditioned when cond(Phi) exceeds 1e12 (the inverse would
/// be meaningless as a correlation model).
CorrelationMatrix wsn_correlation(const Eigen::MatrixXd& positions,
                                  double decay_rho, double sigma2);

Scenario make_wsn(const WsnParams& params);

/// Presets: "mimo-d1", "mimo-d2", "mimo-d4" (spacing 1, 2, 4), "wsn".
Scenario make_preset(const std::string& name);

}  // namespace rmtsel
