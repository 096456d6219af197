// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rmtsel/error.hpp"

namespace rmtsel {

/// Which estimation-error figure a selector optimizes.
enum class ErrorMetric { kMse, kLce, kWev };

const char* metric_name(ErrorMetric metric) noexcept;

/// Problem sizes: n candidate measurements, m unknowns, budget k.
/// Feasibility requires m < k <= n (the LS problem needs k >= m rows,
/// and k > m keeps every Gram matrix and fixed point well defined).
struct ProblemDims {
  int n = 0;
  int m = 0;
  int k = 0;

  void validate() const;
};

/// Hermitian PSD receive-side correlation matrix together with its
/// principal square root. The square root is computed once at
/// construction; negative eigenvalues beyond -1e-10*max(|lambda|) are
/// rejected, anything above that floor is clamped to zero.
class CorrelationMatrix {
 public:
  /// Validates Hermitian symmetry (tolerance 1e-12 * max |entry|) and
  /// positive semidefiniteness, then caches R^{1/2}.
  explicit CorrelationMatrix(Eigen::MatrixXcd r);
  explicit CorrelationMatrix(const Eigen::MatrixXd& r);

  int n() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  const Eigen::MatrixXcd& sqrt() const noexcept { return sqrt_; }

  /// True when every entry has zero imaginary part; real-path kernels
  /// key off this to halve eigensolver cost.
  bool is_real() const noexcept { return is_real_; }
  /// Real view of matrix(); only valid when is_real().
  Eigen::MatrixXd real_matrix() const { return matrix_.real(); }

 private:
  void init();

  Eigen::MatrixXcd matrix_;
  Eigen::MatrixXcd sqrt_;
  bool is_real_ = false;
};

/// Selection variable over the n candidates. Binary selections hold
/// entries in {0,1}; relaxed ones live in [0,1]. Both enforce their
/// range at construction (binary entries must be exactly 0 or 1).
class SelectionVector {
 public:
  static SelectionVector binary(const std::vector<int>& indices, int n);
  static SelectionVector binary_from_mask(const Eigen::VectorXd& mask);
  static SelectionVector relaxed(const Eigen::VectorXd& weights);

  int n() const noexcept { return static_cast<int>(s_.size()); }
  bool is_binary() const noexcept { return binary_; }
  const Eigen::VectorXd& weights() const noexcept { return s_; }
  double sum() const { return s_.sum(); }

  /// Ascending indices of the support (binary selections only).
  std::vector<int> indices() const;
  int support_size() const;

  bool selected(int i) const { return s_[i] > 0.5; }

  /// Binary selections only: returns a copy with `remove` cleared and
  /// `add` set. Preconditions: remove is selected, add is not.
  SelectionVector with_swap(int remove, int add) const;

 private:
  SelectionVector(Eigen::VectorXd s, bool binary)
      : s_(std::move(s)), binary_(binary) {}

  Eigen::VectorXd s_;
  bool binary_;
};

/// Throws unless s is a feasible binary selection for dims: matching
/// length and support size exactly k.
void validate(const ProblemDims& dims, const SelectionVector& s);

}  // namespace rmtsel
