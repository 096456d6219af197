// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include "rmtsel/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rmtsel {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotPsd: return "NotPsd";
    case ErrorCode::kBudgetInfeasible: return "BudgetInfeasible";
    case ErrorCode::kSingularGram: return "SingularGram";
    case ErrorCode::kUpdateSingular: return "UpdateSingular";
    case ErrorCode::kNoRoot: return "NoRoot";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kNonPositiveEdge: return "NonPositiveEdge";
    case ErrorCode::kEdgeDegenerate: return "EdgeDegenerate";
    case ErrorCode::kIllConditioned: return "IllConditioned";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

const char* metric_name(ErrorMetric metric) noexcept {
  switch (metric) {
    case ErrorMetric::kMse: return "mse";
    case ErrorMetric::kLce: return "lce";
    case ErrorMetric::kWev: return "wev";
  }
  return "unknown";
}

void ProblemDims::validate() const {
  if (n <= 0 || m <= 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dimensions must be positive, got n=" + std::to_string(n) +
                    " m=" + std::to_string(m));
  }
  if (k <= m || k > n) {
    throw Error(ErrorCode::kBudgetInfeasible,
                "budget k=" + std::to_string(k) + " must satisfy m < k <= n (m=" +
                    std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXcd r) : matrix_(std::move(r)) {
  init();
}

CorrelationMatrix::CorrelationMatrix(const Eigen::MatrixXd& r)
    : matrix_(r.cast<std::complex<double>>()) {
  init();
}

void CorrelationMatrix::init() {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "correlation matrix must be square and non-empty");
  }
  const double scale = matrix_.cwiseAbs().maxCoeff();
  const double herm_tol = 1e-12 * std::max(1.0, scale);
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > herm_tol) {
    throw Error(ErrorCode::kNotPsd, "correlation matrix is not Hermitian");
  }
  // Exact symmetrization removes roundoff-level asymmetry before factoring.
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  is_real_ = matrix_.imag().cwiseAbs().maxCoeff() == 0.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(matrix_);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPsd, "eigendecomposition of correlation matrix failed");
  }
  Eigen::VectorXd lambda = eig.eigenvalues();
  const double lmax = std::max(lambda.cwiseAbs().maxCoeff(), 1.0);
  if (lambda.minCoeff() < -1e-10 * lmax) {
    throw Error(ErrorCode::kNotPsd,
                "correlation matrix has negative eigenvalue " +
                    std::to_string(lambda.minCoeff()));
  }
  lambda = lambda.cwiseMax(0.0);
  sqrt_ = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
          eig.eigenvectors().adjoint();
}

SelectionVector SelectionVector::binary(const std::vector<int>& indices, int n) {
  if (n <= 0) {
    throw Error(ErrorCode::kDimensionMismatch, "selection length must be positive");
  }
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  for (int i : indices) {
    if (i < 0 || i >= n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "selection index " + std::to_string(i) + " out of range [0," +
                      std::to_string(n) + ")");
    }
    if (s[i] != 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate selection index " + std::to_string(i));
    }
    s[i] = 1.0;
  }
  return SelectionVector(std::move(s), true);
}

SelectionVector SelectionVector::binary_from_mask(const Eigen::VectorXd& mask) {
  if (mask.size() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "selection length must be positive");
  }
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0.0 && mask[i] != 1.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "binary selection entry must be exactly 0 or 1");
    }
  }
  return SelectionVector(mask, true);
}

SelectionVector SelectionVector::relaxed(const Eigen::VectorXd& weights) {
  if (weights.size() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "selection length must be positive");
  }
  if (weights.minCoeff() < 0.0 || weights.maxCoeff() > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "relaxed selection entries must lie in [0,1]");
  }
  return SelectionVector(weights, false);
}

std::vector<int> SelectionVector::indices() const {
  if (!binary_) {
    throw Error(ErrorCode::kInvalidArgument,
                "indices() requires a binary selection");
  }
  std::vector<int> out;
  out.reserve(static_cast<size_t>(s_.sum()) + 1);
  for (int i = 0; i < n(); ++i) {
    if (s_[i] == 1.0) out.push_back(i);
  }
  return out;
}

int SelectionVector::support_size() const {
  int c = 0;
  for (Eigen::Index i = 0; i < s_.size(); ++i) {
    if (s_[i] > 0.0) ++c;
  }
  return c;
}

SelectionVector SelectionVector::with_swap(int remove, int add) const {
  if (!binary_) {
    throw Error(ErrorCode::kInvalidArgument, "with_swap requires a binary selection");
  }
  if (remove < 0 || remove >= n() || add < 0 || add >= n() || remove == add) {
    throw Error(ErrorCode::kInvalidArgument, "swap indices out of range or equal");
  }
  if (s_[remove] != 1.0 || s_[add] != 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "swap requires `remove` selected and `add` unselected");
  }
  Eigen::VectorXd s = s_;
  s[remove] = 0.0;
  s[add] = 1.0;
  return SelectionVector(std::move(s), true);
}

void validate(const ProblemDims& dims, const SelectionVector& s) {
  dims.validate();
  if (s.n() != dims.n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "selection length " + std::to_string(s.n()) +
                    " does not match n=" + std::to_string(dims.n));
  }
  if (!s.is_binary()) {
    throw Error(ErrorCode::kInvalidArgument, "expected a binary selection");
  }
  if (s.support_size() != dims.k) {
    throw Error(ErrorCode::kBudgetInfeasible,
                "selection has " + std::to_string(s.support_size()) +
                    " active entries, budget is k=" + std::to_string(dims.k));
  }
}

}  // namespace rmtsel
