// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#pragma once

#include <stdexcept>
#include <string>

namespace rmtsel {

/// Failure categories surfaced by the library. Values are stable and are
/// mirrored one-to-one by the C API status codes.
enum class ErrorCode : int {
  kDimensionMismatch = 1,  // operands sized for different problems
  kNotPsd = 2,             // correlation matrix fails the PSD check
  kBudgetInfeasible = 3,   // k outside (m, n] or otherwise unusable
  kSingularGram = 4,       // exact measure hit a rank-deficient Gram matrix
  kUpdateSingular = 5,     // rank-one downdate denominator vanished
  kNoRoot = 6,             // fixed-point equation has no positive root
  kNonConvergence = 7,     // iterative solver exhausted its budget
  kNonPositiveEdge = 8,    // spectrum edge came out non-positive
  kEdgeDegenerate = 9,     // eta equation degenerate for the given support
  kIllConditioned = 10,    // scenario covariance too ill-conditioned to invert
  kTooLarge = 11,          // exhaustive search beyond the enumeration cap
  kIo = 12,                // file read/write failure
  kConfig = 13,            // malformed configuration input
  kInvalidArgument = 14,   // precondition violated by the caller
};

const char* error_code_name(ErrorCode code) noexcept;

/// Exception carrying a stable error code plus a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rmtsel
