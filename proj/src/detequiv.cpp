// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 rmtsel authors

#include "rmtsel/detequiv.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace rmtsel {
namespace detail {

EffectiveSpectrum effective_spectrum(const CorrelationMatrix& r,
                                     const Eigen::Ref<const Eigen::VectorXd>& s) {
  const int n = r.n();
  if (s.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weight vector length " + std::to_string(s.size()) +
                    " does not match n=" + std::to_string(n));
  }
  std::vector<int> support;
  support.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (s[i] < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "selection weights must be nonnegative");
    }
    if (s[i] > 0.0) support.push_back(i);
  }

  EffectiveSpectrum sp;
  sp.ambient = n;
  sp.zeros_outside = n - static_cast<int>(support.size());
  const int p = static_cast<int>(support.size());
  if (p == 0) {
    sp.lambda.resize(0);
    sp.positive = 0;
    return sp;
  }

  // R^{1/2} diag(s) R^{1/2} and diag(sqrt s) R diag(sqrt s) share their
  // nonzero spectrum; the latter needs only the support-restricted block.
  if (r.is_real()) {
    Eigen::MatrixXd b(p, p);
    const Eigen::MatrixXcd& rm = r.matrix();
    for (int a = 0; a < p; ++a) {
      const double wa = std::sqrt(s[support[a]]);
      for (int c = 0; c <= a; ++c) {
        const double v =
            wa * std::sqrt(s[support[c]]) * rm(support[a], support[c]).real();
        b(a, c) = v;
        b(c, a) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
      throw Error(ErrorCode::kNonConvergence, "support-block eigensolve failed");
    }
    sp.lambda = eig.eigenvalues().cwiseMax(0.0);
  } else {
    Eigen::MatrixXcd b(p, p);
    const Eigen::MatrixXcd& rm = r.matrix();
    for (int a = 0; a < p; ++a) {
      const double wa = std::sqrt(s[support[a]]);
      for (int c = 0; c < p; ++c) {
        b(a, c) = wa * std::sqrt(s[support[c]]) * rm(support[a], support[c]);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(b, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
      throw Error(ErrorCode::kNonConvergence, "support-block eigensolve failed");
    }
    sp.lambda = eig.eigenvalues().cwiseMax(0.0);
  }

  const double lmax = sp.lambda.size() ? sp.lambda.maxCoeff() : 0.0;
  const double rank_tol = 1e-12 * std::max(lmax, 1e-300);
  sp.positive = 0;
  for (Eigen::Index i = 0; i < sp.lambda.size(); ++i) {
    if (sp.lambda[i] > rank_tol) ++sp.positive;
  }
  return sp;
}

EffectiveSpectrum spectrum_from_eigenvalues(const Eigen::VectorXd& lambda) {
  EffectiveSpectrum sp;
  sp.lambda = lambda.cwiseMax(0.0);
  sp.ambient = static_cast<int>(lambda.size());
  sp.zeros_outside = 0;
  const double lmax = sp.lambda.size() ? sp.lambda.maxCoeff() : 0.0;
  const double rank_tol = 1e-12 * std::max(lmax, 1e-300);
  sp.positive = 0;
  for (Eigen::Index i = 0; i < sp.lambda.size(); ++i) {
    if (sp.lambda[i] > rank_tol) ++sp.positive;
  }
  return sp;
}

double trace_r_resolvent(const EffectiveSpectrum& sp, double t) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sp.lambda.size(); ++i) {
    acc += sp.lambda[i] / (1.0 + t * sp.lambda[i]);
  }
  return acc;
}

double trace_resolvent(const EffectiveSpectrum& sp, double t) {
  double acc = static_cast<double>(sp.zeros_outside);
  for (Eigen::Index i = 0; i < sp.lambda.size(); ++i) {
    acc += 1.0 / (1.0 + t * sp.lambda[i]);
  }
  return acc;
}

double logdet_i_plus(const EffectiveSpectrum& sp, double t) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sp.lambda.size(); ++i) {
    acc += std::log1p(t * sp.lambda[i]);
  }
  return acc;
}

double eta_defect(const EffectiveSpectrum& sp, double t, int m) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sp.lambda.size(); ++i) {
    const double q = t * sp.lambda[i] / (1.0 + t * sp.lambda[i]);
    acc += q * q;
  }
  return acc / static_cast<double>(m) - 1.0;
}

namespace {

void require_rank(const EffectiveSpectrum& sp, int m, ErrorCode code) {
  if (m <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "m must be positive");
  }
  if (sp.positive <= m) {
    throw Error(code, "weighted correlation has rank " +
                          std::to_string(sp.positive) +
                          ", need rank > m=" + std::to_string(m));
  }
}

// delta * tr[R_s (I + delta R_s)^{-1}] grows monotonically from 0 to
// rank(R_s), so the root is unique whenever rank > m.
double delta_equation(const EffectiveSpectrum& sp, int m, double t) {
  return t * trace_r_resolvent(sp, t) - static_cast<double>(m);
}

}  // namespace

RootSolve solve_delta_fixed_point(const EffectiveSpectrum& sp, int m) {
  require_rank(sp, m, ErrorCode::kNoRoot);
  RootSolve out;
  double cur = static_cast<double>(m) / sp.lambda.sum();
  const int max_iter = 500;
  for (int it = 0; it < max_iter; ++it) {
    const double next = 0.5 * (cur + static_cast<double>(m) / trace_r_resolvent(sp, cur));
    ++out.iterations;
    if (std::abs(next - cur) <= 1e-14 * std::max(1.0, std::abs(next))) {
      cur = next;
      break;
    }
    cur = next;
  }
  out.root = cur;
  out.residual = std::abs(cur - static_cast<double>(m) / trace_r_resolvent(sp, cur));
  return out;
}

RootSolve solve_delta_bisection(const EffectiveSpectrum& sp, int m) {
  require_rank(sp, m, ErrorCode::kNoRoot);
  RootSolve out;
  double lo = 1e-12, hi = 1e12;
  while (delta_equation(sp, m, lo) > 0.0 && lo > 1e-300) lo *= 1e-3;
  while (delta_equation(sp, m, hi) < 0.0 && hi < 1e300) hi *= 1e3;
  if (delta_equation(sp, m, lo) > 0.0 || delta_equation(sp, m, hi) < 0.0) {
    throw Error(ErrorCode::kNoRoot, "failed to bracket the delta fixed point");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    ++out.iterations;
    if (delta_equation(sp, m, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-14 * std::max(1.0, lo)) break;
  }
  out.root = 0.5 * (lo + hi);
  out.residual =
      std::abs(out.root - static_cast<double>(m) / trace_r_resolvent(sp, out.root));
  return out;
}

RootSolve solve_delta(const EffectiveSpectrum& sp, int m) {
  RootSolve fp = solve_delta_fixed_point(sp, m);
  if (fp.residual <= 1e-10 * std::max(1.0, fp.root)) return fp;
  RootSolve bi = solve_delta_bisection(sp, m);
  bi.iterations += fp.iterations;
  if (bi.residual > 1e-10 * std::max(1.0, bi.root)) {
    throw Error(ErrorCode::kNonConvergence,
                "delta solver residual " + std::to_string(bi.residual) +
                    " above tolerance");
  }
  return bi;
}

RootSolve solve_eta(const EffectiveSpectrum& sp, int m) {
  require_rank(sp, m, ErrorCode::kNoRoot);
  RootSolve out;
  double lo = 1e-12, hi = 1.0;
  while (eta_defect(sp, lo, m) > 0.0 && lo > 1e-300) lo *= 1e-3;
  while (eta_defect(sp, hi, m) < 0.0) {
    hi *= 10.0;
    if (hi > 1e15) {
      throw Error(ErrorCode::kNoRoot,
                  "eta defect never reaches zero on the search range");
    }
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    ++out.iterations;
    if (eta_defect(sp, mid, m) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * std::max(1.0, lo)) break;
  }
  out.root = 0.5 * (lo + hi);
  out.residual = std::abs(eta_defect(sp, out.root, m));
  if (out.residual > 1e-8) {
    throw Error(ErrorCode::kNonConvergence,
                "eta solver residual " + std::to_string(out.residual) +
                    " above tolerance");
  }
  return out;
}

}  // namespace detail

namespace {

using detail::EffectiveSpectrum;

DetEquivSolution mse_bar_on(const EffectiveSpectrum& sp, int m) {
  const detail::RootSolve r = detail::solve_delta(sp, m);
  return {r.root, r.root, r.iterations, r.residual};
}

DetEquivSolution lce_bar_on(const EffectiveSpectrum& sp, int m) {
  const detail::RootSolve r = detail::solve_delta(sp, m);
  const double c = static_cast<double>(sp.ambient) / static_cast<double>(m);
  const double value = -detail::logdet_i_plus(sp, r.root) / static_cast<double>(m) +
                       std::log(c * r.root) + 1.0;
  return {r.root, value, r.iterations, r.residual};
}

DetEquivSolution lambda_min_bar_on(const EffectiveSpectrum& sp, int m) {
  const detail::RootSolve r = detail::solve_eta(sp, m);
  const double value =
      -1.0 / r.root + detail::trace_r_resolvent(sp, r.root) / static_cast<double>(m);
  if (!(value > 1e-12)) {
    throw Error(ErrorCode::kNonPositiveEdge,
                "asymptotic spectrum edge is not positive: " + std::to_string(value));
  }
  return {r.root, value, r.iterations, r.residual};
}

}  // namespace

DetEquivSolution mse_bar(const CorrelationMatrix& r,
                         const Eigen::Ref<const Eigen::VectorXd>& s, int m) {
  return mse_bar_on(detail::effective_spectrum(r, s), m);
}

DetEquivSolution lce_bar(const CorrelationMatrix& r,
                         const Eigen::Ref<const Eigen::VectorXd>& s, int m) {
  return lce_bar_on(detail::effective_spectrum(r, s), m);
}

DetEquivSolution lambda_min_bar(const CorrelationMatrix& r,
                                const Eigen::Ref<const Eigen::VectorXd>& s, int m) {
  return lambda_min_bar_on(detail::effective_spectrum(r, s), m);
}

DetEquivSolution wev_bar(const CorrelationMatrix& r,
                         const Eigen::Ref<const Eigen::VectorXd>& s, int m) {
  DetEquivSolution sol = lambda_min_bar(r, s, m);
  sol.value = 1.0 / sol.value;
  return sol;
}

DetEquivSolution mse_bar(const CorrelationMatrix& r, const SelectionVector& s, int m) {
  return mse_bar(r, Eigen::Ref<const Eigen::VectorXd>(s.weights()), m);
}

DetEquivSolution lce_bar(const CorrelationMatrix& r, const SelectionVector& s, int m) {
  return lce_bar(r, Eigen::Ref<const Eigen::VectorXd>(s.weights()), m);
}

DetEquivSolution lambda_min_bar(const CorrelationMatrix& r, const SelectionVector& s,
                                int m) {
  return lambda_min_bar(r, Eigen::Ref<const Eigen::VectorXd>(s.weights()), m);
}

DetEquivSolution wev_bar(const CorrelationMatrix& r, const SelectionVector& s, int m) {
  return wev_bar(r, Eigen::Ref<const Eigen::VectorXd>(s.weights()), m);
}

}  // namespace rmtsel
