// Copyright 2026 The pdsvqs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PDSVQS_PDS_HPP
#define PDSVQS_PDS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdsvqs/errors.hpp"
#include "pdsvqs/moments.hpp"

namespace pdsvqs {

struct RegularizationPolicy {
  enum class Kind { None, Shift, Truncate };
  Kind kind = Kind::None;
  /// Added to every eigenvalue under Shift.
  double shift = 1e-6;
  /// Eigenvalues below truncate_rel * max|lambda| are dropped under Truncate.
  double truncate_rel = 1e-10;
  /// Under None a reciprocal condition number below this is an error.
  double singular_rcond = 1e-13;

  static RegularizationPolicy none() { return {}; }
  static RegularizationPolicy shifted(double eps = 1e-6) {
    RegularizationPolicy p;
    p.kind = Kind::Shift;
    p.shift = eps;
    return p;
  }
  static RegularizationPolicy truncated(double rel = 1e-10) {
    RegularizationPolicy p;
    p.kind = Kind::Truncate;
    p.truncate_rel = rel;
    return p;
  }
};

inline const char* policy_name(RegularizationPolicy::Kind k) {
  switch (k) {
    case RegularizationPolicy::Kind::None: return "none";
    case RegularizationPolicy::Kind::Shift: return "shift";
    case RegularizationPolicy::Kind::Truncate: return "truncate";
  }
  return "?";
}

/// Symmetric eigendecomposition of a real symmetric matrix with the policy
/// applied to its spectrum. The factorization is reused for every solve.
class SymmetricSolver {
 public:
  SymmetricSolver() = default;
  SymmetricSolver(const Eigen::MatrixXd& a, const RegularizationPolicy& policy) : policy_(policy), a_(a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("matrix is not square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
    lambda_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
    const double amax = lambda_.cwiseAbs().maxCoeff();
    const double amin = lambda_.cwiseAbs().minCoeff();
    cond_ = amin > 0.0 ? amax / amin : std::numeric_limits<double>::infinity();
    rcond_ = amax > 0.0 ? amin / amax : 0.0;
    inv_.resize(lambda_.size());
    for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
      const double l = lambda_(i);
      switch (policy.kind) {
        case RegularizationPolicy::Kind::None:
          inv_(i) = l != 0.0 ? 1.0 / l : 0.0;
          break;
        case RegularizationPolicy::Kind::Shift:
          inv_(i) = 1.0 / (l + policy.shift);
          break;
        case RegularizationPolicy::Kind::Truncate:
          if (std::abs(l) <= policy.truncate_rel * amax) {
            inv_(i) = 0.0;
            ++truncated_;
            magnitude_ = std::max(magnitude_, std::abs(l));
          } else {
            inv_(i) = 1.0 / l;
          }
          break;
      }
    }
    if (policy.kind == RegularizationPolicy::Kind::Shift) magnitude_ = policy.shift;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    if (b.size() != lambda_.size()) throw DimensionMismatch("right-hand side size mismatch");
    Eigen::VectorXd x = apply(b);
    if (regularized()) return x;
    // Iterative refinement with the residual accumulated in long double.
    for (int it = 0; it < 2; ++it) {
      Eigen::VectorXd r(b.size());
      for (Eigen::Index i = 0; i < b.size(); ++i) {
        long double acc = b(i);
        for (Eigen::Index j = 0; j < b.size(); ++j) {
          acc -= static_cast<long double>(a_(i, j)) * static_cast<long double>(x(j));
        }
        r(i) = static_cast<double>(acc);
      }
      x += apply(r);
    }
    return x;
  }

  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  double cond() const { return cond_; }
  double rcond() const { return rcond_; }
  /// True when rcond falls below the policy's singular threshold.
  bool singular() const { return rcond_ < policy_.singular_rcond; }
  bool regularized() const {
    return policy_.kind == RegularizationPolicy::Kind::Shift || truncated_ > 0;
  }
  /// Shift size, or the largest dropped |eigenvalue| under truncation.
  double magnitude() const { return magnitude_; }
  int truncated() const { return truncated_; }

 private:
  Eigen::VectorXd apply(const Eigen::VectorXd& b) const {
    return vectors_ * (inv_.asDiagonal() * (vectors_.transpose() * b));
  }

  RegularizationPolicy policy_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd inv_;
  double cond_ = 1.0;
  double rcond_ = 1.0;
  double magnitude_ = 0.0;
  int truncated_ = 0;
};

struct PdsResult {
  int K = 0;
  Eigen::VectorXd X;
  /// Real parts of the characteristic roots, ascending.
  std::vector<double> roots;
  double energy = 0.0;
  double cond_M = 1.0;
  bool regularization_applied = false;
  double regularization_magnitude = 0.0;
  /// Largest |Im| over all roots before they were declared real.
  double imag_residue = 0.0;
  /// Complex roots dropped because M was rank-truncated.
  int discarded_roots = 0;
  SymmetricSolver solver;
};

struct PdsOptions {
  RegularizationPolicy policy;
  /// A root is real when |Im| <= root_imag_tol * max(1, |Re|).
  double root_imag_tol = 1e-8;
};

inline constexpr double kVanishingDenominatorTol = 1e-12;

inline Eigen::MatrixXd moment_matrix(const Eigen::VectorXd& m, int K) {
  Eigen::MatrixXd M(K, K);
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) M(a, b) = m(2 * K - 2 - a - b);
  return M;
}

inline Eigen::VectorXd moment_rhs(const Eigen::VectorXd& m, int K) {
  Eigen::VectorXd y(K);
  for (int a = 0; a < K; ++a) y(a) = m(2 * K - 1 - a);
  return y;
}

/// Roots of E^K + X_1 E^(K-1) + ... + X_K from the companion matrix.
inline Eigen::VectorXcd characteristic_roots(const Eigen::VectorXd& X) {
  const auto K = X.size();
  if (K == 1) return Eigen::VectorXcd::Constant(1, Complex(-X(0), 0.0));
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(K, K);
  C.row(0) = -X.transpose();
  for (Eigen::Index i = 1; i < K; ++i) C(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  if (es.info() != Eigen::Success) throw NumericalError("companion eigensolver failed");
  return es.eigenvalues();
}

inline PdsResult pds_solve(const MomentTable& table, int K, const PdsOptions& opts = {}) {
  if (K < 1) throw InvalidArgument("K must be at least 1");
  if (table.max_order < 2 * K - 1 || table.values.size() < 2 * K) {
    throw InvalidArgument("PDS(" + std::to_string(K) + ") needs moments up to order " +
                          std::to_string(2 * K - 1));
  }
  PdsResult r;
  r.K = K;
  r.solver = SymmetricSolver(moment_matrix(table.values, K), opts.policy);
  r.cond_M = r.solver.cond();
  if (opts.policy.kind == RegularizationPolicy::Kind::None && r.solver.singular()) {
    throw SingularMoments("moment matrix is singular to working precision (rcond " +
                              std::to_string(r.solver.rcond()) + ")",
                          r.solver.rcond());
  }
  r.regularization_applied = r.solver.regularized();
  r.regularization_magnitude = r.solver.magnitude();
  r.X = r.solver.solve(-moment_rhs(table.values, K));

  const Eigen::VectorXcd z = characteristic_roots(r.X);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double im = std::abs(z(i).imag());
    r.imag_residue = std::max(r.imag_residue, im);
    if (im > opts.root_imag_tol * std::max(1.0, std::abs(z(i).real()))) {
      // Undetermined roots of a rank-truncated M.
      if (r.solver.truncated() > 0) {
        ++r.discarded_roots;
        continue;
      }
      throw ComplexRoots("characteristic polynomial has a complex root (" +
                             std::to_string(z(i).real()) + ", " + std::to_string(z(i).imag()) + ")",
                         im);
    }
    r.roots.push_back(z(i).real());
  }
  if (r.roots.empty()) throw ComplexRoots("no real characteristic root", r.imag_residue);
  std::sort(r.roots.begin(), r.roots.end());
  r.energy = r.roots.front();
  return r;
}

/// dE/d theta_k by implicit differentiation of M X = -Y and of the root
/// condition, reusing the factorization held in `result`.
inline Eigen::VectorXd pds_gradient(const MomentTable& table, const PdsResult& result) {
  const int K = result.K;
  if (!table.gradients) throw InvalidArgument("moment table carries no gradients");
  const Eigen::MatrixXd& G = *table.gradients;
  if (G.cols() < 2 * K) throw InvalidArgument("moment gradients do not reach order 2K-1");
  const double E = result.energy;
  const Eigen::VectorXd& X = result.X;

  Eigen::VectorXd pw(K);
  for (int a = 0; a < K; ++a) pw(a) = std::pow(E, K - 1 - a);
  double denom = K * std::pow(E, K - 1);
  for (int i = 1; i < K; ++i) denom += (K - i) * X(i - 1) * std::pow(E, K - i - 1);
  if (std::abs(denom) < kVanishingDenominatorTol) {
    throw VanishingDenominator("derivative of the characteristic polynomial vanishes at the root");
  }

  Eigen::VectorXd grad(G.rows());
  for (Eigen::Index k = 0; k < G.rows(); ++k) {
    const Eigen::VectorXd gk = G.row(k).transpose();
    const Eigen::VectorXd rhs = -moment_rhs(gk, K) - moment_matrix(gk, K) * X;
    grad(k) = -pw.dot(result.solver.solve(rhs)) / denom;
  }
  return grad;
}

}  // namespace pdsvqs

#endif  // PDSVQS_PDS_HPP
