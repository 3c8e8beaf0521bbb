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

#ifndef PDSVQS_MOMENTS_HPP
#define PDSVQS_MOMENTS_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pdsvqs/errors.hpp"
#include "pdsvqs/pauli.hpp"
#include "pdsvqs/statesim.hpp"

namespace pdsvqs {

/// h^0 ... h^max_order, built once and read-only afterwards.
class PowerCache {
 public:
  PowerCache(PauliSum h, int max_order, int max_power = kDefaultMaxPower,
             double drop_tol = kDefaultDropTol)
      : hamiltonian_(std::move(h)),
        powers_(powers_up_to(hamiltonian_, max_order, max_power, drop_tol)) {
    if (!hamiltonian_.is_hermitian()) {
      throw NonHermitian("Hamiltonian has non-real Pauli coefficients");
    }
  }

  const PauliSum& hamiltonian() const { return hamiltonian_; }
  int max_order() const { return static_cast<int>(powers_.size()) - 1; }
  int n_qubits() const { return hamiltonian_.n_qubits(); }
  const PauliSum& operator[](int n) const {
    if (n < 0 || n > max_order()) {
      throw InvalidArgument("power " + std::to_string(n) + " not cached");
    }
    return powers_[static_cast<std::size_t>(n)];
  }

 private:
  PauliSum hamiltonian_;
  std::vector<PauliSum> powers_;
};

struct MomentTable {
  int max_order = 0;
  /// values(n) = <H^n>, values(0) = 1.
  Eigen::VectorXd values;
  /// gradients(k, n) = d<H^n>/d theta_k; column 0 is zero.
  std::optional<Eigen::MatrixXd> gradients;
  /// Standard errors of values when estimated from samples.
  std::optional<Eigen::VectorXd> std_errors;
};

enum class GradientMethod { Analytic, Shift };

namespace detail {

inline void check_order(const PowerCache& cache, int max_order) {
  if (max_order < 1) throw InvalidArgument("moment order must be at least 1");
  if (max_order > cache.max_order()) {
    throw InvalidArgument("moment order " + std::to_string(max_order) +
                          " exceeds the cached powers (" +
                          std::to_string(cache.max_order()) + ")");
  }
}

inline Eigen::VectorXd state_moments(const State& psi, const PowerCache& cache,
                                     int max_order) {
  Eigen::VectorXd v(max_order + 1);
  v(0) = 1.0;
  for (int n = 1; n <= max_order; ++n) v(n) = expectation(psi, cache[n]);
  return v;
}

}  // namespace detail

inline MomentTable moment_table(const State& psi, const PowerCache& cache, int max_order) {
  detail::check_order(cache, max_order);
  return MomentTable{max_order, detail::state_moments(psi, cache, max_order), {}, {}};
}

inline MomentTable moment_table(const Circuit& c, std::span<const double> theta,
                                const PowerCache& cache, int max_order) {
  if (c.n_qubits() != cache.n_qubits()) {
    throw DimensionMismatch("circuit and Hamiltonian qubit counts differ");
  }
  return moment_table(apply_circuit(c, theta), cache, max_order);
}

/// Rewrites every parametrized controlled-RY into one-qubit rotations and
/// CNOTs: CRY(phi) = CNOT . RY_t(-phi/2) . CNOT . RY_t(phi/2).
inline Circuit decompose_controlled(const Circuit& c) {
  Circuit out(c.n_qubits(), c.n_params(), c.initial_basis());
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::CRY && g.parametrized()) {
      out.ry(g.target, g.param, g.multiplier / 2.0);
      out.cnot(g.control, g.target);
      out.ry(g.target, g.param, -g.multiplier / 2.0);
      out.cnot(g.control, g.target);
    } else {
      out.push(g);
    }
  }
  return out;
}

/// d<H^n>/d theta_k for n = 0..max_order. The analytic route uses
/// 2 Re <d_k phi|H^n|phi>; the shift route evaluates every occurrence at
/// +-pi/2 on the (decomposed) circuit and sums the contributions.
inline Eigen::MatrixXd moment_gradients(const Circuit& c, std::span<const double> theta,
                                        const PowerCache& cache, int max_order,
                                        GradientMethod method = GradientMethod::Analytic) {
  detail::check_order(cache, max_order);
  if (c.n_qubits() != cache.n_qubits()) {
    throw DimensionMismatch("circuit and Hamiltonian qubit counts differ");
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(c.n_params(), max_order + 1);

  if (method == GradientMethod::Analytic) {
    const State psi = apply_circuit(c, theta);
    std::vector<Eigen::VectorXcd> h_psi;
    h_psi.reserve(static_cast<std::size_t>(max_order));
    for (int n = 1; n <= max_order; ++n) h_psi.push_back(apply_pauli_sum(cache[n], psi.amplitudes));
    for (int k = 0; k < c.n_params(); ++k) {
      const State d = state_derivative(c, theta, k);
      for (int n = 1; n <= max_order; ++n) {
        g(k, n) = 2.0 * d.amplitudes.dot(h_psi[static_cast<std::size_t>(n - 1)]).real();
      }
    }
    return g;
  }

  const Circuit dc = decompose_controlled(c);
  for (int k = 0; k < c.n_params(); ++k) {
    for (const auto& occ : dc.occurrences(k)) {
      const GateKind kind = dc.gates()[occ.gate].kind;
      if (kind != GateKind::RX && kind != GateKind::RY && kind != GateKind::RZ) {
        throw InvalidArgument("shift rule needs one-qubit rotations; gate " +
                              std::to_string(occ.gate) + " is " + gate_name(kind));
      }
      const State plus = apply_circuit(dc, theta, {occ.gate, std::numbers::pi / 2.0});
      const State minus = apply_circuit(dc, theta, {occ.gate, -std::numbers::pi / 2.0});
      for (int n = 1; n <= max_order; ++n) {
        g(k, n) += occ.multiplier * 0.5 *
                   (expectation(plus, cache[n]) - expectation(minus, cache[n]));
      }
    }
  }
  return g;
}

struct TermEstimate {
  PauliKey key;
  double mean = 0.0;
  double std_error = 0.0;
};

struct SampledEstimate {
  /// Estimate of <S> including the identity part.
  double value = 0.0;
  /// Standard error from the per-group sample variance of the grouped
  /// observable (within-group covariances included).
  double std_error = 0.0;
  std::vector<TermEstimate> terms;
};

namespace detail {

/// Rotates every qubit of the group basis so its letter is measured along Z.
inline Eigen::VectorXcd rotate_to_basis(Eigen::VectorXcd v, int n, const PauliKey& basis) {
  const double r = 1.0 / std::sqrt(2.0);
  Mat2 h;
  h << r, r, r, -r;
  Mat2 sdg_h;  // H S^dagger
  sdg_h << r, Complex(0.0, -r), r, Complex(0.0, r);
  for (int q = 0; q < n; ++q) {
    const char l = letter_at(basis, n, q);
    if (l == 'X') apply_2x2(v, n, q, -1, h);
    if (l == 'Y') apply_2x2(v, n, q, -1, sdg_h);
  }
  return v;
}

}  // namespace detail

/// Finite-shot estimate of <psi|S|psi>: each group is measured `shots` times
/// in its shared basis, with outcomes drawn from the exact distribution.
inline SampledEstimate sampled_expectation(const State& psi, const PauliSum& s,
                                           const std::vector<QwcGroup>& groups,
                                           long shots, std::mt19937_64& rng) {
  if (shots < 1) throw InvalidArgument("shot count must be positive");
  if (psi.n_qubits != s.n_qubits()) {
    throw DimensionMismatch("state and operator qubit counts differ");
  }
  const int n = psi.n_qubits;
  SampledEstimate out;
  double variance_sum = 0.0;
  const auto dim = static_cast<std::size_t>(psi.dim());
  std::vector<long> counts(dim);
  for (const auto& g : groups) {
    const Eigen::VectorXcd rotated = detail::rotate_to_basis(psi.amplitudes, n, g.basis);
    std::vector<double> probs(dim);
    for (std::size_t b = 0; b < dim; ++b) probs[b] = std::norm(rotated(static_cast<Eigen::Index>(b)));
    std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
    std::fill(counts.begin(), counts.end(), 0L);
    for (long i = 0; i < shots; ++i) ++counts[dist(rng)];

    // Grouped observable O(b) = sum_i h_i s_i(b) over the sampled outcomes.
    double o_sum = 0.0;
    double o_sq = 0.0;
    std::vector<double> term_sums(g.members.size(), 0.0);
    for (std::size_t b = 0; b < dim; ++b) {
      if (counts[b] == 0) continue;
      double o = 0.0;
      for (std::size_t i = 0; i < g.members.size(); ++i) {
        const double sign = (std::popcount(g.members[i].support() & b) & 1) ? -1.0 : 1.0;
        term_sums[i] += sign * static_cast<double>(counts[b]);
        o += s.coefficient(g.members[i]).real() * sign;
      }
      o_sum += o * static_cast<double>(counts[b]);
      o_sq += o * o * static_cast<double>(counts[b]);
    }
    const double ns = static_cast<double>(shots);
    const double mean = o_sum / ns;
    if (shots > 1) {
      const double var = std::max(0.0, (o_sq - ns * mean * mean) / (ns - 1.0));
      variance_sum += var / ns;
    }
    out.value += mean;
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      const double m = term_sums[i] / ns;
      out.terms.push_back({g.members[i], m, std::sqrt(std::max(0.0, 1.0 - m * m) / ns)});
    }
  }
  out.std_error = std::sqrt(variance_sum);
  return out;
}

inline SampledEstimate sampled_expectation(const State& psi, const PauliSum& s,
                                           const std::vector<QwcGroup>& groups,
                                           long shots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sampled_expectation(psi, s, groups, shots, rng);
}

struct MomentOptions {
  GradientMethod method = GradientMethod::Analytic;
  /// 0 means exact expectation values.
  long shots = 0;
  std::uint64_t seed = 0;
};

/// Produces moment tables (with gradients) for a fixed Hamiltonian. With
/// shots > 0 every moment is sampled over QWC groups and gradients use the
/// shift rule on sampled moments; the generator state advances per call so a
/// run is reproducible from its seed.
class MomentEngine {
 public:
  MomentEngine(const PauliSum& h, int max_order, MomentOptions opts = {})
      : cache_(h, max_order), opts_(opts), rng_(opts.seed) {
    if (opts_.shots > 0) {
      for (int n = 0; n <= max_order; ++n) groups_.push_back(qwc_groups(cache_[n]));
    }
  }

  const PowerCache& cache() const { return cache_; }
  const MomentOptions& options() const { return opts_; }

  MomentTable evaluate(const Circuit& c, std::span<const double> theta, int max_order,
                       bool with_gradients) {
    detail::check_order(cache_, max_order);
    if (opts_.shots == 0) {
      MomentTable t = moment_table(c, theta, cache_, max_order);
      if (with_gradients) t.gradients = moment_gradients(c, theta, cache_, max_order, opts_.method);
      return t;
    }
    const State psi = apply_circuit(c, theta);
    MomentTable t{max_order, Eigen::VectorXd(max_order + 1), {}, Eigen::VectorXd(max_order + 1)};
    sample_into(psi, max_order, t.values, &*t.std_errors);
    if (with_gradients) {
      const Circuit dc = decompose_controlled(c);
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(c.n_params(), max_order + 1);
      Eigen::VectorXd vp(max_order + 1), vm(max_order + 1);
      for (int k = 0; k < c.n_params(); ++k) {
        for (const auto& occ : dc.occurrences(k)) {
          sample_into(apply_circuit(dc, theta, {occ.gate, std::numbers::pi / 2.0}), max_order, vp, nullptr);
          sample_into(apply_circuit(dc, theta, {occ.gate, -std::numbers::pi / 2.0}), max_order, vm, nullptr);
          g.row(k) += occ.multiplier * 0.5 * (vp - vm).transpose();
        }
      }
      t.gradients = g;
    }
    return t;
  }

 private:
  void sample_into(const State& psi, int max_order, Eigen::VectorXd& values,
                   Eigen::VectorXd* errors) {
    values(0) = 1.0;
    if (errors) (*errors)(0) = 0.0;
    for (int n = 1; n <= max_order; ++n) {
      const auto est = sampled_expectation(psi, cache_[n], groups_[static_cast<std::size_t>(n)],
                                           opts_.shots, rng_);
      values(n) = est.value;
      if (errors) (*errors)(n) = est.std_error;
    }
  }

  PowerCache cache_;
  MomentOptions opts_;
  std::mt19937_64 rng_;
  std::vector<std::vector<QwcGroup>> groups_;
};

}  // namespace pdsvqs

#endif  // PDSVQS_MOMENTS_HPP
