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

#ifndef PDSVQS_STATESIM_HPP
#define PDSVQS_STATESIM_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pdsvqs/errors.hpp"
#include "pdsvqs/pauli.hpp"

namespace pdsvqs {

inline constexpr int kMaxDenseQubits = 12;
inline constexpr int kMaxStateQubits = 24;

struct State {
  int n_qubits = 1;
  Eigen::VectorXcd amplitudes;

  static State basis(int n_qubits, std::uint64_t index) {
    if (n_qubits < 1 || n_qubits > kMaxStateQubits) {
      throw InvalidArgument("state qubit count must be in [1, 24]");
    }
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (index >= static_cast<std::uint64_t>(dim)) {
      throw InvalidArgument("basis index out of range");
    }
    State s{n_qubits, Eigen::VectorXcd::Zero(dim)};
    s.amplitudes(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
  }

  Eigen::Index dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
};

enum class GateKind { RX, RY, RZ, CRY, CNOT, X };

inline bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ ||
         k == GateKind::CRY;
}

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CRY: return "CRY";
    case GateKind::CNOT: return "CNOT";
    case GateKind::X: return "X";
  }
  return "?";
}

/// One gate occurrence. A rotation either follows a parameter
/// (angle = multiplier * theta[param]) or is frozen at `angle`.
/// Rotations are R(phi) = exp(-i phi G / 2).
struct Gate {
  GateKind kind = GateKind::X;
  int target = 0;
  int control = -1;
  int param = -1;
  double multiplier = 1.0;
  double angle = 0.0;

  bool parametrized() const { return param >= 0; }
  double effective_angle(std::span<const double> theta) const {
    return parametrized() ? multiplier * theta[static_cast<std::size_t>(param)] : angle;
  }
};

struct Occurrence {
  std::size_t gate = 0;
  double multiplier = 1.0;
};

class Circuit {
 public:
  Circuit() = default;
  Circuit(int n_qubits, int n_params, std::uint64_t initial_basis = 0)
      : n_qubits_(n_qubits), n_params_(n_params), initial_basis_(initial_basis) {
    if (n_qubits < 1 || n_qubits > kMaxStateQubits) {
      throw InvalidArgument("circuit qubit count must be in [1, 24]");
    }
    if (n_params < 0) throw InvalidArgument("negative parameter count");
    if (initial_basis >= (std::uint64_t{1} << n_qubits)) {
      throw InvalidArgument("initial basis state out of range");
    }
  }

  int n_qubits() const { return n_qubits_; }
  int n_params() const { return n_params_; }
  std::uint64_t initial_basis() const { return initial_basis_; }
  const std::vector<Gate>& gates() const { return gates_; }

  Circuit& rx(int q, int param, double mult = 1.0) { return rot(GateKind::RX, -1, q, param, mult); }
  Circuit& ry(int q, int param, double mult = 1.0) { return rot(GateKind::RY, -1, q, param, mult); }
  Circuit& rz(int q, int param, double mult = 1.0) { return rot(GateKind::RZ, -1, q, param, mult); }
  Circuit& cry(int c, int t, int param, double mult = 1.0) {
    return rot(GateKind::CRY, c, t, param, mult);
  }
  Circuit& fixed(GateKind kind, int q, double angle, int control = -1) {
    return push(Gate{kind, q, control, -1, 1.0, angle});
  }
  Circuit& cnot(int c, int t) {
    check_pair(c, t);
    gates_.push_back(Gate{GateKind::CNOT, t, c});
    return *this;
  }
  Circuit& x(int q) {
    check_qubit(q);
    gates_.push_back(Gate{GateKind::X, q});
    return *this;
  }
  Circuit& push(const Gate& g) {
    check_qubit(g.target);
    if (g.control >= 0) check_pair(g.control, g.target);
    if ((g.kind == GateKind::CRY || g.kind == GateKind::CNOT) && g.control < 0) {
      throw InvalidArgument(std::string(gate_name(g.kind)) + " needs a control qubit");
    }
    if (g.parametrized() && !is_rotation(g.kind)) {
      throw InvalidArgument("only rotations can be parametrized");
    }
    if (g.param >= n_params_) {
      throw InvalidArgument("parameter index " + std::to_string(g.param) +
                            " is not declared");
    }
    gates_.push_back(g);
    return *this;
  }

  /// Gate occurrences driven by parameter p, in application order.
  std::vector<Occurrence> occurrences(int p) const {
    std::vector<Occurrence> out;
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      if (gates_[i].param == p) out.push_back({i, gates_[i].multiplier});
    }
    return out;
  }

  /// Every declared parameter must drive at least one gate.
  void validate() const {
    for (int p = 0; p < n_params_; ++p) {
      if (occurrences(p).empty()) {
        throw InvalidArgument("parameter " + std::to_string(p) + " is unbound");
      }
    }
  }

 private:
  Circuit& rot(GateKind k, int c, int t, int param, double mult) {
    Gate g{k, t, c, param, mult, 0.0};
    return push(g);
  }
  void check_qubit(int q) const {
    if (q < 0 || q >= n_qubits_) {
      throw InvalidArgument("qubit index " + std::to_string(q) + " out of range");
    }
  }
  void check_pair(int c, int t) const {
    check_qubit(c);
    check_qubit(t);
    if (c == t) throw InvalidArgument("control and target coincide");
  }

  int n_qubits_ = 1;
  int n_params_ = 0;
  std::uint64_t initial_basis_ = 0;
  std::vector<Gate> gates_;
};

namespace detail {

using Mat2 = Eigen::Matrix2cd;

inline Mat2 rotation_matrix(GateKind k, double phi) {
  const double c = std::cos(phi / 2.0);
  const double s = std::sin(phi / 2.0);
  const Complex I(0.0, 1.0);
  Mat2 m;
  switch (k) {
    case GateKind::RX: m << c, -I * s, -I * s, c; break;
    case GateKind::RY:
    case GateKind::CRY: m << c, -s, s, c; break;
    case GateKind::RZ: m << std::exp(-I * (phi / 2.0)), 0.0, 0.0, std::exp(I * (phi / 2.0)); break;
    default: m << 0.0, 1.0, 1.0, 0.0; break;
  }
  return m;
}

inline Mat2 generator_matrix(GateKind k) {
  const Complex I(0.0, 1.0);
  Mat2 m;
  switch (k) {
    case GateKind::RX: m << 0.0, 1.0, 1.0, 0.0; break;
    case GateKind::RY:
    case GateKind::CRY: m << 0.0, -I, I, 0.0; break;
    case GateKind::RZ: m << 1.0, 0.0, 0.0, -1.0; break;
    default: throw InvalidArgument("gate has no generator");
  }
  return m;
}

/// Applies a 2x2 matrix on `target`, optionally only where `control` is 1.
inline void apply_2x2(Eigen::VectorXcd& v, int n, int target, int control,
                      const Mat2& m) {
  const std::uint64_t tb = qubit_bit(n, target);
  const std::uint64_t cb = control >= 0 ? qubit_bit(n, control) : 0;
  const auto dim = static_cast<std::uint64_t>(v.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (b & tb) continue;
    if (cb && !(b & cb)) continue;
    const auto i0 = static_cast<Eigen::Index>(b);
    const auto i1 = static_cast<Eigen::Index>(b | tb);
    const Complex a0 = v(i0);
    const Complex a1 = v(i1);
    v(i0) = m(0, 0) * a0 + m(0, 1) * a1;
    v(i1) = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

/// Projects onto the control = 1 subspace (zeroes the rest).
inline void project_control(Eigen::VectorXcd& v, int n, int control) {
  const std::uint64_t cb = qubit_bit(n, control);
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    if (!(static_cast<std::uint64_t>(b) & cb)) v(b) = 0.0;
  }
}

inline void apply_gate(Eigen::VectorXcd& v, int n, const Gate& g, double phi) {
  switch (g.kind) {
    case GateKind::CNOT:
    case GateKind::X: {
      Mat2 x;
      x << 0.0, 1.0, 1.0, 0.0;
      apply_2x2(v, n, g.target, g.kind == GateKind::CNOT ? g.control : -1, x);
      break;
    }
    case GateKind::CRY:
      apply_2x2(v, n, g.target, g.control, rotation_matrix(g.kind, phi));
      break;
    default:
      apply_2x2(v, n, g.target, -1, rotation_matrix(g.kind, phi));
      break;
  }
}

/// Multiplies by the generator G of a rotation gate (for CRY, |1><1|_c (x) Y_t).
inline void apply_generator(Eigen::VectorXcd& v, int n, const Gate& g) {
  if (g.kind == GateKind::CRY) project_control(v, n, g.control);
  apply_2x2(v, n, g.target, g.kind == GateKind::CRY ? g.control : -1,
            generator_matrix(g.kind));
}

inline void check_theta(const Circuit& c, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != c.n_params()) {
    throw DimensionMismatch("expected " + std::to_string(c.n_params()) +
                            " parameters, got " + std::to_string(theta.size()));
  }
}

}  // namespace detail

/// Evolves the circuit's initial basis state through every gate. `angle_shift`
/// optionally adds an offset to one gate's angle (used by the shift rule).
inline State apply_circuit(const Circuit& c, std::span<const double> theta,
                           std::pair<std::size_t, double> angle_shift = {SIZE_MAX, 0.0}) {
  detail::check_theta(c, theta);
  State s = State::basis(c.n_qubits(), c.initial_basis());
  const auto& gates = c.gates();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    double phi = gates[i].effective_angle(theta);
    if (i == angle_shift.first) phi += angle_shift.second;
    detail::apply_gate(s.amplitudes, c.n_qubits(), gates[i], phi);
  }
  return s;
}

inline State apply_circuit(const Circuit& c, const Eigen::VectorXd& theta) {
  return apply_circuit(c, std::span<const double>(theta.data(), static_cast<std::size_t>(theta.size())));
}

/// Exact d|phi>/d theta_k by the product rule over every occurrence of theta_k.
/// The result is unnormalized.
inline State state_derivative(const Circuit& c, std::span<const double> theta, int k) {
  detail::check_theta(c, theta);
  if (k < 0 || k >= c.n_params()) {
    throw InvalidArgument("parameter index " + std::to_string(k) + " out of range");
  }
  const int n = c.n_qubits();
  const auto& gates = c.gates();
  State out{n, Eigen::VectorXcd::Zero(Eigen::Index{1} << n)};
  const Complex minus_i(0.0, -1.0);
  for (const auto& occ : c.occurrences(k)) {
    State s = State::basis(n, c.initial_basis());
    for (std::size_t i = 0; i < gates.size(); ++i) {
      detail::apply_gate(s.amplitudes, n, gates[i], gates[i].effective_angle(theta));
      if (i == occ.gate) {
        detail::apply_generator(s.amplitudes, n, gates[i]);
        s.amplitudes *= minus_i * (occ.multiplier / 2.0);
      }
    }
    out.amplitudes += s.amplitudes;
  }
  return out;
}

inline State state_derivative(const Circuit& c, const Eigen::VectorXd& theta, int k) {
  return state_derivative(
      c, std::span<const double>(theta.data(), static_cast<std::size_t>(theta.size())), k);
}

/// S|psi> for a Pauli sum S.
inline Eigen::VectorXcd apply_pauli_sum(const PauliSum& s, const Eigen::VectorXcd& psi) {
  const auto dim = static_cast<std::uint64_t>(psi.size());
  if (dim != (std::uint64_t{1} << s.n_qubits())) {
    throw DimensionMismatch("state and operator qubit counts differ");
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (const auto& [k, c] : s.terms()) {
    const Complex phase = c * i_pow(std::popcount(k.x & k.z));
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(k.z & b) & 1) ? -1.0 : 1.0;
      out(static_cast<Eigen::Index>(b ^ k.x)) += phase * sign * psi(static_cast<Eigen::Index>(b));
    }
  }
  return out;
}

/// <bra| S |ket>.
inline Complex matrix_element(const Eigen::VectorXcd& bra, const PauliSum& s,
                              const Eigen::VectorXcd& ket) {
  return bra.dot(apply_pauli_sum(s, ket));
}

inline constexpr double kImagResidueTol = 1e-10;

/// <psi|S|psi> for Hermitian S; a residual imaginary part above 1e-10 is an error.
inline double expectation(const State& psi, const PauliSum& s) {
  if (psi.n_qubits != s.n_qubits()) {
    throw DimensionMismatch("state and operator qubit counts differ");
  }
  const Complex v = matrix_element(psi.amplitudes, s, psi.amplitudes);
  if (std::abs(v.imag()) > kImagResidueTol * std::max(1.0, std::abs(v.real()))) {
    throw NonHermitian("expectation value has imaginary part " +
                       std::to_string(v.imag()));
  }
  return v.real();
}

/// Squared norm of the projection of psi onto span(basis). Columns must be
/// orthonormal.
inline double fidelity(const State& psi, const Eigen::MatrixXcd& ground_space) {
  if (ground_space.rows() != psi.dim()) {
    throw DimensionMismatch("ground space and state dimensions differ");
  }
  const Eigen::MatrixXcd gram = ground_space.adjoint() * ground_space;
  const double dev =
      (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (gram.size() > 0 && dev > 1e-8) {
    throw InvalidArgument("ground-space basis is not orthonormal");
  }
  const double f = (ground_space.adjoint() * psi.amplitudes).squaredNorm();
  return std::clamp(f, 0.0, 1.0);
}

struct Eigensystem {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // columns follow eigenvalues
  Eigen::MatrixXcd ground_space; // orthonormal basis of the lowest level

  double ground_energy() const { return eigenvalues(0); }
  int degeneracy() const { return static_cast<int>(ground_space.cols()); }
};

inline constexpr double kGroundDegeneracyTol = 1e-9;

inline Eigensystem exact_eigensystem(const PauliSum& s) {
  if (s.n_qubits() > kMaxDenseQubits) {
    throw InvalidArgument("exact diagonalization limited to " +
                          std::to_string(kMaxDenseQubits) + " qubits");
  }
  const Eigen::MatrixXcd h = to_dense(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  Eigensystem out{es.eigenvalues(), es.eigenvectors(), {}};
  const double e0 = out.eigenvalues(0);
  Eigen::Index deg = 0;
  while (deg < out.eigenvalues.size() &&
         out.eigenvalues(deg) - e0 <= kGroundDegeneracyTol) {
    ++deg;
  }
  out.ground_space = out.eigenvectors.leftCols(deg);
  return out;
}

}  // namespace pdsvqs

#endif  // PDSVQS_STATESIM_HPP
