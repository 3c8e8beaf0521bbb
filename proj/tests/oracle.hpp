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

// Reference implementations used only by the tests. Everything here works on
// dense matrices built from Kronecker products, so it shares no code with the
// bitmask algebra or the statevector kernels under test.

#ifndef PDSVQS_TESTS_ORACLE_HPP
#define PDSVQS_TESTS_ORACLE_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdsvqs/pauli.hpp"
#include "pdsvqs/statesim.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

template <class T>
using CMat = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using CVec = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;

template <class T = double>
CMat<T> kron(const CMat<T>& a, const CMat<T>& b) {
  CMat<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <class T = double>
CMat<T> pauli(char c) {
  CMat<T> m(2, 2);
  const std::complex<T> i(0, 1);
  switch (c) {
    case 'I': m << T(1), T(0), T(0), T(1); break;
    case 'X': m << T(0), T(1), T(1), T(0); break;
    case 'Y': m << T(0), -i, i, T(0); break;
    case 'Z': m << T(1), T(0), T(0), T(-1); break;
    default: throw std::invalid_argument("bad letter");
  }
  return m;
}

/// Leftmost letter is the leftmost tensor factor.
template <class T = double>
CMat<T> string_matrix(const std::string& letters) {
  CMat<T> m = CMat<T>::Identity(1, 1);
  for (char c : letters) m = kron<T>(m, pauli<T>(c));
  return m;
}

template <class T = double>
CMat<T> sum_matrix(const pdsvqs::PauliSum& s) {
  const Eigen::Index d = Eigen::Index{1} << s.n_qubits();
  CMat<T> m = CMat<T>::Zero(d, d);
  for (const auto& t : s.to_terms()) {
    const std::complex<T> c(static_cast<T>(t.coefficient().real()), static_cast<T>(t.coefficient().imag()));
    m += c * string_matrix<T>(t.letters());
  }
  return m;
}

/// Single-qubit operator g on qubit q of n.
template <class T = double>
CMat<T> embed(const CMat<T>& g, int n, int q) {
  CMat<T> m = CMat<T>::Identity(1, 1);
  for (int k = 0; k < n; ++k) m = kron<T>(m, k == q ? g : pauli<T>('I'));
  return m;
}

/// |0><0|_c x I + |1><1|_c x g_t.
template <class T = double>
CMat<T> controlled(const CMat<T>& g, int n, int c, int t) {
  CMat<T> p0 = CMat<T>::Zero(2, 2), p1 = CMat<T>::Zero(2, 2);
  p0(0, 0) = T(1);
  p1(1, 1) = T(1);
  CMat<T> a = CMat<T>::Identity(1, 1), b = CMat<T>::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    a = kron<T>(a, k == c ? p0 : pauli<T>('I'));
    b = kron<T>(b, k == c ? p1 : (k == t ? g : pauli<T>('I')));
  }
  return a + b;
}

/// exp(-i phi P / 2) = cos(phi/2) I - i sin(phi/2) P.
template <class T = double>
CMat<T> rotation(char axis, T phi) {
  using std::cos;
  using std::sin;
  return std::complex<T>(cos(phi / 2), 0) * pauli<T>('I') - std::complex<T>(0, sin(phi / 2)) * pauli<T>(axis);
}

template <class T = double>
CMat<T> gate_unitary(const pdsvqs::Gate& g, int n, T phi) {
  using pdsvqs::GateKind;
  switch (g.kind) {
    case GateKind::RX: return embed<T>(rotation<T>('X', phi), n, g.target);
    case GateKind::RY: return embed<T>(rotation<T>('Y', phi), n, g.target);
    case GateKind::RZ: return embed<T>(rotation<T>('Z', phi), n, g.target);
    case GateKind::CRY: return controlled<T>(rotation<T>('Y', phi), n, g.control, g.target);
    case GateKind::CNOT: return controlled<T>(pauli<T>('X'), n, g.control, g.target);
    case GateKind::X: return embed<T>(pauli<T>('X'), n, g.target);
  }
  return {};
}

template <class T = double>
CVec<T> circuit_state(const pdsvqs::Circuit& c, const std::vector<T>& theta) {
  const int n = c.n_qubits();
  CVec<T> v = CVec<T>::Zero(Eigen::Index{1} << n);
  v(static_cast<Eigen::Index>(c.initial_basis())) = T(1);
  for (const auto& g : c.gates()) {
    const T phi = g.param >= 0 ? static_cast<T>(g.multiplier) * theta[static_cast<std::size_t>(g.param)]
                               : static_cast<T>(g.angle);
    v = gate_unitary<T>(g, n, phi) * v;
  }
  return v;
}

/// PDS(K) ground energy of the ansatz state in extended precision: dense
/// moments, a pivoted LU solve of the Hankel system, and the smallest root
/// of the characteristic polynomial polished by Newton steps.
inline long double pds_energy_ld(const pdsvqs::PauliSum& h, const pdsvqs::Circuit& c,
                                 const std::vector<long double>& theta, int K) {
  using LD = long double;
  const CMat<LD> H = sum_matrix<LD>(h);
  const CVec<LD> psi = circuit_state<LD>(c, theta);
  std::vector<LD> m(static_cast<std::size_t>(2 * K));
  CVec<LD> v = psi;
  m[0] = 1;
  for (int n = 1; n < 2 * K; ++n) {
    v = H * v;
    m[static_cast<std::size_t>(n)] = psi.dot(v).real();
  }
  Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic> M(K, K);
  Eigen::Matrix<LD, Eigen::Dynamic, 1> Y(K);
  for (int a = 0; a < K; ++a) {
    Y(a) = m[static_cast<std::size_t>(2 * K - 1 - a)];
    for (int b = 0; b < K; ++b) M(a, b) = m[static_cast<std::size_t>(2 * K - 2 - a - b)];
  }
  const Eigen::Matrix<LD, Eigen::Dynamic, 1> X = M.fullPivLu().solve(-Y);
  // Seed from the double-precision companion matrix.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(K, K);
  for (int a = 0; a < K; ++a) C(0, a) = -static_cast<double>(X(a));
  for (int a = 1; a < K; ++a) C(a, a - 1) = 1.0;
  const Eigen::VectorXcd z = Eigen::EigenSolver<Eigen::MatrixXd>(C, false).eigenvalues();
  LD e = z(0).real();
  for (Eigen::Index i = 1; i < z.size(); ++i) e = std::min<LD>(e, z(i).real());
  for (int it = 0; it < 50; ++it) {
    LD p = 1, dp = 0;
    for (int a = 0; a < K; ++a) {
      dp = dp * e + p;
      p = p * e + X(a);
    }
    if (dp == 0) break;
    const LD step = p / dp;
    e -= step;
    if (std::abs(step) <= 1e-19L * std::max<LD>(1, std::abs(e))) break;
  }
  return e;
}

/// Central difference of pds_energy_ld at a double-precision point.
inline Eigen::VectorXd pds_gradient_ld(const pdsvqs::PauliSum& h, const pdsvqs::Circuit& c,
                                       const std::vector<double>& theta, int K, long double step = 1e-5L) {
  std::vector<long double> x(theta.begin(), theta.end());
  Eigen::VectorXd g(static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    const long double x0 = x[k];
    auto at = [&](long double d) {
      x[k] = x0 + d;
      return pds_energy_ld(h, c, x, K);
    };
    // Five-point stencil, O(step^4).
    const long double d1 = at(step) - at(-step);
    const long double d2 = at(2 * step) - at(-2 * step);
    x[k] = x0;
    g(static_cast<Eigen::Index>(k)) = static_cast<double>((8 * d1 - d2) / (12 * step));
  }
  return g;
}

inline Eigen::VectorXd central_diff(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x, double h = 1e-5) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double x0 = x[k];
    x[k] = x0 + h;
    const double fp = f(x);
    x[k] = x0 - h;
    const double fm = f(x);
    x[k] = x0;
    g(static_cast<Eigen::Index>(k)) = (fp - fm) / (2 * h);
  }
  return g;
}

inline VectorXcd random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  VectorXcd v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(nd(rng), nd(rng));
  return v / v.norm();
}

inline std::vector<double> random_angles(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  std::vector<double> t(k);
  for (auto& x : t) x = u(rng);
  return t;
}

inline std::string random_letters(int n, std::mt19937_64& rng) {
  static const char kL[] = "IXYZ";
  std::uniform_int_distribution<int> d(0, 3);
  std::string s;
  for (int i = 0; i < n; ++i) s += kL[d(rng)];
  return s;
}

inline pdsvqs::PauliSum random_hermitian_sum(int n, int terms, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  pdsvqs::PauliSum s(n);
  for (int i = 0; i < terms; ++i) s.add(random_letters(n, rng), u(rng));
  return s;
}

}  // namespace oracle

#endif  // PDSVQS_TESTS_ORACLE_HPP
