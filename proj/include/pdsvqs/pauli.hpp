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

#ifndef PDSVQS_PAULI_HPP
#define PDSVQS_PAULI_HPP

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pdsvqs/errors.hpp"

namespace pdsvqs {

using Complex = std::complex<double>;

inline constexpr int kMaxPauliQubits = 64;
inline constexpr double kDefaultDropTol = 1e-12;
inline constexpr int kDefaultMaxPower = 12;

/// Symplectic key of a Pauli string. Qubit q lives at bit (n - 1 - q), so the
/// leftmost letter of the text form is qubit 0 and the most significant bit
/// of the basis index. Per qubit (x,z) = (0,0) I, (1,0) X, (0,1) Z, (1,1) Y.
struct PauliKey {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  friend bool operator==(const PauliKey&, const PauliKey&) = default;
  friend auto operator<=>(const PauliKey&, const PauliKey&) = default;

  bool is_identity() const { return (x | z) == 0; }
  std::uint64_t support() const { return x | z; }
};

struct PauliKeyHash {
  std::size_t operator()(const PauliKey& k) const noexcept {
    std::uint64_t h = k.x * 0x9E3779B97F4A7C15ULL;
    h ^= k.z + 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

inline std::uint64_t qubit_bit(int n_qubits, int q) {
  return std::uint64_t{1} << (n_qubits - 1 - q);
}

inline std::uint64_t full_mask(int n_qubits) {
  return n_qubits == 64 ? ~std::uint64_t{0}
                        : (std::uint64_t{1} << n_qubits) - 1;
}

/// i^k for k taken mod 4.
inline Complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Product of two bare Pauli strings: returns the key of the result and the
/// exponent e such that P_a P_b = i^e P_c.
inline std::pair<PauliKey, int> multiply_keys(const PauliKey& a,
                                              const PauliKey& b) {
  const PauliKey c{a.x ^ b.x, a.z ^ b.z};
  const int e = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) -
                std::popcount(c.x & c.z) + 2 * std::popcount(a.z & b.x);
  return {c, ((e % 4) + 4) % 4};
}

/// Pauli letter of qubit q: one of 'I', 'X', 'Y', 'Z'.
inline char letter_at(const PauliKey& k, int n_qubits, int q) {
  const std::uint64_t bit = qubit_bit(n_qubits, q);
  const bool xb = (k.x & bit) != 0;
  const bool zb = (k.z & bit) != 0;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

inline std::string key_to_string(const PauliKey& k, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = 0; q < n_qubits; ++q) s[static_cast<std::size_t>(q)] = letter_at(k, n_qubits, q);
  return s;
}

inline PauliKey key_from_string(std::string_view letters) {
  const int n = static_cast<int>(letters.size());
  if (n == 0 || n > kMaxPauliQubits) {
    throw InvalidArgument("Pauli string length must be in [1, 64]");
  }
  PauliKey k;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = qubit_bit(n, q);
    switch (letters[static_cast<std::size_t>(q)]) {
      case 'I': break;
      case 'X': k.x |= bit; break;
      case 'Y': k.x |= bit; k.z |= bit; break;
      case 'Z': k.z |= bit; break;
      default:
        throw InvalidArgument("invalid Pauli letter '" +
                              std::string(1, letters[static_cast<std::size_t>(q)]) +
                              "' in \"" + std::string(letters) + "\"");
    }
  }
  return k;
}

class PauliTerm {
 public:
  PauliTerm() = default;
  PauliTerm(int n_qubits, PauliKey key, Complex coefficient = 1.0)
      : n_qubits_(n_qubits), key_(key), coefficient_(coefficient) {
    if (n_qubits < 1 || n_qubits > kMaxPauliQubits) {
      throw InvalidArgument("qubit count must be in [1, 64]");
    }
    if (((key.x | key.z) & ~full_mask(n_qubits)) != 0) {
      throw InvalidArgument("Pauli mask exceeds the qubit count");
    }
  }
  PauliTerm(std::string_view letters, Complex coefficient = 1.0)
      : PauliTerm(static_cast<int>(letters.size()), key_from_string(letters),
                  coefficient) {}

  int n_qubits() const { return n_qubits_; }
  const PauliKey& key() const { return key_; }
  Complex coefficient() const { return coefficient_; }
  std::string letters() const { return key_to_string(key_, n_qubits_); }

 private:
  int n_qubits_ = 1;
  PauliKey key_{};
  Complex coefficient_{1.0, 0.0};
};

/// Exact product with phase tracking.
inline PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw DimensionMismatch("Pauli product of " + std::to_string(a.n_qubits()) +
                            "- and " + std::to_string(b.n_qubits()) +
                            "-qubit strings");
  }
  const auto [key, e] = multiply_keys(a.key(), b.key());
  return PauliTerm(a.n_qubits(), key, a.coefficient() * b.coefficient() * i_pow(e));
}

/// Weighted sum of Pauli strings. Terms are kept in canonical order
/// (lexicographic on (x_mask, z_mask)) with no duplicate keys.
class PauliSum {
 public:
  using TermMap = std::map<PauliKey, Complex>;

  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxPauliQubits) {
      throw InvalidArgument("qubit count must be in [1, 64]");
    }
  }

  static PauliSum identity(int n_qubits, double c = 1.0) {
    PauliSum s(n_qubits);
    s.terms_[PauliKey{}] = c;
    return s;
  }

  static PauliSum from_terms(int n_qubits, const std::vector<PauliTerm>& terms) {
    PauliSum s(n_qubits);
    for (const auto& t : terms) s.add(t);
    return s;
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  /// Accumulates into the existing coefficient; no dropping happens here.
  void add(const PauliTerm& t) {
    check_qubits(t.n_qubits());
    terms_[t.key()] += t.coefficient();
  }
  void add(const PauliKey& k, Complex c) { terms_[k] += c; }
  void add(std::string_view letters, Complex c) { add(PauliTerm(letters, c)); }

  Complex coefficient(const PauliKey& k) const {
    const auto it = terms_.find(k);
    return it == terms_.end() ? Complex{} : it->second;
  }

  std::vector<PauliTerm> to_terms() const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.emplace_back(n_qubits_, k, c);
    return out;
  }

  double max_imag() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c.imag()));
    return m;
  }

  bool is_hermitian(double tol = 1e-12) const { return max_imag() <= tol; }

  PauliSum& operator+=(const PauliSum& o) {
    check_qubits(o.n_qubits_);
    for (const auto& [k, c] : o.terms_) terms_[k] += c;
    return *this;
  }
  PauliSum& operator*=(Complex s) {
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator*(Complex s, PauliSum a) { return a *= s; }

  void check_qubits(int n) const {
    if (n != n_qubits_) {
      throw DimensionMismatch("qubit count mismatch: " + std::to_string(n) +
                              " vs " + std::to_string(n_qubits_));
    }
  }

 private:
  int n_qubits_ = 1;
  TermMap terms_;
};

/// Combines like strings (already merged by the map) and removes terms whose
/// coefficient magnitude falls below drop_tol.
inline PauliSum simplify(const PauliSum& s, double drop_tol = kDefaultDropTol) {
  PauliSum out(s.n_qubits());
  for (const auto& [k, c] : s.terms()) {
    if (std::abs(c) >= drop_tol) out.add(k, c);
  }
  return out;
}

/// Product of two sums, simplified.
inline PauliSum multiply(const PauliSum& a, const PauliSum& b,
                         double drop_tol = kDefaultDropTol) {
  a.check_qubits(b.n_qubits());
  std::unordered_map<PauliKey, Complex, PauliKeyHash> acc;
  acc.reserve(a.size() * 4 + b.size() * 4);
  // Terms are visited in canonical order so the accumulation order, and
  // therefore the rounding, is reproducible.
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      const auto [kc, e] = multiply_keys(ka, kb);
      acc[kc] += ca * cb * i_pow(e);
    }
  }
  PauliSum out(a.n_qubits());
  for (const auto& [k, c] : acc) {
    if (std::abs(c) >= drop_tol) out.add(k, c);
  }
  return out;
}

/// Reduced Pauli expansion of h^n built by repeated multiplication with
/// simplification after each step.
inline PauliSum power(const PauliSum& h, int n, int max_power = kDefaultMaxPower,
                      double drop_tol = kDefaultDropTol) {
  if (n < 0) throw InvalidArgument("negative Hamiltonian power");
  if (n > max_power) {
    throw PowerLimitExceeded("power " + std::to_string(n) +
                             " exceeds the configured limit " +
                             std::to_string(max_power));
  }
  PauliSum acc = PauliSum::identity(h.n_qubits());
  for (int i = 0; i < n; ++i) acc = multiply(acc, h, drop_tol);
  return acc;
}

/// All powers h^0 ... h^max_order, each obtained from the previous one.
inline std::vector<PauliSum> powers_up_to(const PauliSum& h, int max_order,
                                          int max_power = kDefaultMaxPower,
                                          double drop_tol = kDefaultDropTol) {
  if (max_order < 0) throw InvalidArgument("negative Hamiltonian power");
  if (max_order > max_power) {
    throw PowerLimitExceeded("power " + std::to_string(max_order) +
                             " exceeds the configured limit " +
                             std::to_string(max_power));
  }
  std::vector<PauliSum> out;
  out.reserve(static_cast<std::size_t>(max_order) + 1);
  out.push_back(PauliSum::identity(h.n_qubits()));
  for (int n = 1; n <= max_order; ++n) out.push_back(multiply(out.back(), h, drop_tol));
  return out;
}

/// True when the two strings agree on every qubit where both act non-trivially.
inline bool qubitwise_commute(const PauliKey& a, const PauliKey& b) {
  const std::uint64_t both = a.support() & b.support();
  return (((a.x ^ b.x) | (a.z ^ b.z)) & both) == 0;
}

struct QwcGroup {
  /// Shared measurement basis: per qubit the single non-identity letter used
  /// by the members, encoded like a Pauli key.
  PauliKey basis;
  std::vector<PauliKey> members;
};

/// Greedy first-fit over terms sorted by descending |coefficient|; ties keep
/// the canonical order.
inline std::vector<QwcGroup> qwc_groups(const PauliSum& s) {
  std::vector<std::pair<PauliKey, double>> items;
  items.reserve(s.size());
  for (const auto& [k, c] : s.terms()) items.emplace_back(k, std::abs(c));
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<QwcGroup> groups;
  for (const auto& [k, mag] : items) {
    bool placed = false;
    for (auto& g : groups) {
      if (qubitwise_commute(g.basis, k)) {
        g.basis.x |= k.x;
        g.basis.z |= k.z;
        g.members.push_back(k);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back(QwcGroup{k, {k}});
  }
  return groups;
}

/// Dense matrix of the sum in the computational basis.
inline Eigen::MatrixXcd to_dense(const PauliSum& s) {
  const int n = s.n_qubits();
  if (n > 14) throw InvalidArgument("dense conversion limited to 14 qubits");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [k, c] : s.terms()) {
    const Complex phase = c * i_pow(std::popcount(k.x & k.z));
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      const double sign = (std::popcount(k.z & b) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ k.x), static_cast<Eigen::Index>(b)) += phase * sign;
    }
  }
  return m;
}

}  // namespace pdsvqs

#endif  // PDSVQS_PAULI_HPP
