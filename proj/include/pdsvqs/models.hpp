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

#ifndef PDSVQS_MODELS_HPP
#define PDSVQS_MODELS_HPP

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pdsvqs/errors.hpp"
#include "pdsvqs/optim.hpp"
#include "pdsvqs/pauli.hpp"
#include "pdsvqs/pds.hpp"
#include "pdsvqs/statesim.hpp"

namespace pdsvqs {

enum class Entangler { None, Chain, Ring, Pairs };

struct LayeredRyOptions {
  int layers = 1;
  Entangler entangler = Entangler::Ring;
  /// CNOT (control, target) list for Entangler::Pairs.
  std::vector<std::pair<int, int>> pairs;
  /// Per rotation (layer-major); a value freezes that rotation at the angle.
  std::vector<std::optional<double>> frozen;
  std::uint64_t initial_basis = 0;
};

/// Hardware-efficient template: each layer is an RY on every qubit followed by
/// CNOTs. Free rotations get consecutive parameter indices.
inline Circuit layered_ry_ansatz(int n_qubits, const LayeredRyOptions& opts = {}) {
  if (opts.layers < 1) throw InvalidArgument("layer count must be positive");
  const auto n_rot = static_cast<std::size_t>(opts.layers) * static_cast<std::size_t>(n_qubits);
  if (!opts.frozen.empty() && opts.frozen.size() != n_rot) {
    throw DimensionMismatch("frozen list must have one entry per rotation (" +
                            std::to_string(n_rot) + ")");
  }
  int n_free = 0;
  for (std::size_t r = 0; r < n_rot; ++r) {
    if (opts.frozen.empty() || !opts.frozen[r]) ++n_free;
  }
  Circuit c(n_qubits, n_free, opts.initial_basis);
  int p = 0;
  for (int l = 0; l < opts.layers; ++l) {
    for (int q = 0; q < n_qubits; ++q) {
      const auto r = static_cast<std::size_t>(l * n_qubits + q);
      if (!opts.frozen.empty() && opts.frozen[r]) {
        c.fixed(GateKind::RY, q, *opts.frozen[r]);
      } else {
        c.ry(q, p++);
      }
    }
    switch (opts.entangler) {
      case Entangler::None:
        break;
      case Entangler::Chain:
        for (int q = 0; q + 1 < n_qubits; ++q) c.cnot(q, q + 1);
        break;
      case Entangler::Ring:
        for (int q = 0; q + 1 < n_qubits; ++q) c.cnot(q, q + 1);
        if (n_qubits > 2) c.cnot(n_qubits - 1, 0);
        break;
      case Entangler::Pairs:
        for (const auto& [ctl, tgt] : opts.pairs) c.cnot(ctl, tgt);
        break;
    }
  }
  return c;
}

struct ModelOptions {
  double J = 0.1;
  double B = 1.0;
};

struct ModelBundle {
  std::string name;
  PauliSum hamiltonian{1};
  Circuit circuit;
  Eigen::VectorXd theta0;
  double eta = 0.05;
  Schedule schedule = Schedule::Constant;
  /// Moment-matrix policy used when none is requested explicitly.
  RegularizationPolicy moment_policy;
  Eigensystem reference;

  double exact_energy() const { return reference.ground_energy(); }
  int degeneracy() const { return reference.degeneracy(); }

  Problem problem() const {
    return Problem{hamiltonian, circuit, theta0, exact_energy(), reference.ground_space};
  }
};

inline PauliSum toy_a_hamiltonian() {
  PauliSum h(2);
  h.add("II", 1.5);
  h.add("IZ", 0.5);
  h.add("ZZ", -1.0);
  return h;
}

inline PauliSum toy_b_hamiltonian() {
  PauliSum h(2);
  h.add("II", 1.0);
  h.add("IZ", 0.5);
  h.add("ZZ", -0.5);
  return h;
}

inline PauliSum h2_hamiltonian() {
  PauliSum h(2);
  h.add("ZI", 0.4);
  h.add("IZ", 0.4);
  h.add("XX", 0.2);
  return h;
}

/// Plaquette bonds (0,1), (1,2), (2,3), (3,0).
inline std::vector<std::pair<int, int>> plaquette_bonds() { return {{0, 1}, {1, 2}, {2, 3}, {3, 0}}; }

inline PauliSum heisenberg_hamiltonian(double J, double B) {
  const int n = 4;
  PauliSum h(n);
  for (const auto& [a, b] : plaquette_bonds()) {
    for (char p : {'X', 'Y', 'Z'}) {
      std::string s(n, 'I');
      s[static_cast<std::size_t>(a)] = p;
      s[static_cast<std::size_t>(b)] = p;
      h.add(s, J);
    }
  }
  for (int q = 0; q < n; ++q) {
    std::string s(n, 'I');
    s[static_cast<std::size_t>(q)] = 'Z';
    h.add(s, B);
  }
  return simplify(h);
}

/// Sum_i Z_i.
inline PauliSum magnetization(int n_qubits) {
  PauliSum m(n_qubits);
  for (int q = 0; q < n_qubits; ++q) {
    std::string s(static_cast<std::size_t>(n_qubits), 'I');
    s[static_cast<std::size_t>(q)] = 'Z';
    m.add(s, 1.0);
  }
  return m;
}

inline const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"toy_a", "toy_b", "h2_effective", "heisenberg_2x2"};
  return names;
}

inline std::string canonical_model_name(std::string name) {
  for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (name == "h2") return "h2_effective";
  if (name == "heisenberg") return "heisenberg_2x2";
  return name;
}

inline ModelBundle build_model(const std::string& requested, const ModelOptions& opts = {}) {
  const std::string name = canonical_model_name(requested);
  ModelBundle m;
  m.name = name;
  if (name == "toy_a") {
    m.hamiltonian = toy_a_hamiltonian();
    m.circuit = Circuit(2, 2);
    m.circuit.rx(0, 0).cry(0, 1, 1);
    m.theta0 = Eigen::Vector2d(0.01, 0.01);
  } else if (name == "toy_b") {
    m.hamiltonian = toy_b_hamiltonian();
    m.circuit = Circuit(2, 2, 1);
    m.circuit.rx(0, 0).rx(1, 0).cry(0, 1, 1);
    m.theta0 = Eigen::Vector2d(3.0 * std::numbers::pi / 8.0 + 0.05, 0.05);
  } else if (name == "h2_effective") {
    m.hamiltonian = h2_hamiltonian();
    m.circuit = Circuit(2, 4);
    m.circuit.ry(0, 0, 2.0).ry(1, 1, 2.0).cnot(0, 1).ry(0, 2, 2.0).ry(1, 3, 2.0);
    m.theta0 = Eigen::Vector4d(7.0 * std::numbers::pi / 32.0, std::numbers::pi / 2.0, 0.0, 0.0);
    m.moment_policy = RegularizationPolicy::truncated();
  } else if (name == "heisenberg_2x2") {
    m.hamiltonian = heisenberg_hamiltonian(opts.J, opts.B);
    LayeredRyOptions lo;
    lo.entangler = Entangler::Pairs;
    lo.pairs = {{0, 1}};
    lo.frozen = {std::nullopt, 0.0, 3.0, 3.0};
    m.circuit = layered_ry_ansatz(4, lo);
    m.theta0 = Eigen::VectorXd::Constant(1, -3.0);
    m.eta = 1.0;
    m.schedule = Schedule::InverseIteration;
  } else {
    throw InvalidArgument("unknown model '" + requested + "'");
  }
  m.reference = exact_eigensystem(m.hamiltonian);
  return m;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Parses one `<coefficient> <letters>` term per line; `#` starts a comment.
inline PauliSum load_hamiltonian(std::string_view text) {
  std::optional<PauliSum> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (std::size_t m; (m = line.find("\xE2\x88\x92")) != std::string::npos;) line.replace(m, 3, "-");
    const std::string_view body = detail::trim(line);
    if (body.empty()) continue;

    std::istringstream ss{std::string(body)};
    std::string coeff_tok, letters, extra;
    ss >> coeff_tok >> letters;
    if (letters.empty()) throw ParseError(line_no, "expected '<coefficient> <pauli string>'");
    if (ss >> extra) throw ParseError(line_no, "unexpected token '" + extra + "'");

    double c = 0.0;
    const char* first = coeff_tok.data();
    const char* last = first + coeff_tok.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, c);
    if (ec != std::errc() || ptr != last) {
      if (coeff_tok.find_first_of("ijIJ") != std::string::npos) {
        throw ParseError(line_no, "non-real coefficient '" + coeff_tok + "'");
      }
      throw ParseError(line_no, "invalid coefficient '" + coeff_tok + "'");
    }
    PauliKey key;
    try {
      key = key_from_string(letters);
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
    const int n = static_cast<int>(letters.size());
    if (!out) {
      out.emplace(n);
    } else if (out->n_qubits() != n) {
      throw ParseError(line_no, "string length " + std::to_string(n) + " differs from " +
                                    std::to_string(out->n_qubits()));
    }
    out->add(key, c);
  }
  if (!out) throw ParseError(line_no, "no terms");
  return simplify(*out);
}

inline PauliSum load_hamiltonian_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_hamiltonian(ss.str());
}

/// Canonical text form with 17 significant digits.
inline std::string serialize_hamiltonian(const PauliSum& s) {
  if (!s.is_hermitian()) throw NonHermitian("cannot serialize non-real coefficients");
  std::string out = "# " + std::to_string(s.size()) + " terms, " + std::to_string(s.n_qubits()) +
                    " qubits\n";
  char buf[64];
  for (const auto& [k, c] : s.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g", c.real());
    out += buf;
    out += ' ';
    out += key_to_string(k, s.n_qubits());
    out += '\n';
  }
  return out;
}

}  // namespace pdsvqs

#endif  // PDSVQS_MODELS_HPP
