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

#include <random>
#include <set>

#include <catch_amalgamated.hpp>

#include "oracle.hpp"
#include "pdsvqs/models.hpp"
#include "pdsvqs/pauli.hpp"

using namespace pdsvqs;
using Catch::Approx;

namespace {

PauliTerm term(const char* s, Complex c = 1.0) { return PauliTerm(s, c); }

PauliSum hb() { return toy_b_hamiltonian(); }

}  // namespace

TEST_CASE("single-qubit products carry exact phases", "[pauli]") {
  const auto xy = multiply(term("X"), term("Y"));
  CHECK(xy.letters() == "Z");
  CHECK(xy.coefficient() == Complex(0.0, 1.0));

  const auto yx = multiply(term("Y"), term("X"));
  CHECK(yx.coefficient() == Complex(0.0, -1.0));

  const auto xxzz = multiply(term("XX"), term("ZZ"));
  CHECK(xxzz.letters() == "YY");
  CHECK(xxzz.coefficient() == Complex(-1.0, 0.0));

  for (const char* p : {"XY", "ZI", "YZ", "II"}) {
    const auto ip = multiply(term("II"), term(p, Complex(0.3, -0.2)));
    CHECK(ip.letters() == p);
    CHECK(ip.coefficient() == Complex(0.3, -0.2));
  }
}

TEST_CASE("unit strings multiply to unit-modulus phases", "[pauli]") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto a = oracle::random_letters(4, rng);
    const auto b = oracle::random_letters(4, rng);
    const Complex c = multiply(term(a.c_str()), term(b.c_str())).coefficient();
    const bool unit = c == Complex(1, 0) || c == Complex(-1, 0) || c == Complex(0, 1) || c == Complex(0, -1);
    CHECK(unit);
  }
}

TEST_CASE("string products match dense Kronecker products", "[pauli][oracle]") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 4; ++n) {
    for (int i = 0; i < 100; ++i) {
      const auto a = oracle::random_letters(n, rng);
      const auto b = oracle::random_letters(n, rng);
      const auto p = multiply(term(a.c_str()), term(b.c_str()));
      const Eigen::MatrixXcd want = oracle::string_matrix(a) * oracle::string_matrix(b);
      const Eigen::MatrixXcd got = p.coefficient() * oracle::string_matrix(p.letters());
      CHECK((want - got).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("qubit-count mismatch is rejected", "[pauli]") {
  CHECK_THROWS_AS(multiply(term("X"), term("XX")), DimensionMismatch);
  CHECK_THROWS_AS(PauliTerm("XQ", 1.0), InvalidArgument);
}

TEST_CASE("text form round-trips", "[pauli]") {
  for (const char* s : {"I", "X", "Y", "Z", "XYZI", "IIZY"}) {
    CHECK(key_to_string(key_from_string(s), static_cast<int>(std::string(s).size())) == s);
  }
}

TEST_CASE("simplify merges and drops", "[pauli]") {
  PauliSum s(2);
  s.add("ZZ", 0.5);
  s.add("ZZ", 0.5);
  const auto t = simplify(s);
  REQUIRE(t.size() == 1);
  CHECK(t.coefficient(key_from_string("ZZ")) == Complex(1.0, 0.0));

  PauliSum u(1);
  u.add("X", 1.0);
  u.add("X", -1.0);
  CHECK(simplify(u).empty());
}

TEST_CASE("H_B squared", "[pauli]") {
  const auto h2 = power(hb(), 2);
  REQUIRE(h2.size() == 4);
  CHECK(h2.coefficient(key_from_string("II")).real() == Approx(1.5).margin(1e-15));
  CHECK(h2.coefficient(key_from_string("IZ")).real() == Approx(1.0).margin(1e-15));
  CHECK(h2.coefficient(key_from_string("ZZ")).real() == Approx(-1.0).margin(1e-15));
  CHECK(h2.coefficient(key_from_string("ZI")).real() == Approx(-0.5).margin(1e-15));
  const Eigen::MatrixXcd d = oracle::sum_matrix(hb());
  CHECK((oracle::sum_matrix(h2) - d * d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("power edge cases", "[pauli]") {
  const auto h0 = power(h2_hamiltonian(), 0);
  REQUIRE(h0.size() == 1);
  CHECK(h0.coefficient(key_from_string("II")) == Complex(1.0, 0.0));

  PauliSum z(1);
  z.add("Z", 1.0);
  const auto z2 = power(z, 2);
  REQUIRE(z2.size() == 1);
  CHECK(z2.coefficient(key_from_string("I")) == Complex(1.0, 0.0));

  CHECK_THROWS_AS(power(z, 13), PowerLimitExceeded);
}

TEST_CASE("powers match dense matrix powers", "[pauli][oracle]") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 4; ++n) {
    const PauliSum h = oracle::random_hermitian_sum(n, 6, rng);
    const Eigen::MatrixXcd d = oracle::sum_matrix(h);
    Eigen::MatrixXcd dn = Eigen::MatrixXcd::Identity(d.rows(), d.cols());
    for (int k = 1; k <= 6; ++k) {
      dn = dn * d;
      const Eigen::MatrixXcd got = oracle::sum_matrix(power(h, k));
      CHECK((got - dn).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, dn.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("power(m+n) equals power(m) times power(n)", "[pauli]") {
  std::mt19937_64 rng(5);
  const PauliSum h = oracle::random_hermitian_sum(3, 5, rng);
  for (int m = 0; m <= 3; ++m) {
    for (int n = 0; n <= 3; ++n) {
      const PauliSum lhs = power(h, m + n);
      const PauliSum rhs = multiply(power(h, m), power(h, n));
      std::set<PauliKey> keys;
      for (const auto& [k, c] : lhs.terms()) keys.insert(k);
      for (const auto& [k, c] : rhs.terms()) keys.insert(k);
      for (const auto& k : keys) CHECK(std::abs(lhs.coefficient(k) - rhs.coefficient(k)) < 1e-10);
    }
  }
}

TEST_CASE("Hermitian powers stay real", "[pauli]") {
  std::mt19937_64 rng(9);
  const PauliSum h = oracle::random_hermitian_sum(4, 8, rng);
  for (int n = 1; n <= 6; ++n) CHECK(power(h, n).max_imag() < 1e-12);
}

TEST_CASE("cumulative string counts saturate", "[pauli]") {
  for (const auto& h : {toy_a_hamiltonian(), toy_b_hamiltonian(), h2_hamiltonian(), heisenberg_hamiltonian(0.1, 1.0)}) {
    std::set<PauliKey> seen;
    std::size_t prev = 0;
    bool saturated = false;
    for (const auto& p : powers_up_to(h, 8)) {
      for (const auto& [k, c] : p.terms()) seen.insert(k);
      CHECK(seen.size() >= prev);
      if (saturated) CHECK(seen.size() == prev);
      if (prev != 0 && seen.size() == prev) saturated = true;
      prev = seen.size();
    }
  }
}

TEST_CASE("qwc grouping", "[pauli]") {
  PauliSum a(2);
  a.add("ZI", 1.0);
  a.add("IZ", 0.5);
  a.add("ZZ", 0.25);
  CHECK(qwc_groups(a).size() == 1);

  PauliSum b(2);
  b.add("XX", 1.0);
  b.add("ZI", 1.0);
  CHECK(qwc_groups(b).size() == 2);
}

TEST_CASE("qwc groups partition the sum and commute qubit-wise", "[pauli]") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const PauliSum s = oracle::random_hermitian_sum(4, 30, rng);
    const auto groups = qwc_groups(s);
    std::multiset<PauliKey> seen;
    for (const auto& g : groups) {
      for (std::size_t i = 0; i < g.members.size(); ++i) {
        seen.insert(g.members[i]);
        CHECK(qubitwise_commute(g.members[i], g.basis));
        for (std::size_t j = 0; j < i; ++j) CHECK(qubitwise_commute(g.members[i], g.members[j]));
      }
    }
    CHECK(seen.size() == s.size());
    for (const auto& [k, c] : s.terms()) CHECK(seen.count(k) == 1);
  }
}

TEST_CASE("Heisenberg powers through 7 need 21 qwc bases", "[pauli]") {
  const PauliSum h = heisenberg_hamiltonian(0.1, 1.0);
  PauliSum uni(4);
  for (int n = 1; n <= 7; ++n) {
    const PauliSum p = power(h, n);
    for (const auto& [k, c] : p.terms()) {
      const double w = std::abs(c);
      if (w > std::abs(uni.coefficient(k))) {
        uni.add(k, w - std::abs(uni.coefficient(k)));
      }
    }
  }
  CHECK(qwc_groups(uni).size() == 21);
}
