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

#include <cmath>
#include <random>

#include <catch_amalgamated.hpp>

#include "oracle.hpp"
#include "pdsvqs/models.hpp"
#include "pdsvqs/moments.hpp"

using namespace pdsvqs;
using Catch::Approx;

namespace {

std::vector<ModelBundle> all_models() {
  std::vector<ModelBundle> out;
  for (const auto& n : model_names()) out.push_back(build_model(n));
  return out;
}

double moment_at(const Circuit& c, const PowerCache& cache, const std::vector<double>& th, int n) {
  return moment_table(c, th, cache, n).values(n);
}

}  // namespace

TEST_CASE("moments of simple states", "[moments]") {
  const PowerCache h2(h2_hamiltonian(), 3);
  const Circuit id(2, 0);
  const MomentTable t = moment_table(id, std::vector<double>{}, h2, 3);
  CHECK(t.values(0) == 1.0);
  CHECK(t.values(1) == Approx(0.8).margin(1e-15));
  CHECK(t.values(2) == Approx(0.68).margin(1e-15));
  CHECK(t.values(3) == Approx(0.544).margin(1e-15));

  const PowerCache ha(toy_a_hamiltonian(), 5);
  const MomentTable e = moment_table(State::basis(2, 3), ha, 5);
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(e.values(n)) < 1e-15);

  State bell{2, Eigen::VectorXcd::Zero(4)};
  bell.amplitudes(0) = bell.amplitudes(3) = 1.0 / std::sqrt(2.0);
  const MomentTable b = moment_table(bell, ha, 5);
  for (int n = 1; n <= 5; ++n) CHECK(b.values(n) == Approx(0.5).margin(1e-14));
}

TEST_CASE("order limits are enforced", "[moments]") {
  const PowerCache h(h2_hamiltonian(), 3);
  CHECK_THROWS_AS(moment_table(State::basis(2, 0), h, 4), InvalidArgument);
  CHECK_THROWS_AS(moment_table(State::basis(2, 0), h, 0), InvalidArgument);
  CHECK_THROWS_AS(moment_table(State::basis(3, 0), h, 2), DimensionMismatch);
}

TEST_CASE("shift rule on RX with H = Z", "[moments]") {
  PauliSum z(1);
  z.add("Z", 1.0);
  const PowerCache cache(z, 1);
  Circuit c(1, 1);
  c.rx(0, 0);
  for (double th : {-2.0, -0.3, 0.0, 0.7, 2.5}) {
    const std::vector<double> t{th};
    const auto gs = moment_gradients(c, t, cache, 1, GradientMethod::Shift);
    const auto ga = moment_gradients(c, t, cache, 1, GradientMethod::Analytic);
    CHECK(gs(0, 1) == Approx(-std::sin(th)).margin(1e-14));
    CHECK(ga(0, 1) == Approx(-std::sin(th)).margin(1e-14));
    CHECK(gs(0, 0) == 0.0);
  }
}

TEST_CASE("a shared parameter sums its occurrences", "[moments]") {
  const auto b = build_model("toy_b");
  const PowerCache cache(b.hamiltonian, 3);
  const std::vector<double> th{0.4, -1.1};
  const auto g = moment_gradients(b.circuit, th, cache, 3, GradientMethod::Shift);

  // Same circuit with the two RX rotations on separate parameters.
  Circuit split(2, 3, 1);
  split.rx(0, 0).rx(1, 1).cry(0, 1, 2);
  const std::vector<double> th3{0.4, 0.4, -1.1};
  const auto gs = moment_gradients(split, th3, cache, 3, GradientMethod::Shift);
  for (int n = 1; n <= 3; ++n) {
    CHECK(g(0, n) == Approx(gs(0, n) + gs(1, n)).margin(1e-13));
    CHECK(g(1, n) == Approx(gs(2, n)).margin(1e-13));
  }
}

TEST_CASE("controlled rotations decompose exactly", "[moments]") {
  const auto a = build_model("toy_a");
  const Circuit d = decompose_controlled(a.circuit);
  for (const auto& g : d.gates()) CHECK(g.kind != GateKind::CRY);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    const auto th = oracle::random_angles(2, rng);
    CHECK((apply_circuit(d, th).amplitudes - apply_circuit(a.circuit, th).amplitudes).norm() < 1e-14);
  }
}

TEST_CASE("shift and analytic gradients agree", "[moments]") {
  std::mt19937_64 rng(17);
  for (const auto& m : all_models()) {
    const int order = m.name == "heisenberg_2x2" ? 5 : 7;
    const PowerCache cache(m.hamiltonian, order);
    for (int i = 0; i < 5; ++i) {
      const auto th = oracle::random_angles(static_cast<std::size_t>(m.circuit.n_params()), rng);
      const auto ga = moment_gradients(m.circuit, th, cache, order, GradientMethod::Analytic);
      const auto gs = moment_gradients(m.circuit, th, cache, order, GradientMethod::Shift);
      for (int n = 1; n <= order; ++n) {
        const double scale = std::max(1.0, ga.col(n).cwiseAbs().maxCoeff());
        CHECK((ga.col(n) - gs.col(n)).cwiseAbs().maxCoeff() <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("analytic gradients match central differences", "[moments][oracle]") {
  std::mt19937_64 rng(19);
  for (const auto& m : all_models()) {
    const int order = 5;
    const PowerCache cache(m.hamiltonian, order);
    for (int i = 0; i < 5; ++i) {
      const auto th = oracle::random_angles(static_cast<std::size_t>(m.circuit.n_params()), rng);
      const auto ga = moment_gradients(m.circuit, th, cache, order);
      for (int n = 1; n <= order; ++n) {
        const Eigen::VectorXd fd =
            oracle::central_diff([&](const std::vector<double>& x) { return moment_at(m.circuit, cache, x, n); }, th);
        const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
        CHECK((ga.col(n) - fd).cwiseAbs().maxCoeff() <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("moments do not depend on qubit labels", "[moments]") {
  const auto m = build_model("h2");
  PauliSum swapped(2);
  for (const auto& t : m.hamiltonian.to_terms()) {
    std::string s = t.letters();
    std::swap(s[0], s[1]);
    swapped.add(s, t.coefficient());
  }
  Circuit c(2, 4);
  c.ry(1, 0, 2.0).ry(0, 1, 2.0).cnot(1, 0).ry(1, 2, 2.0).ry(0, 3, 2.0);
  const PowerCache a(m.hamiltonian, 6), b(swapped, 6);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10; ++i) {
    const auto th = oracle::random_angles(4, rng);
    const auto ta = moment_table(m.circuit, th, a, 6);
    const auto tb = moment_table(c, th, b, 6);
    CHECK((ta.values - tb.values).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sampled expectations converge", "[moments][sampling]") {
  const auto m = build_model("h2");
  const std::vector<double> th{0.3, -0.8, 1.2, 0.5};
  const State psi = apply_circuit(m.circuit, th);
  for (int n = 1; n <= 3; ++n) {
    const PauliSum p = power(m.hamiltonian, n);
    const auto est = sampled_expectation(psi, p, qwc_groups(p), 1000000, static_cast<std::uint64_t>(42 + n));
    const double exact = expectation(psi, p);
    CHECK(est.std_error > 0.0);
    CHECK(std::abs(est.value - exact) <= 5.0 * est.std_error);
    for (const auto& t : est.terms) {
      PauliSum single(2);
      single.add(t.key, 1.0);
      const double e = expectation(psi, single);
      CHECK(std::abs(t.mean - e) <= 5.0 * std::max(t.std_error, 1e-12));
      CHECK(t.std_error == Approx(std::sqrt((1.0 - e * e) / 1e6)).epsilon(0.05).margin(1e-9));
    }
  }
}

TEST_CASE("eigenstates sample without noise", "[moments][sampling]") {
  const PauliSum h = toy_a_hamiltonian();
  const State s = State::basis(2, 2);
  const auto est = sampled_expectation(s, h, qwc_groups(h), 17, std::uint64_t{1});
  CHECK(est.value == Approx(3.0).margin(1e-15));
  CHECK(est.std_error == 0.0);
}

TEST_CASE("sample variance matches 1 - <P>^2", "[moments][sampling]") {
  PauliSum x(1);
  x.add("X", 1.0);
  Circuit c(1, 1);
  c.ry(0, 0);
  const State psi = apply_circuit(c, std::vector<double>{0.9});
  const double e = std::sin(0.9);
  const auto est = sampled_expectation(psi, x, qwc_groups(x), 200000, std::uint64_t{5});
  const double sample_var = est.std_error * est.std_error * 200000.0;
  CHECK(sample_var == Approx(1.0 - e * e).epsilon(0.02));
}

TEST_CASE("moment engine sampling is reproducible", "[moments][sampling]") {
  const auto m = build_model("toy_a");
  MomentOptions o;
  o.shots = 2000;
  o.seed = 99;
  MomentEngine e1(m.hamiltonian, 3, o), e2(m.hamiltonian, 3, o);
  const std::vector<double> th{0.7, -0.4};
  const auto t1 = e1.evaluate(m.circuit, th, 3, true);
  const auto t2 = e2.evaluate(m.circuit, th, 3, true);
  CHECK(t1.values == t2.values);
  CHECK(*t1.gradients == *t2.gradients);
  CHECK(t1.values(0) == 1.0);
}
