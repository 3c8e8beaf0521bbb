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

#ifndef PDSVQS_OPTIM_HPP
#define PDSVQS_OPTIM_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdsvqs/errors.hpp"
#include "pdsvqs/moments.hpp"
#include "pdsvqs/pds.hpp"
#include "pdsvqs/statesim.hpp"

namespace pdsvqs {

enum class MetricKind { GD, NGD, ITE };

inline const char* metric_name(MetricKind m) {
  switch (m) {
    case MetricKind::GD: return "gd";
    case MetricKind::NGD: return "ngd";
    case MetricKind::ITE: return "ite";
  }
  return "?";
}

/// Metric from a state and its parameter derivatives.
inline Eigen::MatrixXd metric(MetricKind kind, const State& psi, const std::vector<State>& dpsi) {
  const auto p = static_cast<Eigen::Index>(dpsi.size());
  if (kind == MetricKind::GD) return Eigen::MatrixXd::Identity(p, p);
  Eigen::MatrixXd R(p, p);
  Eigen::VectorXcd overlap(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    overlap(i) = dpsi[static_cast<std::size_t>(i)].amplitudes.dot(psi.amplitudes);
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      double v = dpsi[static_cast<std::size_t>(i)].amplitudes.dot(dpsi[static_cast<std::size_t>(j)].amplitudes).real();
      if (kind == MetricKind::NGD) v -= (overlap(i) * std::conj(overlap(j))).real();
      R(i, j) = v;
    }
  }
  return 0.5 * (R + R.transpose());
}

inline Eigen::MatrixXd metric(const Circuit& c, const Eigen::VectorXd& theta, MetricKind kind) {
  if (kind == MetricKind::GD) return Eigen::MatrixXd::Identity(c.n_params(), c.n_params());
  const State psi = apply_circuit(c, theta);
  std::vector<State> d;
  for (int k = 0; k < c.n_params(); ++k) d.push_back(state_derivative(c, theta, k));
  return metric(kind, psi, d);
}

/// theta - eta R^+ grad. An identity metric gives exactly theta - eta grad.
inline Eigen::VectorXd step(const Eigen::VectorXd& theta, const Eigen::VectorXd& grad,
                            const Eigen::MatrixXd& R, double eta,
                            const RegularizationPolicy& policy = RegularizationPolicy::shifted()) {
  if (theta.size() != grad.size() || R.rows() != theta.size() || R.cols() != theta.size()) {
    throw DimensionMismatch("step: theta, gradient and metric sizes differ");
  }
  if (R.isIdentity(0.0)) return theta - eta * grad;
  return theta - eta * SymmetricSolver(R, policy).solve(grad);
}

enum class Schedule { Constant, InverseIteration };

/// Step size for iteration k (k >= 1).
inline double step_size(Schedule s, double eta0, int k) {
  return s == Schedule::Constant ? eta0 : eta0 / static_cast<double>(k);
}

/// K = 0 selects the plain expectation value (VQE); K >= 1 selects PDS(K).
struct Functional {
  int K = 0;
  int moment_order() const { return K == 0 ? 1 : 2 * K - 1; }
  std::string name() const { return K == 0 ? "vqe" : "pds" + std::to_string(K); }
};

struct Problem {
  PauliSum hamiltonian{1};
  Circuit circuit{1, 0};
  Eigen::VectorXd theta0;
  std::optional<double> exact_energy;
  std::optional<Eigen::MatrixXcd> ground_space;
};

struct RunOptions {
  Functional functional;
  MetricKind metric = MetricKind::GD;
  RegularizationPolicy metric_policy = RegularizationPolicy::shifted();
  PdsOptions pds;
  Schedule schedule = Schedule::Constant;
  double eta = 0.05;
  int max_iters = 100;
  /// Converged when the gradient norm falls below this.
  double grad_tol = 1e-8;
  /// PDS(K >= 2) treats the state as an eigenstate once the energy variance
  /// <H^2> - <H>^2 drops below eigen_var_tol * max(1, <H>^2).
  double eigen_var_tol = 1e-12;
  MomentOptions moments;
};

struct IterationRecord {
  int iter = 0;
  Eigen::VectorXd theta;
  double energy = 0.0;
  std::vector<double> roots;
  double expval_h = 0.0;
  double deviation = std::numeric_limits<double>::quiet_NaN();
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = 0.0;
  double metric_cond = 1.0;
  double cond_M = 1.0;
  bool regularized = false;
  bool eigenstate = false;
  /// Step size used to leave this point (NaN on the final record).
  double eta = std::numeric_limits<double>::quiet_NaN();
};

enum class RunStatus { Converged, MaxIters, Error };

inline const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIters: return "max_iters";
    case RunStatus::Error: return "error";
  }
  return "?";
}

struct Trajectory {
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::MaxIters;
  std::string message;
  const IterationRecord& last() const { return records.back(); }
};

struct Evaluation {
  IterationRecord record;
  Eigen::VectorXd grad;
};

/// Energy, roots and gradient of the chosen functional at theta.
inline Evaluation evaluate(const Problem& prob, MomentEngine& engine, const Eigen::VectorXd& theta,
                           const RunOptions& opts) {
  const int K = opts.functional.K;
  const std::span<const double> th(theta.data(), static_cast<std::size_t>(theta.size()));
  const MomentTable t = engine.evaluate(prob.circuit, th, opts.functional.moment_order(), true);
  Evaluation ev;
  IterationRecord& r = ev.record;
  r.theta = theta;
  r.expval_h = t.values(1);
  if (K == 0) {
    r.energy = t.values(1);
    r.roots = {r.energy};
    ev.grad = t.gradients->col(1);
  } else {
    const double m1 = t.values(1);
    if (K >= 2 && t.values(2) - m1 * m1 <= opts.eigen_var_tol * std::max(1.0, m1 * m1)) {
      r.eigenstate = true;
      r.energy = t.values(1);
      r.roots = std::vector<double>(static_cast<std::size_t>(K), t.values(1));
      ev.grad = Eigen::VectorXd::Zero(theta.size());
    } else {
      const PdsResult res = pds_solve(t, K, opts.pds);
      r.energy = res.energy;
      r.roots = res.roots;
      r.cond_M = res.cond_M;
      r.regularized = res.regularization_applied;
      ev.grad = pds_gradient(t, res);
    }
  }
  if (prob.exact_energy) r.deviation = std::abs(r.energy - *prob.exact_energy);
  r.grad_norm = ev.grad.norm();
  return ev;
}

/// Runs the optimizer from prob.theta0. Numerical failures end the run with
/// status Error; the records up to the failure are kept.
inline Trajectory run(const Problem& prob, const RunOptions& opts) {
  if (opts.functional.K < 0) throw InvalidArgument("K must be non-negative");
  if (opts.max_iters < 0) throw InvalidArgument("max_iters must be non-negative");
  if (prob.theta0.size() != prob.circuit.n_params()) {
    throw DimensionMismatch("theta0 has " + std::to_string(prob.theta0.size()) +
                            " entries, circuit has " + std::to_string(prob.circuit.n_params()) +
                            " parameters");
  }
  if (prob.hamiltonian.n_qubits() != prob.circuit.n_qubits()) {
    throw DimensionMismatch("Hamiltonian and circuit qubit counts differ");
  }
  prob.circuit.validate();
  MomentEngine engine(prob.hamiltonian, opts.functional.moment_order(), opts.moments);

  Trajectory traj;
  Eigen::VectorXd theta = prob.theta0;
  for (int it = 0;; ++it) {
    Evaluation ev;
    Eigen::MatrixXd R;
    try {
      ev = evaluate(prob, engine, theta, opts);
      const bool need_state = prob.ground_space.has_value() || opts.metric != MetricKind::GD;
      if (need_state) {
        const State psi = apply_circuit(prob.circuit, theta);
        if (prob.ground_space) ev.record.fidelity = fidelity(psi, *prob.ground_space);
        if (opts.metric != MetricKind::GD) {
          std::vector<State> d;
          for (int k = 0; k < prob.circuit.n_params(); ++k) {
            d.push_back(state_derivative(prob.circuit, theta, k));
          }
          R = metric(opts.metric, psi, d);
        }
      }
      if (opts.metric == MetricKind::GD) R = Eigen::MatrixXd::Identity(theta.size(), theta.size());
      ev.record.metric_cond = theta.size() > 0 ? SymmetricSolver(R, RegularizationPolicy::none()).cond() : 1.0;
    } catch (const NumericalError& e) {
      traj.status = RunStatus::Error;
      traj.message = "iteration " + std::to_string(it) + ": " + e.what();
      return traj;
    }
    ev.record.iter = it;
    if (ev.record.grad_norm < opts.grad_tol) {
      traj.records.push_back(ev.record);
      traj.status = RunStatus::Converged;
      return traj;
    }
    if (it >= opts.max_iters) {
      traj.records.push_back(ev.record);
      traj.status = RunStatus::MaxIters;
      return traj;
    }
    const double eta = step_size(opts.schedule, opts.eta, it + 1);
    ev.record.eta = eta;
    traj.records.push_back(ev.record);
    theta = step(theta, ev.grad, R, eta, opts.metric_policy);
  }
}

}  // namespace pdsvqs

#endif  // PDSVQS_OPTIM_HPP
