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

#ifndef PDSVQS_CLI_HPP
#define PDSVQS_CLI_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pdsvqs/errors.hpp"
#include "pdsvqs/measure.hpp"
#include "pdsvqs/models.hpp"
#include "pdsvqs/optim.hpp"
#include "pdsvqs/pds.hpp"

namespace pdsvqs::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kNotConverged = 3 };

namespace detail {

class AngleParser {
 public:
  explicit AngleParser(std::string_view s) : s_(s) {}

  double parse() {
    const double v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool starts_primary() {
    skip();
    if (i_ >= s_.size()) return false;
    const char c = s_[i_];
    return c == '(' || c == 'p' || c == 'P' || c == '.' || std::isdigit(static_cast<unsigned char>(c));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("angle '" + std::string(s_) + "': " + what);
  }

  double expr() {
    double v = term();
    for (;;) {
      if (peek('+')) {
        ++i_;
        v += term();
      } else if (peek('-')) {
        ++i_;
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = unary();
    for (;;) {
      if (peek('*')) {
        ++i_;
        v *= unary();
      } else if (peek('/')) {
        ++i_;
        const double d = unary();
        if (d == 0.0) fail("division by zero");
        v /= d;
      } else if (starts_primary()) {
        v *= primary();
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (peek('-')) {
      ++i_;
      return -unary();
    }
    if (peek('+')) {
      ++i_;
      return unary();
    }
    return primary();
  }

  double primary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    if (s_[i_] == '(') {
      ++i_;
      const double v = expr();
      if (!peek(')')) fail("missing ')'");
      ++i_;
      return v;
    }
    if (s_.substr(i_, 2) == "pi" || s_.substr(i_, 2) == "PI") {
      i_ += 2;
      return std::numbers::pi;
    }
    double v = 0.0;
    const char* first = s_.data() + i_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == first) fail("expected a number or 'pi'");
    i_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

/// Evaluates an angle such as "7pi/32", "-pi/2" or "0.25*(pi+1)".
inline double parse_angle(std::string_view text) { return detail::AngleParser(text).parse(); }

inline std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    out.push_back(parse_angle(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

struct HamiltonianSource {
  std::string model;
  std::string file;
  ModelOptions model_options;
};

inline PauliSum load_source(const HamiltonianSource& src) {
  if (!src.model.empty() && !src.file.empty()) throw InvalidArgument("give either --model or --file, not both");
  if (!src.model.empty()) return build_model(src.model, src.model_options).hamiltonian;
  if (!src.file.empty()) return load_hamiltonian_file(src.file);
  throw InvalidArgument("a --model or --file is required");
}

struct RunConfig {
  HamiltonianSource source;
  std::string functional = "pds";
  int order = 2;
  std::string metric = "gd";
  std::optional<double> eta;
  std::optional<std::string> schedule;
  std::optional<std::string> theta0;
  int max_iters = 100;
  double tol = 1e-8;
  std::optional<std::string> reg_moments;
  std::string reg_metric = "shift";
  double shift = 1e-6;
  double truncate = 1e-10;
  std::string gradient = "analytic";
  long shots = 0;
  std::uint64_t seed = 0;
  /// Template ansatz used with --file.
  int layers = 1;
  std::string entangler = "ring";
};

struct ResolvedRun {
  Problem problem;
  RunOptions options;
};

inline RegularizationPolicy parse_policy(const std::string& name, double shift, double truncate) {
  const std::string n = detail::lower(name);
  if (n == "none") return RegularizationPolicy::none();
  if (n == "shift") return RegularizationPolicy::shifted(shift);
  if (n == "truncate") return RegularizationPolicy::truncated(truncate);
  throw InvalidArgument("unknown regularization '" + name + "' (none, shift, truncate)");
}

inline MetricKind parse_metric(const std::string& name) {
  const std::string n = detail::lower(name);
  if (n == "gd") return MetricKind::GD;
  if (n == "ngd") return MetricKind::NGD;
  if (n == "ite") return MetricKind::ITE;
  throw InvalidArgument("unknown metric '" + name + "' (gd, ngd, ite)");
}

inline Schedule parse_schedule(const std::string& name) {
  const std::string n = detail::lower(name);
  if (n == "constant") return Schedule::Constant;
  if (n == "inv-iter" || n == "inverse") return Schedule::InverseIteration;
  throw InvalidArgument("unknown schedule '" + name + "' (constant, inv-iter)");
}

inline Entangler parse_entangler(const std::string& name) {
  const std::string n = detail::lower(name);
  if (n == "none") return Entangler::None;
  if (n == "chain") return Entangler::Chain;
  if (n == "ring") return Entangler::Ring;
  throw InvalidArgument("unknown entangler '" + name + "' (none, chain, ring)");
}

inline ResolvedRun resolve(const RunConfig& cfg) {
  ResolvedRun r;
  RunOptions& o = r.options;
  const std::string f = detail::lower(cfg.functional);
  if (f == "vqe") {
    o.functional.K = 0;
  } else if (f == "pds") {
    if (cfg.order < 1) throw InvalidArgument("--order must be at least 1");
    o.functional.K = cfg.order;
  } else {
    throw InvalidArgument("unknown functional '" + cfg.functional + "' (vqe, pds)");
  }
  o.metric = parse_metric(cfg.metric);
  o.metric_policy = parse_policy(cfg.reg_metric, cfg.shift, cfg.truncate);
  o.max_iters = cfg.max_iters;
  if (cfg.max_iters < 0) throw InvalidArgument("--max-iters must be non-negative");
  o.grad_tol = cfg.tol;
  const std::string g = detail::lower(cfg.gradient);
  if (g == "analytic") {
    o.moments.method = GradientMethod::Analytic;
  } else if (g == "shift") {
    o.moments.method = GradientMethod::Shift;
  } else {
    throw InvalidArgument("unknown gradient method '" + cfg.gradient + "' (analytic, shift)");
  }
  if (cfg.shots < 0) throw InvalidArgument("--shots must be non-negative");
  o.moments.shots = cfg.shots;
  o.moments.seed = cfg.seed;

  double eta = 0.05;
  Schedule schedule = Schedule::Constant;
  RegularizationPolicy moment_policy;
  if (!cfg.source.model.empty()) {
    if (!cfg.source.file.empty()) throw InvalidArgument("give either --model or --file, not both");
    const ModelBundle m = build_model(cfg.source.model, cfg.source.model_options);
    r.problem = m.problem();
    eta = m.eta;
    schedule = m.schedule;
    moment_policy = m.moment_policy;
  } else {
    const PauliSum h = load_source(cfg.source);
    LayeredRyOptions lo;
    lo.layers = cfg.layers;
    lo.entangler = parse_entangler(cfg.entangler);
    r.problem.hamiltonian = h;
    r.problem.circuit = layered_ry_ansatz(h.n_qubits(), lo);
    r.problem.theta0 = Eigen::VectorXd::Zero(r.problem.circuit.n_params());
    if (h.n_qubits() <= kMaxDenseQubits) {
      const Eigensystem es = exact_eigensystem(h);
      r.problem.exact_energy = es.ground_energy();
      r.problem.ground_space = es.ground_space;
    }
  }
  o.eta = cfg.eta.value_or(eta);
  if (!(o.eta > 0.0)) throw InvalidArgument("--eta must be positive");
  o.schedule = cfg.schedule ? parse_schedule(*cfg.schedule) : schedule;
  o.pds.policy = cfg.reg_moments ? parse_policy(*cfg.reg_moments, cfg.shift, cfg.truncate) : moment_policy;
  if (cfg.theta0) {
    const std::vector<double> th = parse_angle_list(*cfg.theta0);
    if (static_cast<int>(th.size()) != r.problem.circuit.n_params()) {
      throw InvalidArgument("--theta0 has " + std::to_string(th.size()) + " values, the ansatz has " +
                            std::to_string(r.problem.circuit.n_params()) + " parameters");
    }
    r.problem.theta0 = Eigen::Map<const Eigen::VectorXd>(th.data(), static_cast<Eigen::Index>(th.size()));
  }
  return r;
}

inline constexpr const char* kTrajectorySchema = "# pdsvqs trajectory v1";

inline void write_trajectory_csv(std::ostream& os, const Trajectory& t, int n_roots, int n_params) {
  os << kTrajectorySchema << '\n' << "iter,energy";
  for (int i = 1; i <= n_roots; ++i) os << ",root_" << i;
  os << ",expval_H,deviation,fidelity,grad_norm,metric_cond";
  for (int i = 1; i <= n_params; ++i) os << ",theta_" << i;
  os << '\n';
  for (const auto& r : t.records) {
    os << r.iter << ',' << detail::fmt(r.energy);
    for (int i = 0; i < n_roots; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      os << ',' << detail::fmt(ui < r.roots.size() ? r.roots[ui] : std::nan(""));
    }
    os << ',' << detail::fmt(r.expval_h) << ',' << detail::fmt(r.deviation) << ','
       << detail::fmt(r.fidelity) << ',' << detail::fmt(r.grad_norm) << ','
       << detail::fmt(r.metric_cond);
    for (Eigen::Index i = 0; i < r.theta.size(); ++i) os << ',' << detail::fmt(r.theta(i));
    os << '\n';
  }
}

inline std::string summary_line(const Trajectory& t) {
  std::string s = "status=" + std::string(status_name(t.status));
  if (!t.records.empty()) {
    const auto& r = t.last();
    s += " iterations=" + std::to_string(r.iter) + " energy=" + detail::fmt(r.energy) +
         " deviation=" + detail::fmt(r.deviation) + " fidelity=" + detail::fmt(r.fidelity);
  }
  if (!t.message.empty()) s += " error=\"" + t.message + "\"";
  return s;
}

inline int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return kOk;
    case RunStatus::Error: return kNumerical;
    case RunStatus::MaxIters: return kNotConverged;
  }
  return kNumerical;
}

/// Runs one optimization, writes the trajectory CSV to `csv` and the summary
/// to `log`. The CSV is written even when the run fails part way.
inline int cmd_run(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  const ResolvedRun rr = resolve(cfg);
  const Trajectory t = run(rr.problem, rr.options);
  write_trajectory_csv(csv, t, std::max(1, rr.options.functional.K), rr.problem.circuit.n_params());
  log << summary_line(t) << '\n';
  return exit_code(t.status);
}

struct ScanConfig {
  RunConfig run;
  int grid = 8;
  double lo = -std::numbers::pi;
  double hi = std::numbers::pi;
  /// Resolution of the background surface; 0 disables it.
  int surface_grid = 32;
  /// A start counts as reaching the ground state when |E - E0| is below this.
  double energy_tol = 1e-6;
};

/// Cell-centre coordinate i of an n-point grid over [lo, hi].
inline double grid_point(double lo, double hi, int n, int i) {
  return lo + (static_cast<double>(i) + 0.5) * (hi - lo) / static_cast<double>(n);
}

/// Runs from every start of a grid over (theta_1, theta_2). One row per start
/// goes to `starts`; the PDS energy and <H> on a finer grid go to `surface`,
/// with points where the functional cannot be evaluated flagged.
inline int cmd_scan(const ScanConfig& cfg, std::ostream& starts, std::ostream* surface) {
  ResolvedRun rr = resolve(cfg.run);
  if (rr.problem.circuit.n_params() != 2) throw InvalidArgument("scan needs a two-parameter ansatz");
  if (cfg.grid < 1) throw InvalidArgument("--grid must be positive");
  starts << "# pdsvqs scan v1\n"
         << "i,j,theta0_1,theta0_2,final_energy,expval_H,deviation,iterations,status,converged\n";
  for (int i = 0; i < cfg.grid; ++i) {
    for (int j = 0; j < cfg.grid; ++j) {
      Problem p = rr.problem;
      p.theta0 = Eigen::Vector2d(grid_point(cfg.lo, cfg.hi, cfg.grid, i), grid_point(cfg.lo, cfg.hi, cfg.grid, j));
      const Trajectory t = run(p, rr.options);
      const bool ok = !t.records.empty() && t.status != RunStatus::Error;
      const IterationRecord last = t.records.empty() ? IterationRecord{} : t.last();
      const bool reached = ok && p.exact_energy && std::abs(last.energy - *p.exact_energy) < cfg.energy_tol;
      starts << i << ',' << j << ',' << detail::fmt(p.theta0(0)) << ',' << detail::fmt(p.theta0(1)) << ','
             << detail::fmt(ok ? last.energy : std::nan("")) << ','
             << detail::fmt(ok ? last.expval_h : std::nan("")) << ','
             << detail::fmt(ok ? last.deviation : std::nan("")) << ',' << last.iter << ','
             << status_name(t.status) << ',' << (reached ? 1 : 0) << '\n';
    }
  }
  if (surface && cfg.surface_grid > 0) {
    const int K = std::max(1, rr.options.functional.K);
    MomentEngine engine(rr.problem.hamiltonian, 2 * K - 1);
    *surface << "# pdsvqs surface v1\ntheta_1,theta_2,pds_energy,expval_H,flag\n";
    for (int i = 0; i < cfg.surface_grid; ++i) {
      for (int j = 0; j < cfg.surface_grid; ++j) {
        const double th[2] = {grid_point(cfg.lo, cfg.hi, cfg.surface_grid, i),
                              grid_point(cfg.lo, cfg.hi, cfg.surface_grid, j)};
        const MomentTable tab = engine.evaluate(rr.problem.circuit, th, 2 * K - 1, false);
        double e = std::nan("");
        std::string flag = "ok";
        try {
          e = pds_solve(tab, K, rr.options.pds).energy;
        } catch (const SingularMoments&) {
          flag = "singular";
        } catch (const ComplexRoots&) {
          flag = "complex";
        }
        *surface << detail::fmt(th[0]) << ',' << detail::fmt(th[1]) << ',' << detail::fmt(e) << ','
                 << detail::fmt(tab.values(1)) << ',' << flag << '\n';
      }
    }
  }
  return kOk;
}

inline int cmd_reduce(const HamiltonianSource& src, int max_order, double eps, std::ostream& os) {
  const PauliSum h = load_source(src);
  const CostReport r = reduction_stats(h, max_order, eps);
  os << "# pdsvqs reduce v1\norder,strings,cumulative,measurements\n";
  for (int n = 1; n <= max_order; ++n) {
    const auto un = static_cast<std::size_t>(n);
    os << n << ',' << r.per_order[un] << ',' << r.cumulative[un] << ',' << detail::fmt(r.measurements[un])
       << '\n';
  }
  os << "# qwc_groups=" << r.group_count << " total_measurements=" << detail::fmt(r.total_measurements)
     << " epsilon=" << detail::fmt(eps) << '\n';
  return kOk;
}

struct EstimateConfig {
  HamiltonianSource source;
  double epsilon = 1e-3;
  /// Power of H whose expectation is estimated.
  int order = 1;
  std::string grouping = "qwc";
  std::string covariance = "zero";
  /// With theta, variances come from the model ansatz state; otherwise worst case.
  std::optional<std::string> theta;
};

inline int cmd_estimate(const EstimateConfig& cfg, std::ostream& os) {
  if (cfg.order < 1) throw InvalidArgument("--order must be at least 1");
  const PauliSum h = load_source(cfg.source);
  const PauliSum s = power(h, cfg.order);
  const std::string grp = detail::lower(cfg.grouping);
  std::vector<QwcGroup> groups;
  if (grp == "qwc") {
    groups = qwc_groups(s);
  } else if (grp == "none") {
    groups = singleton_groups(s);
  } else {
    throw InvalidArgument("unknown grouping '" + cfg.grouping + "' (qwc, none)");
  }
  const std::string cv = detail::lower(cfg.covariance);
  CovarianceModel cov = CovarianceModel::Zero;
  if (cv == "bound") {
    cov = CovarianceModel::Bound;
  } else if (cv != "zero") {
    throw InvalidArgument("unknown covariance model '" + cfg.covariance + "' (zero, bound)");
  }
  ExpectationMap ex;
  if (cfg.theta) {
    if (cfg.source.model.empty()) throw InvalidArgument("--theta needs a built-in --model");
    const ModelBundle m = build_model(cfg.source.model, cfg.source.model_options);
    const std::vector<double> th = parse_angle_list(*cfg.theta);
    ex = term_expectations(apply_circuit(m.circuit, th), s);
  }
  const double M = estimate_measurements(s, ex, groups, cfg.epsilon, cov);
  os << "strings=" << s.size() << " groups=" << groups.size() << " epsilon=" << detail::fmt(cfg.epsilon)
     << " measurements=" << detail::fmt(M) << '\n';
  return kOk;
}

/// Prints the spectrum ascending; values within 1e-12 of an integer print as
/// that integer.
inline int cmd_eig(const HamiltonianSource& src, std::ostream& os) {
  const Eigensystem es = exact_eigensystem(load_source(src));
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
    const double v = es.eigenvalues(i);
    const double r = std::nearbyint(v);
    if (i) os << ' ';
    if (std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v))) {
      os << detail::fmt(r == 0.0 ? 0.0 : r);
    } else {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.12g", v);
      os << buf;
    }
  }
  os << '\n';
  return kOk;
}

}  // namespace pdsvqs::cli

#endif  // PDSVQS_CLI_HPP
