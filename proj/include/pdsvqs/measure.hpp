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

#ifndef PDSVQS_MEASURE_HPP
#define PDSVQS_MEASURE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "pdsvqs/errors.hpp"
#include "pdsvqs/pauli.hpp"
#include "pdsvqs/statesim.hpp"

namespace pdsvqs {

/// Per-string expectation values; an empty map means worst case (all zero).
using ExpectationMap = std::map<PauliKey, double>;

enum class CovarianceModel {
  /// Cross-string covariances taken as zero.
  Zero,
  /// |cov(P_i, P_j)| <= sqrt(var_i var_j).
  Bound,
};

/// Shots needed to reach standard error eps on <s>:
/// M = (sum_G sqrt(sum_{i,j in G} h_i h_j cov_ij) / eps)^2 with var = 1 - <P>^2.
inline double estimate_measurements(const PauliSum& s, const ExpectationMap& expectations,
                                    const std::vector<QwcGroup>& groups, double eps,
                                    CovarianceModel cov = CovarianceModel::Zero) {
  if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive");
  std::map<PauliKey, int> seen;
  double total = 0.0;
  for (const auto& g : groups) {
    double acc = 0.0;
    for (const auto& k : g.members) {
      if (++seen[k] > 1) throw InvalidArgument("string " + key_to_string(k, s.n_qubits()) + " appears in two groups");
      if (k.is_identity()) continue;
      const double h = std::abs(s.coefficient(k));
      if (h == 0.0) continue;
      double p = 0.0;
      if (const auto it = expectations.find(k); it != expectations.end()) p = it->second;
      if (p < -1.0 - 1e-12 || p > 1.0 + 1e-12) {
        throw InvalidArgument("expectation outside [-1, 1]");
      }
      const double var = std::max(0.0, 1.0 - p * p);
      acc += cov == CovarianceModel::Zero ? h * h * var : h * std::sqrt(var);
    }
    total += cov == CovarianceModel::Zero ? std::sqrt(acc) : acc;
  }
  for (const auto& [k, c] : s.terms()) {
    if (!k.is_identity() && !seen.count(k)) {
      throw InvalidArgument("string " + key_to_string(k, s.n_qubits()) + " is not in any group");
    }
  }
  const double r = total / eps;
  return r * r;
}

/// One group per string.
inline std::vector<QwcGroup> singleton_groups(const PauliSum& s) {
  std::vector<QwcGroup> out;
  for (const auto& [k, c] : s.terms()) out.push_back({k, {k}});
  return out;
}

/// Exact <psi|P|psi> for every string of s.
inline ExpectationMap term_expectations(const State& psi, const PauliSum& s) {
  ExpectationMap out;
  for (const auto& [k, c] : s.terms()) {
    PauliSum p(s.n_qubits());
    p.add(k, 1.0);
    out[k] = expectation(psi, p);
  }
  return out;
}

struct CostReport {
  int max_order = 0;
  double epsilon = 0.0;
  /// Index n holds the value for H^n, n = 1..max_order (index 0 unused).
  std::vector<std::size_t> per_order;
  std::vector<std::size_t> cumulative;
  /// QWC groups of the union of all strings in H^1..H^max_order.
  std::size_t group_count = 0;
  /// Worst-case-variance shot estimate for <H^n> under QWC grouping.
  std::vector<double> measurements;
  double total_measurements = 0.0;
};

inline CostReport reduction_stats(const PauliSum& h, int max_order, double eps = 1e-3,
                                  int max_power = kDefaultMaxPower) {
  if (max_order < 1) throw InvalidArgument("max_order must be at least 1");
  const auto powers = powers_up_to(h, max_order, max_power);
  CostReport r;
  r.max_order = max_order;
  r.epsilon = eps;
  r.per_order.assign(static_cast<std::size_t>(max_order) + 1, 0);
  r.cumulative.assign(static_cast<std::size_t>(max_order) + 1, 0);
  r.measurements.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
  PauliSum uni(h.n_qubits());
  for (int n = 1; n <= max_order; ++n) {
    const PauliSum& p = powers[static_cast<std::size_t>(n)];
    const auto un = static_cast<std::size_t>(n);
    r.per_order[un] = p.size();
    for (const auto& [k, c] : p.terms()) {
      const double w = std::abs(c);
      const double cur = std::abs(uni.coefficient(k));
      if (!uni.terms().count(k)) {
        uni.add(k, w);
      } else if (w > cur) {
        uni.add(k, w - cur);
      }
    }
    r.cumulative[un] = uni.size();
    r.measurements[un] = estimate_measurements(p, {}, qwc_groups(p), eps);
    r.total_measurements += r.measurements[un];
  }
  r.group_count = qwc_groups(uni).size();
  return r;
}

}  // namespace pdsvqs

#endif  // PDSVQS_MEASURE_HPP
