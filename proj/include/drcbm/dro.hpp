// Copyright 2026 the drcbm authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRCBM_DRO_HPP
#define DRCBM_DRO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "drcbm/error.hpp"
#include "drcbm/prognostics.hpp"

namespace drcbm {

// Per-component maintenance cost coefficients. Fixed plus variable cost for
// preventive (early) and corrective (late) repairs.
struct MaintenanceCosts {
  double c_pr = 0.0, v_pr = 0.0;
  double c_co = 0.0, v_co = 0.0;

  bool is_conventional() const { return c_pr <= c_co && v_pr <= v_co; }
  void validate() const {
    DRCBM_REQUIRE(c_pr >= 0 && v_pr >= 0 && c_co >= 0 && v_co >= 0,
                  "maintenance costs must be non-negative");
  }
};

// Radius rule for the per-component Wasserstein ball: delta_j = delta * sigma_j
// with delta the normalized radius.
struct AmbiguityConfig {
  double delta_normalized = 0.0;

  double radius_for(const EmpiricalRld& rld) const {
    DRCBM_REQUIRE(delta_normalized >= 0.0, "normalized radius must be >= 0");
    return delta_normalized * rld.sigma_hat;
  }
};

// Realized maintenance cost of repairing at epoch t a component whose
// remaining life is omega. Repair at t >= omega is corrective.
inline double alpha_cost(double omega, double t, const MaintenanceCosts& c) {
  return omega > t ? c.c_pr + c.v_pr * (omega - t)
                   : c.c_co + c.v_co * (t - omega);
}

// Worst case of alpha over the interval [omega_i - delta, omega_i + delta]
// intersected with [0, xi_max]: the larger of the two branch maxima, each
// guarded by its reachability indicator.
inline double theta_worst_case(double omega_i, double delta, double t,
                               const MaintenanceCosts& c, double xi_max) {
  const double lo = -std::numeric_limits<double>::infinity();
  double preventive = lo, corrective = lo;
  if (t < omega_i + delta)
    preventive = c.c_pr + c.v_pr * (std::min(omega_i + delta, xi_max) - t);
  if (omega_i - delta <= t)
    corrective = c.c_co + c.v_co * (t - std::max(omega_i - delta, 0.0));
  const double worst = std::max(preventive, corrective);
  DRCBM_REQUIRE(std::isfinite(worst), "theta_worst_case: both branches unreachable");
  return worst;
}

inline double psi_value(const EmpiricalRld& rld, double delta, double t,
                        const MaintenanceCosts& c) {
  DRCBM_REQUIRE(!rld.samples.empty(), "psi needs a non-empty sample set");
  double sum = 0.0;
  for (double w : rld.samples)
    sum += theta_worst_case(w, delta, t, c, rld.tau_max);
  return sum / static_cast<double>(rld.samples.size());
}

// Worst-case downtime acceptance indicator: 1 iff at least a 1-eps fraction
// of samples keeps [t - max(omega_i - delta, 0)]_+ within the cap rho.
inline bool downtime_ok(const EmpiricalRld& rld, double delta, double t,
                        double rho, double eps) {
  DRCBM_REQUIRE(rho >= 0.0 && eps > 0.0 && eps < 1.0, "invalid risk parameters");
  std::size_t ok = 0;
  for (double w : rld.samples) {
    const double wait = std::max(t - std::max(w - delta, 0.0), 0.0);
    if (wait <= rho) ++ok;
  }
  // Counts are integers; the absolute slack keeps exact fractions such as
  // 9/10 vs 0.9 from flipping on rounding.
  return static_cast<double>(ok) + 1e-9 >=
         (1.0 - eps) * static_cast<double>(rld.samples.size());
}

// First epoch where downtime_ok turns 0, by binary search over the
// non-increasing indicator; t_max + 1 when it stays 1 over the horizon.
inline int first_blocked_epoch(const EmpiricalRld& rld, double delta,
                               double rho, double eps, int t_max) {
  if (downtime_ok(rld, delta, static_cast<double>(t_max), rho, eps))
    return t_max + 1;
  int lo = 1, hi = t_max;  // invariant: u(hi) == 0
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (downtime_ok(rld, delta, static_cast<double>(mid), rho, eps))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

// Worst-case failure probability by epoch t under the ball of radius delta.
inline double p_bar(const EmpiricalRld& rld, double delta, double t) {
  DRCBM_REQUIRE(!rld.samples.empty(), "p_bar needs a non-empty sample set");
  std::size_t hit = 0;
  for (double w : rld.samples)
    if (w - delta <= t) ++hit;
  return static_cast<double>(hit) / static_cast<double>(rld.samples.size());
}

// Exact CDF of a sum of independent Bernoulli(p_i) at m, via the rolling
// recursion: row j keeps v_k = P{sum of first j <= k} for k = 0..m.
inline double pbinom_cdf(std::span<const double> ps, int m) {
  DRCBM_REQUIRE(m >= 0, "count threshold must be >= 0");
  for (double p : ps)
    DRCBM_REQUIRE(p >= 0.0 && p <= 1.0, "Bernoulli parameter out of [0,1]");
  const int n = static_cast<int>(ps.size());
  if (m >= n) return 1.0;
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 1.0);
  for (int j = 1; j <= n; ++j) {
    const double p = ps[static_cast<std::size_t>(j - 1)];
    for (int k = std::min(m, j - 1); k >= 1; --k)
      v[k] = v[k - 1] * p + v[k] * (1.0 - p);
    v[0] *= (1.0 - p);
  }
  return std::clamp(v[static_cast<std::size_t>(m)], 0.0, 1.0);
}

// All precomputed reformulation parameters over the (component, epoch) grid.
// Epochs are 1-based: psi(j, t) for t in [1, t_max]. The downtime indicator
// is stored through its cutoff t_star: u(j,t) = 1 iff t < t_star[j].
struct PrecomputedParams {
  int num_components = 0;
  int t_max = 0;
  std::vector<double> psi;    // num_components * t_max
  std::vector<double> p_bar;  // num_components * t_max
  std::vector<int> t_star;    // per component; t_max+1 when never blocked

  double psi_at(int j, int t) const { return psi[idx(j, t)]; }
  double p_bar_at(int j, int t) const { return p_bar[idx(j, t)]; }
  bool u_at(int j, int t) const { return t < t_star[static_cast<std::size_t>(j)]; }

  std::size_t idx(int j, int t) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(t_max) +
           static_cast<std::size_t>(t - 1);
  }
};

inline PrecomputedParams precompute_params(
    const std::vector<EmpiricalRld>& rlds,
    const std::vector<MaintenanceCosts>& costs, const AmbiguityConfig& ambiguity,
    double rho, double eps, int t_max) {
  DRCBM_REQUIRE(rlds.size() == costs.size(),
                "one cost set per component required");
  DRCBM_REQUIRE(t_max >= 1, "horizon must have at least one epoch");
  PrecomputedParams out;
  out.num_components = static_cast<int>(rlds.size());
  out.t_max = t_max;
  out.psi.resize(rlds.size() * static_cast<std::size_t>(t_max));
  out.p_bar.resize(rlds.size() * static_cast<std::size_t>(t_max));
  out.t_star.resize(rlds.size());
  for (int j = 0; j < out.num_components; ++j) {
    const auto& rld = rlds[static_cast<std::size_t>(j)];
    const double delta = ambiguity.radius_for(rld);
    for (int t = 1; t <= t_max; ++t) {
      out.psi[out.idx(j, t)] =
          psi_value(rld, delta, static_cast<double>(t), costs[static_cast<std::size_t>(j)]);
      out.p_bar[out.idx(j, t)] = p_bar(rld, delta, static_cast<double>(t));
    }
    out.t_star[static_cast<std::size_t>(j)] =
        first_blocked_epoch(rld, delta, rho, eps, t_max);
  }
  return out;
}

struct Z2Check {
  double probability = 0.0;
  bool feasible = false;
};

// Worst-case probability of at most gamma unexpected failures under the
// given repair schedule, and its comparison against 1 - beta.
inline Z2Check check_z2_probability(std::span<const int> repair_epochs,
                                    const PrecomputedParams& params, int gamma,
                                    double beta) {
  DRCBM_REQUIRE(static_cast<int>(repair_epochs.size()) == params.num_components,
                "need one repair epoch per component");
  std::vector<double> ps;
  ps.reserve(repair_epochs.size());
  for (int j = 0; j < params.num_components; ++j) {
    const int t = repair_epochs[static_cast<std::size_t>(j)];
    DRCBM_REQUIRE(t >= 1 && t <= params.t_max,
                  "repair epoch out of horizon for component " + std::to_string(j));
    ps.push_back(params.p_bar_at(j, t));
  }
  Z2Check res;
  res.probability = pbinom_cdf(ps, gamma);
  res.feasible = res.probability >= 1.0 - beta - 1e-9;  // solver-tolerance grace
  return res;
}

// --- serialization ---------------------------------------------------------

// Matrix text format: a "psi" block and a "p_bar" block (component rows,
// epoch columns) followed by a "t_star" row. Used for audit and for
// solver-independent regression checks.
inline void write_params(std::ostream& os, const PrecomputedParams& p) {
  os.precision(17);
  os << "# drcbm precomputed parameters\n";
  os << "components\t" << p.num_components << "\tt_max\t" << p.t_max << '\n';
  os << "psi\n";
  for (int j = 0; j < p.num_components; ++j) {
    for (int t = 1; t <= p.t_max; ++t)
      os << p.psi_at(j, t) << (t == p.t_max ? '\n' : '\t');
  }
  os << "p_bar\n";
  for (int j = 0; j < p.num_components; ++j) {
    for (int t = 1; t <= p.t_max; ++t)
      os << p.p_bar_at(j, t) << (t == p.t_max ? '\n' : '\t');
  }
  os << "t_star\n";
  for (int j = 0; j < p.num_components; ++j)
    os << p.t_star[static_cast<std::size_t>(j)] << (j + 1 == p.num_components ? '\n' : '\t');
}

inline PrecomputedParams read_params(std::istream& is) {
  PrecomputedParams p;
  std::string line, tag;
  std::getline(is, line);  // comment
  std::getline(is, line);
  {
    std::istringstream head(line);
    std::string a, b;
    head >> a >> p.num_components >> b >> p.t_max;
    DRCBM_REQUIRE(a == "components" && b == "t_max", "bad parameter header");
  }
  auto read_matrix = [&](const std::string& name, std::vector<double>& dst) {
    std::getline(is, tag);
    DRCBM_REQUIRE(tag == name, "expected block '" + name + "'");
    dst.resize(static_cast<std::size_t>(p.num_components) *
               static_cast<std::size_t>(p.t_max));
    for (std::size_t i = 0; i < dst.size(); ++i)
      DRCBM_REQUIRE(static_cast<bool>(is >> dst[i]), "truncated block " + name);
    std::getline(is, line);  // trailing newline
  };
  read_matrix("psi", p.psi);
  read_matrix("p_bar", p.p_bar);
  std::getline(is, tag);
  DRCBM_REQUIRE(tag == "t_star", "expected block 't_star'");
  p.t_star.resize(static_cast<std::size_t>(p.num_components));
  for (auto& v : p.t_star)
    DRCBM_REQUIRE(static_cast<bool>(is >> v), "truncated t_star block");
  return p;
}

}  // namespace drcbm

#endif  // DRCBM_DRO_HPP
