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

// Independent reference implementations used only by tests. These stay
// deliberately naive (enumeration, grid search) so they cannot share a bug
// with the closed forms they check.

#ifndef DRCBM_TESTS_ORACLES_HPP
#define DRCBM_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "drcbm/dro.hpp"

namespace drcbm::testing {

// P{sum of Bernoulli(p_i) <= m} by summing over all 2^n outcomes.
inline double pbinom_bruteforce(const std::vector<double>& ps, int m) {
  const int n = static_cast<int>(ps.size());
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    int ones = 0;
    double prob = 1.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        ++ones;
        prob *= ps[static_cast<std::size_t>(i)];
      } else {
        prob *= 1.0 - ps[static_cast<std::size_t>(i)];
      }
    }
    if (ones <= m) total += prob;
  }
  return total;
}

// Grid of perturbed positions for one sample: omega +/- delta clipped to
// [0, xi_max], endpoints always included.
inline std::vector<double> perturbation_grid(double omega, double delta,
                                             double xi_max, int points) {
  std::vector<double> grid;
  const double lo = std::max(omega - delta, 0.0);
  const double hi = std::min(omega + delta, xi_max);
  for (int g = 0; g < points; ++g)
    grid.push_back(lo + (hi - lo) * static_cast<double>(g) /
                            static_cast<double>(points - 1));
  return grid;
}

// Worst-case alpha over the ball around one sample, by grid search.
inline double theta_bruteforce(double omega, double delta, double t,
                               const MaintenanceCosts& c, double xi_max,
                               int points) {
  double best = -1e300;
  for (double w : perturbation_grid(omega, delta, xi_max, points))
    best = std::max(best, alpha_cost(w, t, c));
  return best;
}

inline double psi_bruteforce(const EmpiricalRld& rld, double delta, double t,
                             const MaintenanceCosts& c, int points) {
  double sum = 0.0;
  for (double w : rld.samples)
    sum += theta_bruteforce(w, delta, t, c, rld.tau_max, points);
  return sum / static_cast<double>(rld.samples.size());
}

// Worst-case downtime indicator by evaluating the perturbed grid.
inline bool downtime_ok_bruteforce(const EmpiricalRld& rld, double delta,
                                   double t, double rho, double eps,
                                   int points) {
  std::size_t ok = 0;
  for (double w : rld.samples) {
    bool sample_ok = true;
    for (double pert : perturbation_grid(w, delta, rld.tau_max, points))
      if (std::max(t - pert, 0.0) > rho) sample_ok = false;
    if (sample_ok) ++ok;
  }
  return static_cast<double>(ok) + 1e-9 >=
         (1.0 - eps) * static_cast<double>(rld.samples.size());
}

// Worst-case P{omega <= t} by pushing each atom over the grid.
inline double p_bar_bruteforce(const EmpiricalRld& rld, double delta, double t,
                               int points) {
  std::size_t hit = 0;
  for (double w : rld.samples) {
    bool any = false;
    for (double pert : perturbation_grid(w, delta, rld.tau_max, points))
      if (pert <= t) any = true;
    if (any) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(rld.samples.size());
}

inline int t_star_linear_scan(const EmpiricalRld& rld, double delta, double rho,
                              double eps, int t_max) {
  for (int t = 1; t <= t_max; ++t)
    if (!downtime_ok(rld, delta, static_cast<double>(t), rho, eps)) return t;
  return t_max + 1;
}

}  // namespace drcbm::testing

#endif  // DRCBM_TESTS_ORACLES_HPP
