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

#ifndef DRCBM_PROGNOSTICS_HPP
#define DRCBM_PROGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "drcbm/degradation.hpp"
#include "drcbm/error.hpp"
#include "drcbm/rng.hpp"

namespace drcbm {

// Population priors fitted from run-to-failure training signals.
//
// The degradation model behind these priors: the phase-II log-signal is a
// Brownian motion with per-unit drift (the exponential rate) and known
// volatility. Remaining life is then the first passage of that motion over
// the remaining log-distance to the failure threshold, which is Inverse
// Gaussian. The drift prior is normal, so posterior updates stay conjugate.
struct Priors {
  int type_id = 0;
  double drift_mean = 0.0, drift_var = 0.0;  // normal prior on the log drift
  double bm_sigma_hat = 0.0;                 // plug-in volatility estimate
  double tau_obs_min = 0.0, tau_obs_max = 0.0;  // observed phase-I spans
  double log_theta_mean = 0.0, log_theta_var = 0.0;
  double phi = 0.0, dt = 1.0, failure_threshold = 0.0;
  double tau_max = 0.0;       // support bound: 3x the longest training life
  double max_lifetime = 0.0;  // longest training lifetime
  std::vector<std::string> warnings;
};

struct RldPosterior {
  double nu = 0.0;           // IG location (mean remaining life)
  double gamma_shape = 0.0;  // IG shape
  double tau_max = 0.0;
  double drift_mean = 0.0, drift_var = 0.0;  // updated drift belief
  bool used_prior_fallback = false;  // set when the data drift was <= 0
};

// Empirical remaining-life distribution: N samples plus the quantities the
// DRO layer needs (dispersion for the radius rule, support bound).
struct EmpiricalRld {
  std::vector<double> samples;
  double sigma_hat = 0.0;
  double tau_max = 0.0;
};

namespace detail {

// Index of the first phase-II sample, or size() when the signal never left
// the phase-I level. Phase I is written as the exact constant phi.
inline std::size_t first_phase2_index(const DegradationSignal& sig, double phi) {
  std::size_t i = 0;
  while (i < sig.values.size() && sig.values[i] == phi) ++i;
  return i;
}

struct OlsFit {
  double slope = 0.0, intercept = 0.0;
  std::size_t n = 0;
};

inline OlsFit ols_log_signal(const DegradationSignal& sig, std::size_t begin) {
  OlsFit fit;
  const double t0 = begin > 0 ? sig.times[begin - 1] : 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = begin; i < sig.times.size(); ++i) {
    const double x = sig.times[i] - t0;
    const double y = std::log(sig.values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.n;
  }
  const double n = static_cast<double>(fit.n);
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace detail

inline Priors fit_priors(const std::vector<DegradationSignal>& training,
                         double failure_threshold) {
  DRCBM_REQUIRE(training.size() >= 2, "fit_priors needs at least 2 training signals");
  Priors pri;
  pri.type_id = training.front().type_id;
  pri.phi = training.front().values.front();
  pri.dt = training.front().size() > 1
               ? training.front().times[1] - training.front().times[0]
               : 1.0;
  pri.failure_threshold = failure_threshold;

  std::vector<double> slopes, intercepts, taus;
  double resid_ss = 0.0;
  std::size_t resid_dof = 0;
  for (std::size_t n = 0; n < training.size(); ++n) {
    const auto& sig = training[n];
    const std::size_t begin = detail::first_phase2_index(sig, pri.phi);
    const std::size_t p2 = sig.size() - begin;
    if (p2 < 3) {
      pri.warnings.push_back("training signal " + std::to_string(n) +
                             " skipped: fewer than 3 phase-II samples");
      continue;
    }
    const auto fit = detail::ols_log_signal(sig, begin);
    slopes.push_back(fit.slope);
    intercepts.push_back(fit.intercept);
    taus.push_back(begin > 0 ? sig.times[begin - 1] : 0.0);
    // Residual variance of log increments around the per-signal mean step.
    double mean_step = (std::log(sig.values.back()) - std::log(sig.values[begin])) /
                       static_cast<double>(p2 - 1);
    for (std::size_t i = begin + 1; i < sig.size(); ++i) {
      const double d = std::log(sig.values[i]) - std::log(sig.values[i - 1]) - mean_step;
      resid_ss += d * d;
    }
    resid_dof += p2 - 2;
    pri.max_lifetime = std::max(pri.max_lifetime, sig.failure_time);
  }
  if (slopes.size() < 2)
    throw Error("fit_priors: fewer than 2 usable training signals (" +
                std::to_string(slopes.size()) + " had enough phase-II data)");

  const double m = static_cast<double>(slopes.size());
  pri.drift_mean = std::accumulate(slopes.begin(), slopes.end(), 0.0) / m;
  double var = 0.0;
  for (double s : slopes) var += (s - pri.drift_mean) * (s - pri.drift_mean);
  var /= (m - 1.0);
  // Floor to avoid singular updates on degenerate training sets.
  pri.drift_var = std::max(var, 1e-8 * pri.drift_mean * pri.drift_mean);

  pri.log_theta_mean =
      std::accumulate(intercepts.begin(), intercepts.end(), 0.0) / m;
  double tvar = 0.0;
  for (double v : intercepts)
    tvar += (v - pri.log_theta_mean) * (v - pri.log_theta_mean);
  pri.log_theta_var = std::max(tvar / (m - 1.0), 1e-12);

  pri.bm_sigma_hat =
      resid_dof > 0 ? std::sqrt(resid_ss / static_cast<double>(resid_dof) / pri.dt)
                    : 1e-6;
  pri.bm_sigma_hat = std::max(pri.bm_sigma_hat, 1e-9);
  pri.tau_obs_min = *std::min_element(taus.begin(), taus.end());
  pri.tau_obs_max = *std::max_element(taus.begin(), taus.end());
  pri.tau_max = 3.0 * pri.max_lifetime;
  return pri;
}

// Conjugate update of the drift from the observed phase-II log increments,
// then the Inverse-Gaussian first-passage law over the remaining
// log-distance r: IG(nu = r / drift, shape = r^2 / sigma^2).
inline RldPosterior update_posterior(const Priors& pri,
                                     const DegradationSignal& observed) {
  DRCBM_REQUIRE(!observed.values.empty(), "empty observation");
  const std::size_t begin = detail::first_phase2_index(observed, pri.phi);
  DRCBM_REQUIRE(begin < observed.size(),
                "update_posterior needs at least one phase-II sample");

  const double sigma2 = pri.bm_sigma_hat * pri.bm_sigma_hat;
  const std::size_t n_inc = observed.size() - begin - 1;
  const double y_sum = std::log(observed.values.back()) -
                       std::log(observed.values[begin]);
  const double prec = 1.0 / pri.drift_var +
                      static_cast<double>(n_inc) * pri.dt / sigma2;
  const double mean = (pri.drift_mean / pri.drift_var + y_sum / sigma2) / prec;

  RldPosterior post;
  post.tau_max = pri.tau_max;
  post.drift_mean = mean;
  post.drift_var = 1.0 / prec;
  double drift = mean;
  if (drift <= 0.0) {
    drift = pri.drift_mean;
    post.used_prior_fallback = true;
    if (drift <= 0.0)
      throw Error("update_posterior: non-positive drift with non-positive prior mean");
  }
  const double r = std::log(pri.failure_threshold) - std::log(observed.values.back());
  if (r <= 0.0)
    throw Error("update_posterior: signal already at or over the failure threshold");
  post.nu = r / drift;
  // Effective volatility: the residual drift uncertainty acts like extra
  // diffusion of variance rate drift_var * nu at the passage horizon.
  // Without it the interval ignores estimation error and under-covers.
  const double sigma2_eff = sigma2 + post.drift_var * post.nu;
  post.gamma_shape = r * r / sigma2_eff;
  return post;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double ig_cdf(double x, double nu, double shape) {
  if (x <= 0.0) return 0.0;
  const double a = std::sqrt(shape / x);
  const double base = normal_cdf(a * (x / nu - 1.0));
  // The classical second term; guard the exp overflow for huge shapes.
  const double log_term = 2.0 * shape / nu +
                          std::log(std::max(normal_cdf(-a * (x / nu + 1.0)), 0.0));
  return std::isfinite(log_term) ? base + std::exp(log_term) : base;
}

inline double ig_quantile(double p, double nu, double shape) {
  DRCBM_REQUIRE(p > 0.0 && p < 1.0, "quantile level must be in (0,1)");
  double lo = 0.0, hi = nu;
  while (ig_cdf(hi, nu, shape) < p) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ig_cdf(mid, nu, shape) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

// Michael-Schucany-Haas sampler for IG(nu, shape).
inline double sample_ig(std::mt19937_64& rng, double nu, double shape) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double z = gauss(rng);
  const double y = z * z;
  const double x = nu + nu * nu * y / (2.0 * shape) -
                   nu / (2.0 * shape) *
                       std::sqrt(4.0 * nu * shape * y + nu * nu * y * y);
  return unif(rng) <= nu / (nu + x) ? x : nu * nu / x;
}

inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) /
                      static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace detail

inline EmpiricalRld sample_rld(const RldPosterior& post, int n, std::uint64_t seed) {
  DRCBM_REQUIRE(n >= 1, "sample count must be at least 1");
  DRCBM_REQUIRE(post.nu > 0.0 && post.gamma_shape > 0.0, "invalid posterior");
  auto rng = make_engine(seed);
  EmpiricalRld rld;
  rld.tau_max = post.tau_max;
  rld.samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double w = detail::sample_ig(rng, post.nu, post.gamma_shape);
    rld.samples.push_back(std::clamp(w, 0.0, post.tau_max));
  }
  rld.sigma_hat = detail::sample_std(rld.samples);
  return rld;
}

// Prior-predictive remaining life for a unit still in phase I at the given
// age: leftover phase-I span plus an IG phase-II passage with parameters
// drawn from the fitted priors. Used before any phase-II data exists.
inline EmpiricalRld prior_rld(const Priors& pri, double age, int n,
                              std::uint64_t seed) {
  DRCBM_REQUIRE(n >= 1, "sample count must be at least 1");
  auto rng = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double sigma2 = pri.bm_sigma_hat * pri.bm_sigma_hat;
  EmpiricalRld rld;
  rld.tau_max = pri.tau_max;
  rld.samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double tau = pri.tau_obs_min +
                       (pri.tau_obs_max - pri.tau_obs_min) * unif(rng);
    const double phase1_left = std::max(tau - age, 0.0);
    double drift = pri.drift_mean + std::sqrt(pri.drift_var) * gauss(rng);
    for (int tries = 0; drift <= 0.0 && tries < 64; ++tries)
      drift = pri.drift_mean + std::sqrt(pri.drift_var) * gauss(rng);
    drift = std::max(drift, 1e-6);
    const double log_theta =
        pri.log_theta_mean + std::sqrt(pri.log_theta_var) * gauss(rng);
    const double r = std::log(pri.failure_threshold) - log_theta;
    double phase2 = r <= 0.0 ? 0.0
                             : detail::sample_ig(rng, r / drift, r * r / sigma2);
    rld.samples.push_back(std::clamp(phase1_left + phase2, 0.0, pri.tau_max));
  }
  rld.sigma_hat = detail::sample_std(rld.samples);
  return rld;
}

// Degenerate distribution used for components that have already failed.
inline EmpiricalRld failed_rld(int n, double tau_max) {
  EmpiricalRld rld;
  rld.samples.assign(static_cast<std::size_t>(std::max(n, 1)), 0.0);
  rld.sigma_hat = 0.0;
  rld.tau_max = tau_max;
  return rld;
}

}  // namespace drcbm

#endif  // DRCBM_PROGNOSTICS_HPP
