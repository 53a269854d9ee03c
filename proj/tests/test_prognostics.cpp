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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "drcbm/degradation.hpp"
#include "drcbm/prognostics.hpp"

using namespace drcbm;

namespace {

// Signal with exact phase-I level phi and a pure exponential phase II.
DegradationSignal synthetic_signal(double phi, double tau, double theta,
                                   double beta, double threshold, double dt) {
  DegradationSignal sig;
  sig.tau = tau;
  sig.theta = theta;
  sig.beta = beta;
  for (long k = 0;; ++k) {
    const double t = k * dt;
    const double v = t <= tau ? phi : theta * std::exp(beta * (t - tau));
    sig.times.push_back(t);
    sig.values.push_back(v);
    if (v >= threshold) {
      sig.failure_time = t;
      return sig;
    }
  }
}

}  // namespace

TEST_CASE("priors from two identical noiseless signals hit the variance floor") {
  const double beta = 0.05;
  auto a = synthetic_signal(1.0, 10.0, 1.0, beta, 100.0, 1.0);
  auto b = synthetic_signal(1.0, 10.0, 1.0, beta, 100.0, 1.0);
  const auto pri = fit_priors({a, b}, 100.0);
  REQUIRE(pri.drift_mean == Catch::Approx(beta).margin(1e-9));
  REQUIRE(pri.drift_var == Catch::Approx(1e-8 * beta * beta));
  REQUIRE(pri.tau_max == Catch::Approx(3.0 * a.failure_time));
}

TEST_CASE("priors require at least two usable signals") {
  REQUIRE_THROWS_AS(fit_priors({}, 100.0), Error);
  auto sig = synthetic_signal(1.0, 10.0, 1.0, 0.05, 100.0, 1.0);
  REQUIRE_THROWS_AS(fit_priors({sig}, 100.0), Error);
  // Signals that never leave phase I are skipped, with a warning each.
  DegradationSignal flat;
  flat.times = {0, 1, 2};
  flat.values = {1.0, 1.0, 1.0};
  flat.failure_time = 2;
  auto ok1 = synthetic_signal(1.0, 10.0, 1.0, 0.05, 100.0, 1.0);
  auto ok2 = synthetic_signal(1.0, 12.0, 1.0, 0.06, 100.0, 1.0);
  const auto pri = fit_priors({flat, ok1, ok2}, 100.0);
  REQUIRE(pri.warnings.size() == 1);
  REQUIRE_THROWS_AS(fit_priors({flat, flat}, 100.0), Error);
}

TEST_CASE("fitted drift prior tracks the generator's slope statistics") {
  const auto params = study_component_types()[0];
  const auto training = generate_dataset(params, 50, 2024);
  const auto pri = fit_priors(training, params.failure_threshold);
  // Slopes estimate beta per signal; their mean estimates E[beta].
  const double expected =
      std::exp(params.log_beta_mu + 0.5 * params.log_beta_sigma * params.log_beta_sigma);
  const double se = std::sqrt(pri.drift_var / 50.0);
  REQUIRE(std::fabs(pri.drift_mean - expected) < 3.0 * se);
  // Pooled volatility should land near the generator's bm_sigma.
  REQUIRE(pri.bm_sigma_hat == Catch::Approx(params.bm_sigma).epsilon(0.25));
}

TEST_CASE("posterior from a noiseless prefix concentrates at r over drift") {
  const double beta = 0.05;
  auto a = synthetic_signal(1.0, 10.0, 1.0, beta, 100.0, 1.0);
  auto b = synthetic_signal(1.0, 12.0, 1.0, beta * 1.001, 100.0, 1.0);
  const auto pri = fit_priors({a, b}, 100.0);

  const auto prefix = truncate_at_age(a, 40.0).signal;
  const auto post = update_posterior(pri, prefix);
  const double r = std::log(100.0) - std::log(prefix.values.back());
  REQUIRE(post.nu == Catch::Approx(r / beta).epsilon(1e-3));
  // Tiny pooled volatility makes the IG collapse onto its mean.
  const double q10 = ig_quantile(0.10, post.nu, post.gamma_shape);
  const double q90 = ig_quantile(0.90, post.nu, post.gamma_shape);
  REQUIRE(q90 - q10 < 1e-2 * post.nu);
}

TEST_CASE("phase-I-only prefix is rejected") {
  const auto params = study_component_types()[0];
  const auto training = generate_dataset(params, 10, 7);
  const auto pri = fit_priors(training, params.failure_threshold);
  const auto sig = simulate_signal(params, 991);
  const auto prefix = truncate_at_age(sig, 0.0).signal;
  REQUIRE_THROWS_AS(update_posterior(pri, prefix), Error);
}

TEST_CASE("posterior drift variance contracts") {
  const auto params = study_component_types()[0];
  const auto training = generate_dataset(params, 20, 3);
  const auto pri = fit_priors(training, params.failure_threshold);
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto sig = simulate_signal(params, seed);
    const auto prefix = truncate_at_age(sig, 0.6 * sig.failure_time).signal;
    if (detail::first_phase2_index(prefix, pri.phi) >= prefix.size()) continue;
    const auto post = update_posterior(pri, prefix);
    REQUIRE(post.drift_var <= pri.drift_var + 1e-15);
  }
}

TEST_CASE("more increments with a fixed slope pull nu toward r over slope") {
  // Prefixes that end at the same level but carry more and more increments
  // of the same empirical slope.
  const double slope = 0.04, dt = 1.0, phi = 1.0;
  const double y_end = std::log(40.0);
  auto a = synthetic_signal(phi, 10.0, 1.0, 0.05, 100.0, dt);
  auto b = synthetic_signal(phi, 12.0, 1.0, 0.06, 100.0, dt);
  auto pri = fit_priors({a, b}, 100.0);
  pri.bm_sigma_hat = 0.1;  // give the data likelihood a finite weight

  const double target = (std::log(100.0) - y_end) / slope;
  double last_gap = 1e18;
  for (int n = 2; n <= 30; n += 4) {
    DegradationSignal prefix;
    prefix.times.push_back(0.0);
    prefix.values.push_back(phi);
    for (int i = 0; i < n; ++i) {
      prefix.times.push_back(1.0 + i * dt);
      prefix.values.push_back(std::exp(y_end - slope * dt * (n - 1 - i)));
    }
    prefix.failure_time = 1e9;
    const auto post = update_posterior(pri, prefix);
    const double gap = std::fabs(post.nu - target);
    REQUIRE(gap <= last_gap + 1e-12);
    last_gap = gap;
  }
}

TEST_CASE("sampled remaining lives respect the support and IG moments") {
  RldPosterior post;
  post.tau_max = 1000.0;

  post.nu = 10.0;
  post.gamma_shape = 1e12;  // shape -> inf degenerates to the mean
  auto rld = sample_rld(post, 100, 5);
  for (double w : rld.samples) REQUIRE(w == Catch::Approx(10.0).margin(1e-2));

  post.gamma_shape = 40.0;
  rld = sample_rld(post, 100000, 5);
  double sum = 0.0;
  for (double w : rld.samples) {
    REQUIRE(w >= 0.0);
    REQUIRE(w <= post.tau_max);
    sum += w;
  }
  const double mean = sum / static_cast<double>(rld.samples.size());
  REQUIRE(std::fabs(mean - 10.0) / 10.0 < 0.01);
  double ss = 0.0;
  for (double w : rld.samples) ss += (w - mean) * (w - mean);
  const double var = ss / (static_cast<double>(rld.samples.size()) - 1.0);
  REQUIRE(std::fabs(var - 25.0) / 25.0 < 0.05);  // nu^3 / shape

  const auto single = sample_rld(post, 1, 99);
  REQUIRE(single.samples.size() == 1);
  REQUIRE(single.samples[0] >= 0.0);
  REQUIRE(single.samples[0] <= post.tau_max);

  // Clipping binds when the support is tight.
  post.tau_max = 9.0;
  rld = sample_rld(post, 1000, 6);
  for (double w : rld.samples) REQUIRE(w <= 9.0);

  REQUIRE_THROWS_AS(sample_rld(post, 0, 1), Error);
}

TEST_CASE("IG cdf and quantile are consistent") {
  const double nu = 25.0, shape = 120.0;
  for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    const double q = ig_quantile(p, nu, shape);
    REQUIRE(ig_cdf(q, nu, shape) == Catch::Approx(p).margin(1e-6));
  }
}

TEST_CASE("posterior intervals cover the true residual life") {
  // Monte-Carlo sanity floor: the 80% central interval at half life under
  // abundant training covers the realized residual in well over 60% of
  // replications.
  const auto params = study_component_types()[0];
  const auto training = generate_dataset(params, 50, 808);
  const auto pri = fit_priors(training, params.failure_threshold);
  int covered = 0, total = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto sig = simulate_signal(params, derive_seed(2121, static_cast<std::uint64_t>(rep)));
    const auto obs = truncate_at_age(sig, 0.5 * sig.failure_time);
    if (detail::first_phase2_index(obs.signal, pri.phi) >= obs.signal.size())
      continue;  // still in phase I at half life
    const auto post = update_posterior(pri, obs.signal);
    const double lo = ig_quantile(0.10, post.nu, post.gamma_shape);
    const double hi = ig_quantile(0.90, post.nu, post.gamma_shape);
    ++total;
    if (obs.true_residual_life >= lo && obs.true_residual_life <= hi) ++covered;
  }
  INFO("coverage " << covered << "/" << total);
  REQUIRE(total >= 150);
  REQUIRE(static_cast<double>(covered) / static_cast<double>(total) >= 0.60);
}

TEST_CASE("prior-predictive remaining life is usable for phase-I units") {
  const auto params = study_component_types()[0];
  const auto training = generate_dataset(params, 50, 11);
  const auto pri = fit_priors(training, params.failure_threshold);
  const auto rld = prior_rld(pri, 10.0, 500, 303);
  REQUIRE(rld.samples.size() == 500);
  double mean = 0.0;
  for (double w : rld.samples) {
    REQUIRE(w >= 0.0);
    REQUIRE(w <= rld.tau_max);
    mean += w;
  }
  mean /= 500.0;
  // Mean residual from age 10 should sit within a broad band around the
  // target lifetime minus the age.
  REQUIRE(mean > 100.0);
  REQUIRE(mean < 260.0);
  const auto replay = prior_rld(pri, 10.0, 500, 303);
  REQUIRE(replay.samples == rld.samples);
}
