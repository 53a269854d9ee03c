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
#include <sstream>

#include "drcbm/degradation.hpp"

using namespace drcbm;

namespace {

ComponentTypeParams noiseless_params(double beta) {
  ComponentTypeParams p;
  p.type_id = 1;
  p.phi = 1.0;
  p.tau_a = 5.0;
  p.tau_b = 15.0;
  p.log_theta_mu = 0.0;  // theta pinned at phi
  p.log_theta_sigma = 1e-12;
  p.log_beta_mu = std::log(beta);
  p.log_beta_sigma = 1e-12;
  p.bm_sigma = 0.0;
  p.failure_threshold = 100.0;
  p.dt = 1.0;
  p.tau_max = 1000.0;
  return p;
}

}  // namespace

TEST_CASE("noiseless signal crosses at the deterministic grid point") {
  const double beta = 0.05;
  auto params = noiseless_params(beta);
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    const auto sig = simulate_signal(params, seed);
    const double crossing =
        sig.tau + std::log(params.failure_threshold / params.phi) / sig.beta;
    const double expected = params.dt * std::ceil(crossing / params.dt);
    REQUIRE(sig.failure_time == Catch::Approx(expected).margin(1e-9));
  }
}

TEST_CASE("degenerate threshold rejected") {
  auto params = noiseless_params(0.05);
  params.failure_threshold = params.phi;  // threshold must exceed phi
  REQUIRE_THROWS_AS(simulate_signal(params, 1), Error);
}

TEST_CASE("pre-failure samples stay below the threshold") {
  auto types = study_component_types();
  for (const auto& params : types)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto sig = simulate_signal(params, seed);
      for (std::size_t i = 0; i + 1 < sig.values.size(); ++i)
        REQUIRE(sig.values[i] < params.failure_threshold);
      REQUIRE(sig.values.back() >= params.failure_threshold);
      REQUIRE(sig.failure_time == sig.times.back());
    }
}

TEST_CASE("zero-volatility phase II is exactly log-linear") {
  auto params = noiseless_params(0.04);
  params.log_theta_mu = 0.3;
  const auto sig = simulate_signal(params, 7);
  for (std::size_t i = 0; i < sig.times.size(); ++i) {
    if (sig.times[i] <= sig.tau) continue;
    const double expected =
        std::log(sig.theta) + sig.beta * (sig.times[i] - sig.tau);
    REQUIRE(std::log(sig.values[i]) == Catch::Approx(expected).margin(1e-12));
  }
}

TEST_CASE("equal seeds give byte-identical signals") {
  const auto params = study_component_types()[0];
  const auto a = simulate_signal(params, 1234);
  const auto b = simulate_signal(params, 1234);
  REQUIRE(a.times == b.times);
  REQUIRE(a.values == b.values);
  REQUIRE(a.failure_time == b.failure_time);
  const auto c = simulate_signal(params, 1235);
  REQUIRE(a.values != c.values);
}

TEST_CASE("calibrated mean lifetimes land near their targets") {
  const auto types = study_component_types();
  const double targets[] = {180.0, 240.0, 270.0};
  for (std::size_t l = 0; l < types.size(); ++l) {
    double sum = 0.0;
    const int n = 1000;
    for (int i = 0; i < n; ++i)
      sum += simulate_signal(types[l], derive_seed(555, l, static_cast<std::uint64_t>(i)))
                 .failure_time;
    const double mean = sum / n;
    INFO("type " << l + 1 << " mean lifetime " << mean);
    REQUIRE(std::fabs(mean - targets[l]) / targets[l] < 0.10);
  }
}

TEST_CASE("log theta draws match their prior moments") {
  const auto params = study_component_types()[1];
  const int n = 10000;
  double sum = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto sig = simulate_signal(params, derive_seed(42, static_cast<std::uint64_t>(i)));
    const double lt = std::log(sig.theta);
    sum += lt;
    ss += lt * lt;
  }
  const double mean = sum / n;
  const double var = ss / n - mean * mean;
  const double se_mean = params.log_theta_sigma / std::sqrt(static_cast<double>(n));
  REQUIRE(std::fabs(mean - params.log_theta_mu) < 3.0 * se_mean);
  const double sigma2 = params.log_theta_sigma * params.log_theta_sigma;
  const double se_var = sigma2 * std::sqrt(2.0 / (n - 1.0));
  REQUIRE(std::fabs(var - sigma2) < 3.0 * se_var);
}

TEST_CASE("dataset generation is sized and reproducible") {
  const auto params = study_component_types()[0];
  REQUIRE(generate_dataset(params, 5, 9).size() == 5);    // sparse setup
  REQUIRE(generate_dataset(params, 50, 9).size() == 50);  // abundant setup
  const auto once = generate_dataset(params, 1, 77);
  const auto twice = generate_dataset(params, 1, 77);
  REQUIRE(once[0].values == twice[0].values);
  REQUIRE_THROWS_AS(generate_dataset(params, 0, 1), Error);
}

TEST_CASE("truncation keeps the grid prefix and the residual") {
  const auto params = study_component_types()[0];
  const auto sig = simulate_signal(params, 31);

  const auto at_zero = truncate_at_age(sig, 0.0);
  REQUIRE(at_zero.signal.size() == 1);
  REQUIRE(at_zero.signal.values[0] == params.phi);

  const auto full = truncate_at_age(sig, sig.failure_time);
  REQUIRE(full.signal.size() == sig.size());
  REQUIRE(full.true_residual_life == 0.0);

  const double half = sig.failure_time / 2.0;
  const auto mid = truncate_at_age(sig, half);
  REQUIRE(mid.signal.size() ==
          static_cast<std::size_t>(std::floor(half / params.dt)) + 1);
  REQUIRE(mid.true_residual_life == Catch::Approx(sig.failure_time - half));

  REQUIRE_THROWS_AS(truncate_at_age(sig, sig.failure_time + 1.0), Error);
}

TEST_CASE("signal tsv round-trips") {
  const auto params = study_component_types()[2];
  const auto signals = generate_dataset(params, 3, 5);
  std::stringstream ss;
  write_signals_tsv(ss, signals);
  const auto back = read_signals_tsv(ss);
  REQUIRE(back.size() == signals.size());
  for (std::size_t i = 0; i < signals.size(); ++i) {
    REQUIRE(back[i].type_id == signals[i].type_id);
    REQUIRE(back[i].times == signals[i].times);
    REQUIRE(back[i].values == signals[i].values);
  }
}
