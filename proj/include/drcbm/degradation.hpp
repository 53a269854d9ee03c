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

#ifndef DRCBM_DEGRADATION_HPP
#define DRCBM_DEGRADATION_HPP

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drcbm/error.hpp"
#include "drcbm/rng.hpp"

namespace drcbm {

// Generative model of one component type's condition-monitoring signal.
// Phase I is a constant level phi over a uniformly drawn span; phase II is
// an exponential trend theta * exp(beta * u + eps(u)) in the elapsed
// phase-II time u, where eps is Brownian with variance bm_sigma^2 * u.
struct ComponentTypeParams {
  int type_id = 0;
  double phi = 1.0;                 // phase-I signal level
  double tau_a = 0.0, tau_b = 1.0;  // uniform bounds on the phase-I span
  double log_theta_mu = 0.0, log_theta_sigma = 0.1;
  double log_beta_mu = -3.0, log_beta_sigma = 0.1;
  double bm_sigma = 0.05;           // Brownian volatility per unit time
  double failure_threshold = 100.0;
  double dt = 1.0;                  // sampling interval
  double tau_max = 1000.0;          // upper support bound for remaining life
  double sim_cap_factor = 100.0;    // abort if t exceeds sim_cap_factor*tau_b

  void validate() const {
    DRCBM_REQUIRE(tau_a >= 0.0 && tau_b > tau_a, "tau range must satisfy 0 <= a < b");
    DRCBM_REQUIRE(log_theta_sigma > 0.0, "log_theta_sigma must be positive");
    DRCBM_REQUIRE(log_beta_sigma > 0.0, "log_beta_sigma must be positive");
    DRCBM_REQUIRE(bm_sigma >= 0.0, "bm_sigma must be non-negative");
    DRCBM_REQUIRE(phi > 0.0 && failure_threshold > phi,
                  "failure threshold must exceed the phase-I level");
    DRCBM_REQUIRE(dt > 0.0, "dt must be positive");
    DRCBM_REQUIRE(tau_max > 0.0, "tau_max must be positive");
  }
};

// One simulated run-to-failure signal on a regular grid of spacing dt.
// The final sample is the first one at or above the failure threshold.
struct DegradationSignal {
  int type_id = 0;
  std::vector<double> times;
  std::vector<double> values;
  double failure_time = 0.0;
  double tau = 0.0, theta = 0.0, beta = 0.0;  // realized parameters

  std::size_t size() const { return times.size(); }
};

inline DegradationSignal simulate_signal(const ComponentTypeParams& params,
                                         std::uint64_t seed) {
  params.validate();
  auto rng = make_engine(seed);
  std::uniform_real_distribution<double> unif(params.tau_a, params.tau_b);
  std::normal_distribution<double> gauss(0.0, 1.0);

  DegradationSignal sig;
  sig.type_id = params.type_id;
  sig.tau = unif(rng);
  sig.theta = std::exp(params.log_theta_mu + params.log_theta_sigma * gauss(rng));
  sig.beta = std::exp(params.log_beta_mu + params.log_beta_sigma * gauss(rng));

  const double hard_cap = params.sim_cap_factor * params.tau_b;
  const double log_theta = std::log(sig.theta);
  double eps = 0.0;          // Brownian value in the exponent
  double prev_u = 0.0;       // elapsed phase-II time at the previous sample
  long step = 0;
  while (true) {
    const double t = step * params.dt;
    double value;
    if (t <= sig.tau) {
      value = params.phi;
    } else {
      const double u = t - sig.tau;
      // Accumulate the Brownian increment since the previous phase-II
      // sample; the first increment bridges the fractional step past tau.
      eps += std::sqrt(u - prev_u) * params.bm_sigma * gauss(rng);
      prev_u = u;
      value = std::exp(log_theta + sig.beta * u + eps);
    }
    sig.times.push_back(t);
    sig.values.push_back(value);
    if (value >= params.failure_threshold) {
      sig.failure_time = t;
      return sig;
    }
    if (t > hard_cap) {
      throw Error("degradation signal did not cross the threshold before t=" +
                  std::to_string(hard_cap) + " (type " +
                  std::to_string(params.type_id) + ")");
    }
    ++step;
  }
}

inline std::vector<DegradationSignal> generate_dataset(
    const ComponentTypeParams& params, int n, std::uint64_t seed) {
  DRCBM_REQUIRE(n >= 1, "dataset size must be at least 1");
  std::vector<DegradationSignal> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out.push_back(simulate_signal(params, derive_seed(seed, static_cast<std::uint64_t>(i))));
  return out;
}

// Prefix of a signal observed up to a given age, with the residual life
// recorded for later scoring.
struct ObservedPrefix {
  DegradationSignal signal;    // samples with t <= age only
  double true_residual_life = 0.0;
};

inline ObservedPrefix truncate_at_age(const DegradationSignal& sig, double age) {
  DRCBM_REQUIRE(age >= 0.0, "age must be non-negative");
  if (age > sig.failure_time)
    throw Error("cannot truncate at age " + std::to_string(age) +
                ": component already failed at " + std::to_string(sig.failure_time));
  ObservedPrefix out;
  out.signal.type_id = sig.type_id;
  out.signal.tau = sig.tau;
  out.signal.theta = sig.theta;
  out.signal.beta = sig.beta;
  for (std::size_t i = 0; i < sig.times.size() && sig.times[i] <= age; ++i) {
    out.signal.times.push_back(sig.times[i]);
    out.signal.values.push_back(sig.values[i]);
  }
  out.signal.failure_time = sig.failure_time;
  out.true_residual_life = sig.failure_time - age;
  return out;
}

// Columnar signal serialization: one row per sample,
// "component_type <tab> signal_id <tab> t <tab> S".
inline void write_signals_tsv(std::ostream& os,
                              const std::vector<DegradationSignal>& signals) {
  os << "component_type\tsignal_id\tt\tS\n";
  os.precision(17);
  for (std::size_t n = 0; n < signals.size(); ++n) {
    const auto& sig = signals[n];
    for (std::size_t i = 0; i < sig.times.size(); ++i)
      os << sig.type_id << '\t' << n << '\t' << sig.times[i] << '\t'
         << sig.values[i] << '\n';
  }
}

inline std::vector<DegradationSignal> read_signals_tsv(std::istream& is) {
  std::vector<DegradationSignal> signals;
  std::string line;
  std::getline(is, line);  // header
  long last_id = -1;
  int last_type = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int type_id;
    long signal_id;
    double t, s;
    if (!(row >> type_id >> signal_id >> t >> s))
      throw Error("malformed signal row: " + line);
    if (signal_id != last_id || type_id != last_type) {
      signals.emplace_back();
      signals.back().type_id = type_id;
      last_id = signal_id;
      last_type = type_id;
    }
    signals.back().times.push_back(t);
    signals.back().values.push_back(s);
  }
  for (auto& sig : signals) {
    DRCBM_REQUIRE(!sig.times.empty(), "empty signal in file");
    sig.failure_time = sig.times.back();
  }
  return signals;
}

// Default generative parameters for the three component types of the
// shipped wind-farm configuration. Calibrated by Monte Carlo (see the
// `calibrate` CLI subcommand) so that mean lifetimes come out near
// 180, 240 and 270 days.
inline std::vector<ComponentTypeParams> study_component_types() {
  std::vector<ComponentTypeParams> types(3);
  for (int l = 0; l < 3; ++l) {
    auto& p = types[l];
    p.type_id = l + 1;
    p.phi = 1.0;
    p.log_theta_mu = 0.0;
    p.log_theta_sigma = 0.25;
    p.log_beta_sigma = 0.30;
    p.bm_sigma = 0.08;
    p.failure_threshold = 150.0;
    p.dt = 1.0;
  }
  types[0].tau_a = 20.0;
  types[0].tau_b = 60.0;
  types[0].log_beta_mu = -3.2853;
  types[0].tau_max = 540.0;
  types[1].tau_a = 30.0;
  types[1].tau_b = 80.0;
  types[1].log_beta_mu = -3.5639;
  types[1].tau_max = 720.0;
  types[2].tau_a = 30.0;
  types[2].tau_b = 90.0;
  types[2].log_beta_mu = -3.6905;
  types[2].tau_max = 810.0;
  return types;
}

}  // namespace drcbm

#endif  // DRCBM_DEGRADATION_HPP
