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

#include <random>
#include <sstream>

#include "drcbm/dro.hpp"
#include "support/oracles.hpp"

using namespace drcbm;

namespace {

const MaintenanceCosts kStudyCosts{1.3, 0.13, 7.8, 0.78};

EmpiricalRld make_rld(std::vector<double> samples, double tau_max = 1000.0) {
  EmpiricalRld rld;
  rld.samples = std::move(samples);
  rld.sigma_hat = detail::sample_std(rld.samples);
  rld.tau_max = tau_max;
  return rld;
}

}  // namespace

TEST_CASE("repair cost branches") {
  REQUIRE(alpha_cost(20, 15, kStudyCosts) == Catch::Approx(1.95));  // preventive
  REQUIRE(alpha_cost(10, 15, kStudyCosts) == Catch::Approx(11.7));  // corrective
  // Repair exactly at the failure time counts as corrective.
  REQUIRE(alpha_cost(15, 15, kStudyCosts) == Catch::Approx(kStudyCosts.c_co));
}

TEST_CASE("worst-case single-sample cost") {
  // Zero radius collapses to alpha.
  for (double t : {1.0, 5.0, 9.0, 10.0, 11.0, 20.0})
    REQUIRE(theta_worst_case(10, 0, t, kStudyCosts, 50) ==
            alpha_cost(10, t, kStudyCosts));
  // Both branches reachable: the corrective one dominates here.
  REQUIRE(theta_worst_case(10, 2, 11, kStudyCosts, 50) == Catch::Approx(10.14));
  // Early epoch: only the preventive branch is reachable.
  REQUIRE(theta_worst_case(10, 2, 7, kStudyCosts, 50) == Catch::Approx(1.95));
}

TEST_CASE("psi equals the sample mean of worst cases") {
  const auto rld = make_rld({10, 20}, 50);
  REQUIRE(psi_value(rld, 0, 15, kStudyCosts) == Catch::Approx(6.825));
  // delta = 0 is the plain sample average of alpha.
  for (double t = 1; t <= 30; ++t) {
    double mean = 0.0;
    for (double w : rld.samples) mean += alpha_cost(w, t, kStudyCosts);
    mean /= static_cast<double>(rld.samples.size());
    REQUIRE(psi_value(rld, 0, t, kStudyCosts) == mean);
  }
  REQUIRE(psi_value(rld, 0.5, 15, kStudyCosts) >= psi_value(rld, 0, 15, kStudyCosts));
}

TEST_CASE("psi matches grid brute force") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> samples;
    const int n = 1 + static_cast<int>(u(rng) * 4);
    for (int i = 0; i < n; ++i) samples.push_back(u(rng) * 30.0);
    const auto rld = make_rld(std::move(samples), 40.0);
    const double delta = u(rng) * 5.0;
    const double t = 1.0 + std::floor(u(rng) * 20.0);
    const double closed = psi_value(rld, delta, t, kStudyCosts);
    const double brute = testing::psi_bruteforce(rld, delta, t, kStudyCosts, 2001);
    const double slope = std::max(kStudyCosts.v_pr, kStudyCosts.v_co);
    REQUIRE(closed >= brute - 1e-9);
    REQUIRE(closed - brute <= slope * (2.0 * delta / 2000.0) + 1e-9);
  }
}

TEST_CASE("downtime indicator follows the sample fraction") {
  const auto rld = make_rld({10, 12});
  REQUIRE(downtime_ok(rld, 0, 14, 5, 0.1));
  REQUIRE_FALSE(downtime_ok(rld, 0, 16, 5, 0.1));
  // A cap beyond the horizon never binds.
  for (int t = 1; t <= 50; ++t) REQUIRE(downtime_ok(rld, 0, t, 50, 0.1));
}

TEST_CASE("blocked-epoch search equals the linear scan") {
  const auto rld = make_rld({10, 12});
  REQUIRE(first_blocked_epoch(rld, 0, 5, 0.1, 50) == 16);
  REQUIRE(first_blocked_epoch(rld, 0, 50, 0.1, 50) == 51);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> samples;
    const int n = 1 + static_cast<int>(u(rng) * 8);
    for (int i = 0; i < n; ++i) samples.push_back(u(rng) * 40.0);
    const auto r = make_rld(std::move(samples));
    const double delta = u(rng) * 4.0;
    const double rho = u(rng) * 10.0;
    const double eps = 0.05 + 0.4 * u(rng);
    const int t_max = 1 + static_cast<int>(u(rng) * 60.0);
    REQUIRE(first_blocked_epoch(r, delta, rho, eps, t_max) ==
            testing::t_star_linear_scan(r, delta, rho, eps, t_max));
  }
}

TEST_CASE("worst-case failure probability") {
  const auto rld = make_rld({10, 20, 30});
  REQUIRE(p_bar(rld, 2, 18) == Catch::Approx(2.0 / 3.0));
  // Zero radius is the empirical cdf.
  REQUIRE(p_bar(rld, 0, 9.999) == Catch::Approx(0.0));
  REQUIRE(p_bar(rld, 0, 10) == Catch::Approx(1.0 / 3.0));
  REQUIRE(p_bar(rld, 0, 30) == Catch::Approx(1.0));
  // A radius beyond the largest sample saturates.
  for (double t : {0.0, 1.0, 5.0})
    REQUIRE(p_bar(rld, 31, t) == Catch::Approx(1.0));
}

TEST_CASE("precomputed grids are monotone") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> samples;
    const int n = 2 + static_cast<int>(u(rng) * 6);
    for (int i = 0; i < n; ++i) samples.push_back(u(rng) * 30.0);
    const auto rld = make_rld(std::move(samples), 60.0);
    const double d1 = u(rng) * 2.0, d2 = d1 + u(rng) * 3.0;
    for (int t = 1; t <= 30; ++t) {
      REQUIRE(p_bar(rld, d2, t) >= p_bar(rld, d1, t));
      if (t > 1) REQUIRE(p_bar(rld, d1, t) >= p_bar(rld, d1, t - 1));
      REQUIRE(psi_value(rld, d2, t, kStudyCosts) >=
              psi_value(rld, d1, t, kStudyCosts) - 1e-12);
      REQUIRE(downtime_ok(rld, d2, t, 5, 0.1) <= downtime_ok(rld, d1, t, 5, 0.1));
      if (t > 1)
        REQUIRE(downtime_ok(rld, d1, t, 5, 0.1) <=
                downtime_ok(rld, d1, t - 1, 5, 0.1));
    }
  }
}

TEST_CASE("failure-count cdf reproduces the worked example") {
  const std::vector<double> ps{0.1, 0.25, 0.8};
  REQUIRE(pbinom_cdf(ps, 0) == Catch::Approx(0.135).margin(1e-12));
  REQUIRE(pbinom_cdf(ps, 1) == Catch::Approx(0.735).margin(1e-12));
  REQUIRE(pbinom_cdf(ps, 2) == Catch::Approx(0.98).margin(1e-12));
  REQUIRE(pbinom_cdf(ps, 3) == 1.0);
  REQUIRE(pbinom_cdf(ps, 7) == 1.0);
}

TEST_CASE("failure-count cdf equals exhaustive enumeration") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + static_cast<int>(u(rng) * 12.0);
    std::vector<double> ps;
    for (int i = 0; i < n; ++i) ps.push_back(u(rng));
    const int m = static_cast<int>(u(rng) * (n + 1));
    REQUIRE(pbinom_cdf(ps, m) ==
            Catch::Approx(testing::pbinom_bruteforce(ps, m)).margin(1e-12));
  }
}

TEST_CASE("componentwise larger parameters shift the cdf down") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(u(rng) * 10.0);
    std::vector<double> px, py;
    for (int i = 0; i < n; ++i) {
      const double lo = u(rng);
      px.push_back(lo);
      py.push_back(lo + (1.0 - lo) * u(rng));
    }
    for (int m = 0; m <= n; ++m)
      REQUIRE(pbinom_cdf(px, m) >= pbinom_cdf(py, m) - 1e-12);
  }
}

TEST_CASE("schedule feasibility check") {
  std::vector<EmpiricalRld> rlds;
  std::vector<MaintenanceCosts> costs(3, kStudyCosts);
  // Atom placement turns p_bar at the chosen epochs into the worked
  // example's parameters (N = 20 samples, epoch 10).
  auto atoms = [](int hits, int n) {
    std::vector<double> s;
    for (int i = 0; i < n; ++i) s.push_back(i < hits ? 5.0 : 20.0);
    return s;
  };
  rlds.push_back(make_rld(atoms(2, 20), 100));   // p = 0.1
  rlds.push_back(make_rld(atoms(5, 20), 100));   // p = 0.25
  rlds.push_back(make_rld(atoms(16, 20), 100));  // p = 0.8
  const auto params =
      precompute_params(rlds, costs, AmbiguityConfig{0.0}, 5.0, 0.1, 15);

  const std::vector<int> epochs{10, 10, 10};
  auto res = check_z2_probability(epochs, params, 2, 0.1);
  REQUIRE(res.probability == Catch::Approx(0.98).margin(1e-12));
  REQUIRE(res.feasible);

  res = check_z2_probability(epochs, params, 0, 0.1);
  REQUIRE(res.probability == Catch::Approx(0.135).margin(1e-12));
  REQUIRE_FALSE(res.feasible);

  res = check_z2_probability(epochs, params, 3, 0.1);  // cap >= J
  REQUIRE(res.probability == 1.0);
  REQUIRE(res.feasible);
}

TEST_CASE("worst case over the ball equals the closed-form recursion") {
  // Tiny instances: enumerate per-sample perturbations on a grid and verify
  // no placement produces a lower schedule probability than the recursion
  // at the closed-form parameters.
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int J = 3, N = 2, gamma = 1;
    const double delta = 0.5 + u(rng) * 2.0;
    std::vector<std::vector<double>> samples(J);
    std::vector<int> epochs;
    for (int j = 0; j < J; ++j) {
      for (int i = 0; i < N; ++i) samples[j].push_back(u(rng) * 20.0);
      epochs.push_back(1 + static_cast<int>(u(rng) * 15.0));
    }
    // Closed form.
    std::vector<EmpiricalRld> rlds;
    std::vector<MaintenanceCosts> costs(J, kStudyCosts);
    for (int j = 0; j < J; ++j) {
      auto rld = make_rld(samples[static_cast<std::size_t>(j)], 100.0);
      rld.sigma_hat = 1.0;  // radius = delta exactly
      rlds.push_back(rld);
    }
    const auto params =
        precompute_params(rlds, costs, AmbiguityConfig{delta}, 5.0, 0.1, 16);
    const double closed =
        check_z2_probability(epochs, params, gamma, 0.1).probability;

    // Brute force: every atom of every component over a perturbation grid.
    const int G = 5;
    double worst = 1.0;
    std::vector<int> idx(static_cast<std::size_t>(J * N), 0);
    while (true) {
      std::vector<double> ps;
      for (int j = 0; j < J; ++j) {
        int hit = 0;
        for (int i = 0; i < N; ++i) {
          const auto grid = testing::perturbation_grid(
              samples[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
              delta, 100.0, G);
          if (grid[static_cast<std::size_t>(idx[static_cast<std::size_t>(j * N + i)])] <=
              epochs[static_cast<std::size_t>(j)])
            ++hit;
        }
        ps.push_back(static_cast<double>(hit) / N);
      }
      worst = std::min(worst, pbinom_cdf(ps, gamma));
      int pos = 0;
      while (pos < J * N && ++idx[static_cast<std::size_t>(pos)] == G) {
        idx[static_cast<std::size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == J * N) break;
    }
    REQUIRE(closed == Catch::Approx(worst).margin(1e-9));
  }
}

TEST_CASE("parameter matrices round-trip through text") {
  std::vector<EmpiricalRld> rlds{make_rld({5, 9, 30}, 90), make_rld({12, 40}, 90)};
  std::vector<MaintenanceCosts> costs(2, kStudyCosts);
  const auto params =
      precompute_params(rlds, costs, AmbiguityConfig{0.2}, 5.0, 0.1, 12);
  std::stringstream ss;
  write_params(ss, params);
  const auto back = read_params(ss);
  REQUIRE(back.num_components == params.num_components);
  REQUIRE(back.t_max == params.t_max);
  REQUIRE(back.psi == params.psi);
  REQUIRE(back.p_bar == params.p_bar);
  REQUIRE(back.t_star == params.t_star);
}

TEST_CASE("psi floors at the cheaper fixed cost") {
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> samples;
    for (int i = 0; i < 3; ++i) samples.push_back(u(rng) * 50.0);
    const auto rld = make_rld(std::move(samples), 60.0);
    const double delta = u(rng) * 3.0;
    for (int t = 1; t <= 50; t += 7)
      REQUIRE(psi_value(rld, delta, t, kStudyCosts) >=
              std::min(kStudyCosts.c_pr, kStudyCosts.c_co) - 1e-12);
  }
}
