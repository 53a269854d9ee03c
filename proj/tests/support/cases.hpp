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

// Seeded random instance/RLD generators shared by the regression and
// acceptance suites.

#ifndef DRCBM_TESTS_CASES_HPP
#define DRCBM_TESTS_CASES_HPP

#include <random>
#include <vector>

#include "drcbm/dro.hpp"
#include "drcbm/instance.hpp"
#include "drcbm/prognostics.hpp"

namespace drcbm::testing {

struct CaseShape {
  int max_components = 15;
  int max_t = 20;
  int max_samples = 30;
  int min_components = 2;
  bool tight_gamma = true;  // gamma low enough that the failure cap can bind
};

inline ProblemInstance random_instance(std::mt19937_64& rng, const CaseShape& shape) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ProblemInstance ins;
  const int J = shape.min_components +
                static_cast<int>(u(rng) * (shape.max_components - shape.min_components + 1));
  ins.t_max = std::max(4, 4 + static_cast<int>(u(rng) * (shape.max_t - 3)));
  ins.freeze_len = std::max(1, ins.t_max / 2);
  ins.lead_time = 1 + static_cast<int>(u(rng) * 3);
  const int K = 1 + static_cast<int>(u(rng) * std::min(J, 4));
  ins.machine_down_cost.assign(static_cast<std::size_t>(K), 2.0);
  const int L = 1 + static_cast<int>(u(rng) * 2);
  for (int l = 0; l < L; ++l) {
    SpareTypeInfo st;
    st.hold_cost = 0.1;
    st.regular_cost = 1.5;
    st.expedited_cost = 6.0;
    st.initial_stock = static_cast<int>(u(rng) * 2);
    ins.spare_types.push_back(st);
  }
  for (int j = 0; j < J; ++j) {
    ComponentInfo cmp;
    cmp.machine = static_cast<int>(u(rng) * K);
    cmp.spare_type = static_cast<int>(u(rng) * L);
    cmp.costs = {1.3, 0.13, 7.8, 0.78};
    ins.components.push_back(cmp);
  }
  ins.crew_capacity = std::max(2, J / 2 + static_cast<int>(u(rng) * J));
  ins.crew_cost = 40.0 * (0.2 + u(rng));
  ins.fixed_order_cost = 3.0;
  ins.supplier_capacity.assign(static_cast<std::size_t>(ins.t_max),
                               2 + static_cast<int>(u(rng) * 6));
  ins.rho = 2.0 + std::floor(u(rng) * 4.0);
  ins.gamma = shape.tight_gamma ? 1 + static_cast<int>(u(rng) * 2)
                                : J + static_cast<int>(u(rng) * 3);
  ins.epsilon = 0.1;
  ins.beta = 0.1;
  ins.validate();
  return ins;
}

// Remaining-life samples with mass both inside and beyond the horizon so
// that the failure cap and the downtime cutoff both have teeth.
inline std::vector<EmpiricalRld> random_rlds(std::mt19937_64& rng,
                                             const ProblemInstance& ins,
                                             int max_samples = 30) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<EmpiricalRld> rlds;
  for (int j = 0; j < ins.num_components(); ++j) {
    EmpiricalRld rld;
    rld.tau_max = 3.0 * ins.t_max;
    const int n = 4 + static_cast<int>(u(rng) * (max_samples - 3));
    const double center = ins.t_max * (0.3 + 1.0 * u(rng));
    const double spread = ins.t_max * (0.15 + 0.5 * u(rng));
    for (int i = 0; i < n; ++i) {
      const double w = center + spread * (2.0 * u(rng) - 1.0);
      rld.samples.push_back(std::clamp(w, 1.0, rld.tau_max));
    }
    rld.sigma_hat = detail::sample_std(rld.samples);
    rlds.push_back(std::move(rld));
  }
  return rlds;
}

}  // namespace drcbm::testing

#endif  // DRCBM_TESTS_CASES_HPP
