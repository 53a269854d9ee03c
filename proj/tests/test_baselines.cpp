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

#include "drcbm/baselines.hpp"
#include "drcbm/highs_backend.hpp"
#include "support/cases.hpp"
#include "support/toy_oracle.hpp"

using namespace drcbm;

TEST_CASE("SAA is exactly the zero-radius planner") {
  std::mt19937_64 rng(101);
  testing::CaseShape shape;
  shape.max_components = 6;
  shape.max_t = 10;
  const auto ins = testing::random_instance(rng, shape);
  const auto rlds = testing::random_rlds(rng, ins);
  milp::HighsSolver solver;
  const auto saa = run_saa(ins, rlds, {}, solver);
  const auto drcc0 = run_drcc(ins, rlds, 0.0, {}, solver);
  REQUIRE(saa.params.psi == drcc0.params.psi);      // bitwise
  REQUIRE(saa.params.p_bar == drcc0.params.p_bar);  // bitwise
  REQUIRE(saa.params.t_star == drcc0.params.t_star);
  REQUIRE(saa.solution.status == drcc0.solution.status);
  REQUIRE(saa.solution.objective == drcc0.solution.objective);

  // Zero-radius weights are plain sample averages of the repair cost.
  for (int j = 0; j < ins.num_components(); ++j)
    for (int t = 1; t <= ins.t_max; ++t) {
      double mean = 0.0;
      for (double w : rlds[static_cast<std::size_t>(j)].samples)
        mean += alpha_cost(w, t, ins.components[static_cast<std::size_t>(j)].costs);
      mean /= static_cast<double>(rlds[static_cast<std::size_t>(j)].samples.size());
      REQUIRE(saa.params.psi_at(j, t) == mean);
    }
}

TEST_CASE("SAA optimum matches the exhaustive toy oracle") {
  std::mt19937_64 rng(103);
  testing::CaseShape shape;
  shape.min_components = 2;
  shape.max_components = 2;
  shape.max_t = 6;
  const auto ins = testing::random_instance(rng, shape);
  const auto rlds = testing::random_rlds(rng, ins);
  milp::HighsSolver solver;
  const auto saa = run_saa(ins, rlds, {}, solver);
  REQUIRE(saa.solution.status == milp::Status::Optimal);
  REQUIRE(saa.solution.objective ==
          Catch::Approx(testing::toy_optimum(ins, saa.params, Z2Mode::Exact))
              .margin(1e-6));
}

TEST_CASE("robust planner repairs before the worst-case failure") {
  ProblemInstance ins;
  ins.t_max = 20;
  ins.freeze_len = 5;
  ins.lead_time = 1;
  ins.machine_down_cost = {2.0};
  SpareTypeInfo st;
  st.initial_stock = 1;
  ins.spare_types = {st};
  ComponentInfo cmp;
  cmp.costs = {1.3, 0.13, 7.8, 0.78};
  ins.components = {cmp};
  ins.crew_capacity = 2;
  ins.crew_cost = 1.0;
  ins.fixed_order_cost = 0.0;
  ins.supplier_capacity.assign(20, 5);
  ins.rho = 5;
  ins.gamma = 1;
  ins.epsilon = 0.1;
  ins.beta = 0.1;
  ins.validate();

  EmpiricalRld rld;
  rld.samples = {10, 12};
  rld.sigma_hat = detail::sample_std(rld.samples);
  rld.tau_max = 60;

  milp::HighsSolver solver;
  const auto rob = run_robust(ins, {rld}, 0.0, solver);
  REQUIRE(rob.solution.status == milp::Status::Optimal);
  // Worst case is 10; the repair lands at or before it (cheap preventive
  // beats corrective), and never beyond the downtime cutoff 10 + rho.
  REQUIRE(rob.solution.repair_epoch[0] <= 10);
  REQUIRE(rob.params.t_star[0] == 16);

  // An impossible cutoff is reported against the component.
  ins.rho = 0;
  EmpiricalRld dead;
  dead.samples = {0.0};
  dead.sigma_hat = 0.0;
  dead.tau_max = 60;
  REQUIRE_THROWS_AS(run_robust(ins, {dead}, 0.0, solver), InfeasibleModelError);
}

TEST_CASE("degenerate single-sample distribution collapses all planners") {
  ProblemInstance ins;
  ins.t_max = 25;
  ins.freeze_len = 5;
  ins.lead_time = 2;
  ins.machine_down_cost = {2.0};
  SpareTypeInfo st;
  st.initial_stock = 1;
  ins.spare_types = {st};
  ComponentInfo cmp;
  cmp.costs = {1.3, 0.13, 7.8, 0.78};
  ins.components = {cmp};
  ins.crew_capacity = 2;
  ins.crew_cost = 1.0;
  ins.fixed_order_cost = 0.0;
  ins.supplier_capacity.assign(25, 5);
  ins.rho = 5;
  ins.gamma = 0;
  ins.epsilon = 0.1;
  ins.beta = 0.1;
  ins.validate();

  EmpiricalRld rld;
  rld.samples.assign(8, 15.0);  // all mass at one point
  rld.sigma_hat = 0.0;
  rld.tau_max = 75;

  milp::HighsSolver solver;
  const auto saa = run_saa(ins, {rld}, {}, solver);
  const auto drcc = run_drcc(ins, {rld}, 0.3, {}, solver);
  const auto rob = run_robust(ins, {rld}, 0.3, solver);
  REQUIRE(saa.solution.repair_epoch[0] == drcc.solution.repair_epoch[0]);
  REQUIRE(saa.solution.repair_epoch[0] == rob.solution.repair_epoch[0]);
  REQUIRE(saa.solution.objective == Catch::Approx(rob.solution.objective));
}

TEST_CASE("radius ordering of planner objectives on regression seeds") {
  // Directional check on shipped seeds; the spec's own caveat applies: this
  // is a sampled regularity, not a theorem.
  std::mt19937_64 rng(107);
  milp::HighsSolver solver;
  int compared = 0;
  for (int rep = 0; rep < 8 && compared < 4; ++rep) {
    testing::CaseShape shape;
    shape.max_components = 6;
    shape.max_t = 12;
    const auto ins = testing::random_instance(rng, shape);
    const auto rlds = testing::random_rlds(rng, ins);
    PlanOutcome saa, drcc;
    try {
      saa = run_saa(ins, rlds, {}, solver);
      drcc = run_drcc(ins, rlds, 0.2, {}, solver);
    } catch (const InfeasibleModelError&) {
      continue;
    }
    if (!(saa.solution.status == milp::Status::Optimal &&
          drcc.solution.status == milp::Status::Optimal))
      continue;
    REQUIRE(drcc.solution.objective >= saa.solution.objective - 1e-6);
    ++compared;
  }
  REQUIRE(compared >= 4);
}

TEST_CASE("sequential equals joint when provisioning is free") {
  std::mt19937_64 rng(109);
  testing::CaseShape shape;
  shape.min_components = 3;
  shape.max_components = 5;
  shape.max_t = 10;
  auto ins = testing::random_instance(rng, shape);
  for (auto& st : ins.spare_types) {
    st.hold_cost = 0.0;
    st.regular_cost = 0.0;
    st.expedited_cost = 0.0;
  }
  ins.fixed_order_cost = 0.0;
  const auto rlds = testing::random_rlds(rng, ins);
  milp::HighsSolver solver;
  const auto joint = run_drcc(ins, rlds, 0.0, {}, solver);
  const auto seq = run_sequential(ins, rlds, 0.0, {}, solver);
  REQUIRE(joint.solution.status == milp::Status::Optimal);
  REQUIRE(seq.has_solution());
  REQUIRE(seq.combined_cost == Catch::Approx(joint.solution.objective).margin(1e-6));
}

TEST_CASE("sequential cost dominates joint cost") {
  std::mt19937_64 rng(113);
  milp::HighsSolver solver;
  int compared = 0;
  for (int rep = 0; rep < 10 && compared < 5; ++rep) {
    testing::CaseShape shape;
    shape.max_components = 6;
    shape.max_t = 12;
    const auto ins = testing::random_instance(rng, shape);
    const auto rlds = testing::random_rlds(rng, ins);
    PlanOutcome joint, seq;
    try {
      joint = run_drcc(ins, rlds, 0.0, {}, solver);
      seq = run_sequential(ins, rlds, 0.0, {}, solver);
    } catch (const InfeasibleModelError&) {
      continue;
    }
    if (joint.solution.status != milp::Status::Optimal || !seq.has_solution())
      continue;
    // The joint feasible set contains the sequential composite.
    REQUIRE(seq.combined_cost >= joint.solution.objective - 1e-6);
    ++compared;
  }
  REQUIRE(compared >= 5);
}

TEST_CASE("tight supply pushes the sequential planner into expedited orders") {
  std::mt19937_64 rng(127);
  testing::CaseShape shape;
  shape.min_components = 4;
  shape.max_components = 6;
  shape.max_t = 12;
  auto ins = testing::random_instance(rng, shape);
  ins.lead_time = ins.t_max + 1;  // regular orders can never arrive
  for (auto& st : ins.spare_types) st.initial_stock = 0;
  ins.in_flight.clear();
  const auto rlds = testing::random_rlds(rng, ins);
  milp::HighsSolver solver;
  const auto joint = run_drcc(ins, rlds, 0.0, {}, solver);
  const auto seq = run_sequential(ins, rlds, 0.0, {}, solver);
  REQUIRE(joint.solution.status == milp::Status::Optimal);
  REQUIRE(seq.has_solution());
  auto count = [](const std::vector<std::vector<int>>& grid) {
    int n = 0;
    for (const auto& row : grid)
      for (int v : row) n += v;
    return n;
  };
  const int joint_exp = count(joint.solution.expedited_orders);
  const int seq_exp = count(seq.solution.expedited_orders);
  REQUIRE(seq_exp >= joint_exp);
  REQUIRE(seq_exp == ins.num_components());  // everything expedited
}

TEST_CASE("policy labels parse and print") {
  REQUIRE(PolicySpec::parse("saa", 0.5).label() == "SAA");
  REQUIRE(PolicySpec::parse("drcc", 0.2).label() == "DRCC:0.2");
  REQUIRE(PolicySpec::parse("robust", 0.0).label() == "Robust");
  REQUIRE(PolicySpec::parse("sequential", 0.0).label() == "Sequential");
  REQUIRE_THROWS_AS(PolicySpec::parse("mdp", 0.0), Error);
}
