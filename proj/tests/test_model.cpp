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

#include "drcbm/highs_backend.hpp"
#include "drcbm/model.hpp"
#include "support/cases.hpp"
#include "support/toy_oracle.hpp"

using namespace drcbm;

namespace {

// One machine, one component, three epochs, hand-set weights.
struct ThreeEpochToy {
  ProblemInstance ins;
  PrecomputedParams params;

  ThreeEpochToy() {
    ins.t_max = 3;
    ins.freeze_len = 1;
    ins.lead_time = 1;
    ins.machine_down_cost = {2.0};
    SpareTypeInfo st;
    st.initial_stock = 1;  // all inventory costs zero
    ins.spare_types = {st};
    ComponentInfo cmp;
    cmp.costs = {1.0, 0.1, 6.0, 0.6};
    ins.components = {cmp};
    ins.crew_capacity = 1;
    ins.crew_cost = 40.0;
    ins.fixed_order_cost = 0.0;
    ins.supplier_capacity = {5, 5, 5};
    ins.rho = 5;
    ins.gamma = 1;  // cap >= J: failure count never binds
    ins.epsilon = 0.1;
    ins.beta = 0.1;
    ins.validate();

    params.num_components = 1;
    params.t_max = 3;
    params.psi = {5.0, 1.0, 9.0};
    params.p_bar = {0.0, 0.0, 0.2};
    params.t_star = {4};
  }
};

PrecomputedParams params_for(const ProblemInstance& ins,
                             const std::vector<EmpiricalRld>& rlds,
                             double delta) {
  std::vector<MaintenanceCosts> costs;
  for (const auto& cmp : ins.components) costs.push_back(cmp.costs);
  return precompute_params(rlds, costs, AmbiguityConfig{delta}, ins.rho,
                           ins.epsilon, ins.t_max);
}

}  // namespace

TEST_CASE("three-epoch toy solves to the enumerated optimum") {
  ThreeEpochToy toy;
  BuildOptions opts;
  opts.z2.mode = Z2Mode::Off;
  auto bm = build_milp(toy.ins, toy.params, opts);
  milp::HighsSolver solver;
  const auto sol = solve_model(bm, solver);
  REQUIRE(sol.status == milp::Status::Optimal);
  REQUIRE(sol.repair_epoch[0] == 2);
  // psi + one shutdown + one crew deployment.
  REQUIRE(sol.objective == Catch::Approx(1.0 + 2.0 + 40.0));
  const auto rep = verify_solution(toy.ins, toy.params, bm, sol);
  REQUIRE(rep.ok());

  // Same optimum from the exhaustive oracle.
  REQUIRE(testing::toy_optimum(toy.ins, toy.params, Z2Mode::Off) ==
          Catch::Approx(sol.objective));
}

TEST_CASE("failure cap at or above component count is non-binding") {
  ThreeEpochToy toy;
  milp::HighsSolver solver;
  BuildOptions off;
  off.z2.mode = Z2Mode::Off;
  BuildOptions exact;
  exact.z2.mode = Z2Mode::Exact;
  const auto sol_off = solve_model(build_milp(toy.ins, toy.params, off), solver);
  const auto sol_exact =
      solve_model(build_milp(toy.ins, toy.params, exact), solver);
  REQUIRE(sol_exact.status == milp::Status::Optimal);
  REQUIRE(sol_exact.objective == Catch::Approx(sol_off.objective));
}

TEST_CASE("zero supplier capacity forces expedited orders") {
  std::mt19937_64 rng(5);
  testing::CaseShape shape;
  shape.min_components = 2;
  shape.max_components = 2;
  shape.max_t = 8;
  auto ins = testing::random_instance(rng, shape);
  ins.supplier_capacity.assign(static_cast<std::size_t>(ins.t_max), 0);
  for (auto& st : ins.spare_types) st.initial_stock = 0;
  ins.in_flight.clear();
  const auto rlds = testing::random_rlds(rng, ins);
  const auto params = params_for(ins, rlds, 0.0);
  BuildOptions opts;
  opts.z2.mode = Z2Mode::Off;
  milp::HighsSolver solver;
  const auto sol = solve_model(build_milp(ins, params, opts), solver);
  REQUIRE(sol.status == milp::Status::Optimal);
  int expedited = 0, regular = 0;
  for (const auto& row : sol.expedited_orders)
    for (int v : row) expedited += v;
  for (const auto& row : sol.regular_orders)
    for (int v : row) regular += v;
  REQUIRE(expedited == ins.num_components());
  REQUIRE(regular == 0);
  double expected_exp_cost = 0.0;
  for (const auto& cmp : ins.components)
    expected_exp_cost +=
        ins.spare_types[static_cast<std::size_t>(cmp.spare_type)].expedited_cost;
  // The objective carries the full expedited bill.
  double maint = 0.0;
  for (int j = 0; j < ins.num_components(); ++j)
    maint += params.psi_at(j, sol.repair_epoch[static_cast<std::size_t>(j)]);
  REQUIRE(sol.objective >= maint + expected_exp_cost - 1e-6);
}

TEST_CASE("zero crew capacity is infeasible") {
  ThreeEpochToy toy;
  toy.ins.crew_capacity = 0;
  BuildOptions opts;
  opts.z2.mode = Z2Mode::Off;
  milp::HighsSolver solver;
  const auto sol = solve_model(build_milp(toy.ins, toy.params, opts), solver);
  REQUIRE(sol.status == milp::Status::Infeasible);
}

TEST_CASE("blocked first epoch raises a named infeasibility") {
  ThreeEpochToy toy;
  toy.params.t_star = {1};
  BuildOptions opts;
  try {
    build_milp(toy.ins, toy.params, opts);
    FAIL("expected InfeasibleModelError");
  } catch (const InfeasibleModelError& e) {
    REQUIRE(e.component() == 0);
  }
}

TEST_CASE("repeat solves return the same objective") {
  std::mt19937_64 rng(17);
  testing::CaseShape shape;
  shape.max_components = 6;
  shape.max_t = 10;
  const auto ins = testing::random_instance(rng, shape);
  const auto rlds = testing::random_rlds(rng, ins);
  const auto params = params_for(ins, rlds, 0.1);
  milp::HighsSolver solver;
  BuildOptions opts;
  const auto bm = build_milp(ins, params, opts);
  const auto a = solve_model(bm, solver);
  const auto b = solve_model(bm, solver);
  REQUIRE(a.status == b.status);
  if (a.has_solution()) REQUIRE(a.objective == b.objective);
}

TEST_CASE("exact mode ties the solver CDF value to the recursion") {
  std::mt19937_64 rng(23);
  milp::HighsSolver solver;
  int solved = 0;
  for (int rep = 0; rep < 12; ++rep) {
    testing::CaseShape shape;
    shape.max_components = 8;
    shape.max_t = 12;
    const auto ins = testing::random_instance(rng, shape);
    const auto rlds = testing::random_rlds(rng, ins);
    const auto params = params_for(ins, rlds, 0.1);
    BuildOptions opts;
    BuiltModel bm;
    try {
      bm = build_milp(ins, params, opts);
    } catch (const InfeasibleModelError&) {
      continue;
    }
    const auto sol = solve_model(bm, solver);
    if (sol.status != milp::Status::Optimal) continue;
    ++solved;
    const auto repv = verify_solution(ins, params, bm, sol);
    INFO("violations: " << (repv.violations.empty() ? "none" : repv.violations[0]));
    REQUIRE(repv.ok());
    if (bm.z2_exact_block) {
      REQUIRE(std::fabs(repv.a_solver - repv.a_recursion) <= 1e-6);
      REQUIRE(repv.a_recursion >= 1.0 - ins.beta - 1e-6);
    }
  }
  REQUIRE(solved >= 6);
}

TEST_CASE("component order in the recursion does not matter") {
  std::mt19937_64 rng(29);
  testing::CaseShape shape;
  shape.max_components = 6;
  shape.min_components = 4;
  shape.max_t = 10;
  const auto ins = testing::random_instance(rng, shape);
  const auto rlds = testing::random_rlds(rng, ins);
  const auto params = params_for(ins, rlds, 0.2);

  // Permute component indices and rebuild everything in the new order.
  std::vector<int> perm(static_cast<std::size_t>(ins.num_components()));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  ProblemInstance pins = ins;
  std::vector<EmpiricalRld> prlds(rlds.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    pins.components[i] = ins.components[static_cast<std::size_t>(perm[i])];
    prlds[i] = rlds[static_cast<std::size_t>(perm[i])];
  }
  const auto pparams = params_for(pins, prlds, 0.2);

  milp::HighsSolver solver;
  BuildOptions opts;
  const auto sol = solve_model(build_milp(ins, params, opts), solver);
  const auto psol = solve_model(build_milp(pins, pparams, opts), solver);
  REQUIRE(sol.status == milp::Status::Optimal);
  REQUIRE(psol.status == milp::Status::Optimal);
  REQUIRE(sol.objective == Catch::Approx(psol.objective).margin(1e-5));
}

TEST_CASE("dropping the failure cap never raises the optimum") {
  std::mt19937_64 rng(31);
  milp::HighsSolver solver;
  for (int rep = 0; rep < 6; ++rep) {
    testing::CaseShape shape;
    shape.max_components = 7;
    shape.max_t = 10;
    const auto ins = testing::random_instance(rng, shape);
    const auto rlds = testing::random_rlds(rng, ins);
    const auto params = params_for(ins, rlds, 0.1);
    BuildOptions exact, off;
    off.z2.mode = Z2Mode::Off;
    const auto se = solve_model(build_milp(ins, params, exact), solver);
    const auto so = solve_model(build_milp(ins, params, off), solver);
    REQUIRE(so.status == milp::Status::Optimal);
    if (se.status == milp::Status::Optimal)
      REQUIRE(so.objective <= se.objective + 1e-6);
  }
}

TEST_CASE("verification flags a missing repair") {
  std::mt19937_64 rng(37);
  testing::CaseShape shape;
  shape.min_components = 2;
  shape.max_components = 2;
  shape.max_t = 6;
  const auto ins = testing::random_instance(rng, shape);
  const auto rlds = testing::random_rlds(rng, ins);
  const auto params = params_for(ins, rlds, 0.0);
  BuildOptions opts;
  opts.z2.mode = Z2Mode::Off;
  opts.include_inventory = false;
  milp::HighsSolver solver;
  const auto bm = build_milp(ins, params, opts);
  auto sol = solve_model(bm, solver);
  REQUIRE(sol.status == milp::Status::Optimal);
  REQUIRE(verify_solution(ins, params, bm, sol).ok());

  // Drop one repair and keep the ledger consistent: exactly the
  // one-repair-per-component rule should fire.
  sol.objective -= params.psi_at(0, sol.repair_epoch[0]);
  sol.repair_epoch[0] = -1;
  const auto repv = verify_solution(ins, params, bm, sol);
  REQUIRE(repv.violations.size() == 1);
  REQUIRE(repv.violations[0].find("no repair epoch") != std::string::npos);
}

TEST_CASE("sample-based mode is deterministic per seed and verifiable") {
  std::mt19937_64 rng(41);
  testing::CaseShape shape;
  shape.max_components = 8;
  shape.max_t = 12;
  const auto ins = testing::random_instance(rng, shape);
  const auto rlds = testing::random_rlds(rng, ins);
  const auto params = params_for(ins, rlds, 0.1);
  BuildOptions opts;
  opts.z2.mode = Z2Mode::SampleBased;
  opts.z2.sample_count = 60;
  opts.z2.seed = 99;
  milp::HighsSolver solver;
  const auto bm1 = build_milp(ins, params, opts);
  const auto bm2 = build_milp(ins, params, opts);
  const auto s1 = solve_model(bm1, solver);
  const auto s2 = solve_model(bm2, solver);
  REQUIRE(s1.status == milp::Status::Optimal);
  REQUIRE(s1.objective == Catch::Approx(s2.objective));
  const auto repv = verify_solution(ins, params, bm1, s1);
  REQUIRE(repv.ok());  // deterministic rows hold even if exact-infeasible
  REQUIRE(repv.z2_checked);

  opts.z2.sample_count = 0;
  REQUIRE_THROWS_AS(build_milp(ins, params, opts), Error);
}

TEST_CASE("toy optima match exhaustive enumeration with inventory") {
  std::mt19937_64 rng(43);
  milp::HighsSolver solver;
  int checked = 0;
  for (int rep = 0; rep < 12; ++rep) {
    testing::CaseShape shape;
    shape.min_components = 1;
    shape.max_components = 2;
    shape.max_t = 6;
    auto ins = testing::random_instance(rng, shape);
    ins.lead_time = 1 + static_cast<int>(rep % 2);
    if (rep % 3 == 0 && !ins.spare_types.empty())
      ins.in_flight.push_back({0, 1, 1});
    const auto rlds = testing::random_rlds(rng, ins);
    const auto params = params_for(ins, rlds, 0.1);
    BuildOptions opts;
    BuiltModel bm;
    try {
      bm = build_milp(ins, params, opts);
    } catch (const InfeasibleModelError&) {
      continue;
    }
    const auto sol = solve_model(bm, solver);
    const double oracle = testing::toy_optimum(ins, params, Z2Mode::Exact);
    if (sol.status == milp::Status::Infeasible) {
      REQUIRE(std::isinf(oracle));
      continue;
    }
    REQUIRE(sol.status == milp::Status::Optimal);
    REQUIRE(sol.objective == Catch::Approx(oracle).margin(1e-6));
    ++checked;
  }
  REQUIRE(checked >= 8);
}

TEST_CASE("lp export emits a consistent model") {
  ThreeEpochToy toy;
  BuildOptions opts;
  const auto bm = build_milp(toy.ins, toy.params, opts);
  std::stringstream ss;
  bm.model.write_lp(ss);
  const std::string text = ss.str();
  REQUIRE(text.find("Minimize") != std::string::npos);
  REQUIRE(text.find("Subject To") != std::string::npos);
  REQUIRE(text.find("Binaries") != std::string::npos);
  REQUIRE(text.find("x_0_2") != std::string::npos);
  REQUIRE(text.find("End") != std::string::npos);
}

TEST_CASE("inventory-only model serves a fixed schedule") {
  std::mt19937_64 rng(47);
  testing::CaseShape shape;
  shape.min_components = 3;
  shape.max_components = 5;
  shape.max_t = 10;
  const auto ins = testing::random_instance(rng, shape);
  std::vector<int> schedule;
  std::uniform_int_distribution<int> pick(1, ins.t_max);
  for (int j = 0; j < ins.num_components(); ++j) schedule.push_back(pick(rng));
  const auto bm = build_inventory_milp(ins, schedule);
  milp::HighsSolver solver;
  const auto sol = solve_model(bm, solver);
  // Expedited orders guarantee feasibility for any demand pattern.
  REQUIRE(sol.status == milp::Status::Optimal);
  for (const auto& row : sol.stock)
    for (int v : row) REQUIRE(v >= 0);
}
