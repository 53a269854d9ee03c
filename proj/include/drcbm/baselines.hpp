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

#ifndef DRCBM_BASELINES_HPP
#define DRCBM_BASELINES_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "drcbm/dro.hpp"
#include "drcbm/error.hpp"
#include "drcbm/instance.hpp"
#include "drcbm/milp.hpp"
#include "drcbm/model.hpp"

namespace drcbm {

// Planner family. SAA is the ambiguity-free special case of DRCC; the
// robust planner fixes every remaining life at its ball-worst value; the
// sequential planner decouples scheduling from provisioning.
enum class PolicyKind { Saa, Drcc, Robust, Sequential };

struct PolicySpec {
  PolicyKind kind = PolicyKind::Saa;
  double delta = 0.0;  // normalized radius; Saa pins it to 0

  double effective_delta() const { return kind == PolicyKind::Saa ? 0.0 : delta; }

  static PolicySpec parse(const std::string& name, double delta) {
    if (name == "saa") return {PolicyKind::Saa, 0.0};
    if (name == "drcc") return {PolicyKind::Drcc, delta};
    if (name == "robust") return {PolicyKind::Robust, delta};
    if (name == "sequential") return {PolicyKind::Sequential, delta};
    throw Error("unknown policy '" + name + "'");
  }

  std::string label() const {
    switch (kind) {
      case PolicyKind::Saa: return "SAA";
      case PolicyKind::Drcc: return "DRCC:" + format_delta(delta);
      case PolicyKind::Robust: return "Robust";
      case PolicyKind::Sequential: return "Sequential";
    }
    return "?";
  }

 private:
  static std::string format_delta(double d) {
    std::string s = std::to_string(d);
    while (s.size() > 1 && (s.back() == '0' || s.back() == '.')) {
      const bool dot = s.back() == '.';
      s.pop_back();
      if (dot) break;
    }
    return s;
  }
};

inline std::vector<MaintenanceCosts> component_costs(const ProblemInstance& ins) {
  std::vector<MaintenanceCosts> costs;
  costs.reserve(ins.components.size());
  for (const auto& cmp : ins.components) costs.push_back(cmp.costs);
  return costs;
}

inline PrecomputedParams drcc_params(const ProblemInstance& ins,
                                     const std::vector<EmpiricalRld>& rlds,
                                     double delta) {
  return precompute_params(rlds, component_costs(ins), AmbiguityConfig{delta},
                           ins.rho, ins.epsilon, ins.t_max);
}

// One planning run: the parameters it used, the model, and the solution.
struct PlanOutcome {
  PrecomputedParams params;
  BuiltModel built;
  Solution solution;
  // For the sequential pipeline: the provisioning stage pieces.
  Solution inventory_solution;
  bool sequential = false;
  double combined_cost = std::numeric_limits<double>::quiet_NaN();

  bool has_solution() const { return solution.has_solution(); }
  double cost() const { return sequential ? combined_cost : solution.objective; }
};

inline PlanOutcome run_drcc(const ProblemInstance& ins,
                            const std::vector<EmpiricalRld>& rlds, double delta,
                            const Z2Config& z2, milp::Solver& solver,
                            const milp::SolveOptions& opts = {}) {
  PlanOutcome out;
  out.params = drcc_params(ins, rlds, delta);
  BuildOptions bo;
  bo.z2 = z2;
  out.built = build_milp(ins, out.params, bo);
  out.solution = solve_model(out.built, solver, opts);
  return out;
}

inline PlanOutcome run_saa(const ProblemInstance& ins,
                           const std::vector<EmpiricalRld>& rlds,
                           const Z2Config& z2, milp::Solver& solver,
                           const milp::SolveOptions& opts = {}) {
  return run_drcc(ins, rlds, 0.0, z2, solver, opts);
}

// Deterministic worst-case planner: every remaining life is pinned at the
// lowest point of its ambiguity ball, repair weights become plain repair
// costs at that point, and the downtime rule turns into the hard cutoff
// t <= wc + rho. The failure-count constraint is dropped: under the fixed
// worst-case lifetimes the plan itself decides every failure.
inline PlanOutcome run_robust(const ProblemInstance& ins,
                              const std::vector<EmpiricalRld>& rlds,
                              double delta, milp::Solver& solver,
                              const milp::SolveOptions& opts = {}) {
  DRCBM_REQUIRE(static_cast<int>(rlds.size()) == ins.num_components(),
                "one remaining-life distribution per component required");
  PlanOutcome out;
  auto& params = out.params;
  params.num_components = ins.num_components();
  params.t_max = ins.t_max;
  params.psi.resize(rlds.size() * static_cast<std::size_t>(ins.t_max));
  params.p_bar.assign(rlds.size() * static_cast<std::size_t>(ins.t_max), 0.0);
  params.t_star.resize(rlds.size());
  const AmbiguityConfig ambiguity{delta};
  for (int j = 0; j < ins.num_components(); ++j) {
    const auto& rld = rlds[static_cast<std::size_t>(j)];
    DRCBM_REQUIRE(!rld.samples.empty(), "empty remaining-life sample set");
    const double radius = ambiguity.radius_for(rld);
    const double wc = std::max(
        *std::min_element(rld.samples.begin(), rld.samples.end()) - radius, 0.0);
    const int last_ok = static_cast<int>(std::floor(wc + ins.rho));
    if (last_ok < 1)
      throw InfeasibleModelError("component " + std::to_string(j) +
                                     " cannot meet the downtime cap even at epoch 1 "
                                     "under its worst-case lifetime",
                                 j);
    params.t_star[static_cast<std::size_t>(j)] = std::min(last_ok + 1, ins.t_max + 1);
    for (int t = 1; t <= ins.t_max; ++t)
      params.psi[params.idx(j, t)] =
          alpha_cost(wc, t, ins.components[static_cast<std::size_t>(j)].costs);
  }
  BuildOptions bo;
  bo.z2.mode = Z2Mode::Off;
  out.built = build_milp(ins, params, bo);
  out.solution = solve_model(out.built, solver, opts);
  return out;
}

// Two-stage decoupled planner: stage 1 schedules repairs with all
// provisioning variables and constraints removed, stage 2 covers the
// resulting demand at minimal inventory cost. Combined cost is measured on
// the same ledger as the joint model.
inline PlanOutcome run_sequential(const ProblemInstance& ins,
                                  const std::vector<EmpiricalRld>& rlds,
                                  double delta, const Z2Config& z2,
                                  milp::Solver& solver,
                                  const milp::SolveOptions& opts = {}) {
  PlanOutcome out;
  out.sequential = true;
  out.params = drcc_params(ins, rlds, delta);
  BuildOptions stage1;
  stage1.z2 = z2;
  stage1.include_inventory = false;
  out.built = build_milp(ins, out.params, stage1);
  out.solution = solve_model(out.built, solver, opts);
  if (!out.solution.has_solution()) return out;

  const auto stage2 = build_inventory_milp(ins, out.solution.repair_epoch);
  out.inventory_solution = solve_model(stage2, solver, opts);
  // Expedited orders have no capacity or lead time, so a demand plan can
  // always be covered.
  DRCBM_REQUIRE(out.inventory_solution.has_solution(),
                "provisioning stage unexpectedly failed");
  out.combined_cost = out.solution.objective + out.inventory_solution.objective;
  // Merge the provisioning decisions into the reported solution so callers
  // see one plan.
  out.solution.order_flag = out.inventory_solution.order_flag;
  out.solution.stock = out.inventory_solution.stock;
  out.solution.regular_orders = out.inventory_solution.regular_orders;
  out.solution.expedited_orders = out.inventory_solution.expedited_orders;
  return out;
}

// Facade used by the rolling-horizon loop.
inline PlanOutcome run_policy(const PolicySpec& policy, const ProblemInstance& ins,
                              const std::vector<EmpiricalRld>& rlds,
                              const Z2Config& z2, milp::Solver& solver,
                              const milp::SolveOptions& opts = {}) {
  switch (policy.kind) {
    case PolicyKind::Saa:
      return run_saa(ins, rlds, z2, solver, opts);
    case PolicyKind::Drcc:
      return run_drcc(ins, rlds, policy.delta, z2, solver, opts);
    case PolicyKind::Robust:
      return run_robust(ins, rlds, policy.delta, solver, opts);
    case PolicyKind::Sequential:
      return run_sequential(ins, rlds, policy.delta, z2, solver, opts);
  }
  throw Error("unreachable policy kind");
}

}  // namespace drcbm

#endif  // DRCBM_BASELINES_HPP
