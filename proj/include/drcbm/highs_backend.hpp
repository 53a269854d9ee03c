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

#ifndef DRCBM_HIGHS_BACKEND_HPP
#define DRCBM_HIGHS_BACKEND_HPP

#include <memory>
#include <string>

#include "Highs.h"
#include "drcbm/milp.hpp"

namespace drcbm::milp {

class HighsSolver final : public Solver {
 public:
  SolveResult solve(const Model& model, const SolveOptions& opts) override {
    HighsModel hm;
    auto& lp = hm.lp_;
    lp.num_col_ = model.num_vars();
    lp.num_row_ = model.num_rows();
    lp.sense_ = ObjSense::kMinimize;
    lp.offset_ = model.obj_offset();
    lp.col_cost_.reserve(lp.num_col_);
    lp.col_lower_.reserve(lp.num_col_);
    lp.col_upper_.reserve(lp.num_col_);
    bool any_integral = false;
    for (int i = 0; i < model.num_vars(); ++i) {
      lp.col_cost_.push_back(model.obj_coef(i));
      lp.col_lower_.push_back(model.var_lb(i));
      lp.col_upper_.push_back(model.var_ub(i));
      if (model.var_type(i) != VarType::Continuous) any_integral = true;
    }
    if (any_integral) {
      lp.integrality_.reserve(lp.num_col_);
      for (int i = 0; i < model.num_vars(); ++i)
        lp.integrality_.push_back(model.var_type(i) == VarType::Continuous
                                      ? HighsVarType::kContinuous
                                      : HighsVarType::kInteger);
    }
    lp.a_matrix_.format_ = MatrixFormat::kRowwise;
    lp.a_matrix_.start_.assign(1, 0);
    for (int r = 0; r < model.num_rows(); ++r) {
      lp.row_lower_.push_back(model.row_lb(r));
      lp.row_upper_.push_back(model.row_ub(r));
      for (const auto& [col, coef] : model.row(r)) {
        lp.a_matrix_.index_.push_back(col);
        lp.a_matrix_.value_.push_back(coef);
      }
      lp.a_matrix_.start_.push_back(
          static_cast<HighsInt>(lp.a_matrix_.index_.size()));
    }

    Highs highs;
    highs.setOptionValue("output_flag", opts.verbose);
    highs.setOptionValue("time_limit", opts.time_limit_sec);
    highs.setOptionValue("mip_rel_gap", opts.rel_gap);
    highs.setOptionValue("threads", 1);
    if (opts.seed) highs.setOptionValue("random_seed", *opts.seed);

    SolveResult res;
    if (highs.passModel(hm) != HighsStatus::kOk) return res;
    if (highs.run() == HighsStatus::kError) return res;

    const HighsModelStatus st = highs.getModelStatus();
    res.runtime_sec = highs.getRunTime();
    const bool have_primal =
        highs.getSolution().value_valid &&
        highs.getInfo().primal_solution_status == kSolutionStatusFeasible;
    switch (st) {
      case HighsModelStatus::kOptimal:
        res.status = Status::Optimal;
        break;
      case HighsModelStatus::kInfeasible:
        res.status = Status::Infeasible;
        break;
      case HighsModelStatus::kTimeLimit:
        res.status = have_primal ? Status::FeasibleGap : Status::TimeLimit;
        break;
      case HighsModelStatus::kObjectiveTarget:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt:
        res.status = have_primal ? Status::FeasibleGap : Status::Error;
        break;
      default:
        res.status = Status::Error;
        break;
    }
    if (res.has_solution() && have_primal) {
      res.objective = highs.getObjectiveValue();
      res.values = highs.getSolution().col_value;
      res.gap = highs.getInfo().mip_gap;
      if (!any_integral) res.gap = 0.0;
      // Optimal within tolerance but flagged by a nonzero residual gap.
      if (res.status == Status::Optimal && !(res.gap <= opts.rel_gap) &&
          any_integral && std::isfinite(res.gap))
        res.status = Status::FeasibleGap;
    } else if (res.status == Status::Optimal) {
      res.status = Status::Error;  // optimal without a usable primal
    }
    return res;
  }

  std::string name() const override { return "highs"; }
};

inline std::unique_ptr<Solver> make_default_solver() {
  return std::make_unique<HighsSolver>();
}

}  // namespace drcbm::milp

#endif  // DRCBM_HIGHS_BACKEND_HPP
