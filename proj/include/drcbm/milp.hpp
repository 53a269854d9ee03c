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

#ifndef DRCBM_MILP_HPP
#define DRCBM_MILP_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "drcbm/error.hpp"

namespace drcbm::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType { Continuous, Integer, Binary };

enum class Status { Optimal, FeasibleGap, Infeasible, TimeLimit, Error };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::FeasibleGap: return "feasible-gap";
    case Status::Infeasible: return "infeasible";
    case Status::TimeLimit: return "time-limit";
    default: return "error";
  }
}

// Backend-independent model storage: columns with bounds and type, ranged
// rows lb <= a'x <= ub, and a linear objective (minimization).
class Model {
 public:
  int add_var(double lb, double ub, VarType type, std::string name) {
    lb_.push_back(lb);
    ub_.push_back(type == VarType::Binary ? std::min(ub, 1.0) : ub);
    if (type == VarType::Binary) lb_.back() = std::max(lb, 0.0);
    type_.push_back(type);
    obj_.push_back(0.0);
    names_.push_back(std::move(name));
    return static_cast<int>(lb_.size()) - 1;
  }

  void add_row(double lb, double ub,
               std::vector<std::pair<int, double>> terms,
               std::string name = {}) {
    for (const auto& [col, coef] : terms) {
      (void)coef;
      DRCBM_REQUIRE(col >= 0 && col < num_vars(), "row references unknown column");
    }
    row_lb_.push_back(lb);
    row_ub_.push_back(ub);
    rows_.push_back(std::move(terms));
    row_names_.push_back(std::move(name));
  }

  void set_obj(int var, double coef) { obj_[static_cast<std::size_t>(var)] = coef; }
  void add_obj_offset(double c) { obj_offset_ += c; }
  void fix_var(int var, double value) {
    lb_[static_cast<std::size_t>(var)] = value;
    ub_[static_cast<std::size_t>(var)] = value;
  }

  int num_vars() const { return static_cast<int>(lb_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_vars_of(VarType t) const {
    int n = 0;
    for (auto v : type_)
      if (v == t) ++n;
    return n;
  }

  double var_lb(int i) const { return lb_[static_cast<std::size_t>(i)]; }
  double var_ub(int i) const { return ub_[static_cast<std::size_t>(i)]; }
  VarType var_type(int i) const { return type_[static_cast<std::size_t>(i)]; }
  const std::string& var_name(int i) const { return names_[static_cast<std::size_t>(i)]; }
  double obj_coef(int i) const { return obj_[static_cast<std::size_t>(i)]; }
  double obj_offset() const { return obj_offset_; }
  double row_lb(int r) const { return row_lb_[static_cast<std::size_t>(r)]; }
  double row_ub(int r) const { return row_ub_[static_cast<std::size_t>(r)]; }
  const std::vector<std::pair<int, double>>& row(int r) const {
    return rows_[static_cast<std::size_t>(r)];
  }

  // CPLEX-style LP text export for cross-solver debugging. Ranged rows are
  // split into a pair of inequalities.
  void write_lp(std::ostream& os) const {
    os.precision(17);
    os << "\\ drcbm model export\nMinimize\n obj:";
    bool any = false;
    for (int i = 0; i < num_vars(); ++i) {
      if (obj_coef(i) == 0.0) continue;
      os << (obj_coef(i) < 0 ? " - " : (any ? " + " : " ")) << std::fabs(obj_coef(i))
         << ' ' << lp_name(i);
      any = true;
    }
    if (!any) os << " 0 " << lp_name(0);
    os << "\nSubject To\n";
    for (int r = 0; r < num_rows(); ++r) {
      const double lb = row_lb(r), ub = row_ub(r);
      if (lb == ub) {
        write_row(os, r, "e");
        os << " = " << lb << '\n';
      } else {
        if (ub < kInf) {
          write_row(os, r, "u");
          os << " <= " << ub << '\n';
        }
        if (lb > -kInf) {
          write_row(os, r, "l");
          os << " >= " << lb << '\n';
        }
      }
    }
    os << "Bounds\n";
    for (int i = 0; i < num_vars(); ++i) {
      if (var_lb(i) == var_ub(i)) {
        os << ' ' << lp_name(i) << " = " << var_lb(i) << '\n';
        continue;
      }
      os << ' ';
      if (var_lb(i) == -kInf)
        os << "-inf";
      else
        os << var_lb(i);
      os << " <= " << lp_name(i) << " <= ";
      if (var_ub(i) == kInf)
        os << "+inf";
      else
        os << var_ub(i);
      os << '\n';
    }
    bool any_int = false;
    for (int i = 0; i < num_vars(); ++i)
      if (var_type(i) == VarType::Integer) {
        if (!any_int) os << "Generals\n";
        any_int = true;
        os << ' ' << lp_name(i) << '\n';
      }
    bool any_bin = false;
    for (int i = 0; i < num_vars(); ++i)
      if (var_type(i) == VarType::Binary) {
        if (!any_bin) os << "Binaries\n";
        any_bin = true;
        os << ' ' << lp_name(i) << '\n';
      }
    os << "End\n";
  }

 private:
  std::string lp_name(int i) const {
    const auto& n = names_[static_cast<std::size_t>(i)];
    return n.empty() ? "c" + std::to_string(i) : n;
  }
  void write_row(std::ostream& os, int r, const char* suffix) const {
    const auto& n = row_names_[static_cast<std::size_t>(r)];
    os << ' ' << (n.empty() ? "r" + std::to_string(r) : n) << '_' << suffix << ':';
    for (const auto& [col, coef] : rows_[static_cast<std::size_t>(r)])
      os << (coef < 0 ? " - " : " + ") << std::fabs(coef) << ' ' << lp_name(col);
  }

  std::vector<double> lb_, ub_, obj_;
  std::vector<VarType> type_;
  std::vector<std::string> names_;
  std::vector<double> row_lb_, row_ub_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<std::string> row_names_;
  double obj_offset_ = 0.0;
};

struct SolveOptions {
  double time_limit_sec = 600.0;
  double rel_gap = 1e-6;
  bool verbose = false;
  std::optional<int> seed;
};

struct SolveResult {
  Status status = Status::Error;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  double runtime_sec = 0.0;
  std::vector<double> values;

  bool has_solution() const {
    return status == Status::Optimal || status == Status::FeasibleGap;
  }
};

class Solver {
 public:
  virtual ~Solver() = default;
  virtual SolveResult solve(const Model& model, const SolveOptions& opts) = 0;
  virtual std::string name() const = 0;
};

}  // namespace drcbm::milp

#endif  // DRCBM_MILP_HPP
