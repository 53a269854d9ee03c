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

// Exhaustive optimum for desk-toy instances (<= 2 components, tiny
// horizons): enumerate repair schedules and, per schedule, every way of
// sourcing each consumed spare unit. Deliberately independent of the MILP
// path.

#ifndef DRCBM_TESTS_TOY_ORACLE_HPP
#define DRCBM_TESTS_TOY_ORACLE_HPP

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "drcbm/dro.hpp"
#include "drcbm/instance.hpp"
#include "drcbm/model.hpp"

namespace drcbm::testing {

namespace toy_detail {

// How one consumed unit is sourced.
struct Source {
  enum Kind { InitialStock, InFlight, Regular, Expedited } kind;
  int place_epoch = 0;   // regular orders: placement epoch
  int inflight_idx = -1; // in-flight orders: index into instance.in_flight
};

struct Repair {
  int component, epoch, spare_type;
};

inline std::vector<Source> source_options(const ProblemInstance& ins,
                                          const Repair& rep) {
  std::vector<Source> opts;
  for (int u = 0;
       u < ins.spare_types[static_cast<std::size_t>(rep.spare_type)].initial_stock;
       ++u)
    opts.push_back({Source::InitialStock, 0, u});
  for (int i = 0; i < static_cast<int>(ins.in_flight.size()); ++i) {
    const auto& o = ins.in_flight[static_cast<std::size_t>(i)];
    if (o.spare_type == rep.spare_type && o.qty >= 1 &&
        o.arrival_epoch <= rep.epoch)
      opts.push_back({Source::InFlight, 0, i});
  }
  for (int p = 1; p + ins.lead_time <= rep.epoch; ++p)
    opts.push_back({Source::Regular, p, -1});
  opts.push_back({Source::Expedited, rep.epoch, -1});
  return opts;
}

inline std::optional<double> inventory_cost(const ProblemInstance& ins,
                                            const std::vector<Repair>& reps,
                                            const std::vector<Source>& pick) {
  const int T = ins.t_max;
  const int L = ins.num_spare_types();
  // Reject double-use of the same physical unit.
  for (std::size_t i = 0; i < pick.size(); ++i)
    for (std::size_t k = i + 1; k < pick.size(); ++k) {
      if (pick[i].kind != pick[k].kind) continue;
      const bool same_type = reps[i].spare_type == reps[k].spare_type;
      if (pick[i].kind == Source::InitialStock && same_type &&
          pick[i].inflight_idx == pick[k].inflight_idx)
        return std::nullopt;
      if (pick[i].kind == Source::InFlight &&
          pick[i].inflight_idx == pick[k].inflight_idx) {
        const auto& o = ins.in_flight[static_cast<std::size_t>(pick[i].inflight_idx)];
        if (o.qty < 2) return std::nullopt;
      }
    }

  std::vector<std::vector<int>> greg(static_cast<std::size_t>(L),
                                     std::vector<int>(static_cast<std::size_t>(T) + 1, 0));
  std::vector<std::vector<int>> gexp = greg;
  double order_cost = 0.0;
  for (std::size_t i = 0; i < pick.size(); ++i) {
    const auto& st = ins.spare_types[static_cast<std::size_t>(reps[i].spare_type)];
    if (pick[i].kind == Source::Regular) {
      greg[static_cast<std::size_t>(reps[i].spare_type)]
          [static_cast<std::size_t>(pick[i].place_epoch)] += 1;
      order_cost += st.regular_cost;
    } else if (pick[i].kind == Source::Expedited) {
      gexp[static_cast<std::size_t>(reps[i].spare_type)]
          [static_cast<std::size_t>(reps[i].epoch)] += 1;
      order_cost += st.expedited_cost;
    }
  }
  // Supplier capacity and the per-epoch fixed order charge.
  for (int t = 1; t <= T; ++t) {
    int total = 0;
    for (int l = 0; l < L; ++l) total += greg[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)];
    if (total > ins.supplier_capacity[static_cast<std::size_t>(t - 1)])
      return std::nullopt;
    if (total > 0) order_cost += ins.fixed_order_cost;
  }
  // Stock trajectory and holding cost.
  double holding = 0.0;
  for (int l = 0; l < L; ++l) {
    int h = ins.spare_types[static_cast<std::size_t>(l)].initial_stock;
    for (int t = 1; t <= T; ++t) {
      for (const auto& o : ins.in_flight)
        if (o.spare_type == l && o.arrival_epoch == t) h += o.qty;
      if (t > ins.lead_time)
        h += greg[static_cast<std::size_t>(l)][static_cast<std::size_t>(t - ins.lead_time)];
      h += gexp[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)];
      for (std::size_t i = 0; i < reps.size(); ++i)
        if (reps[i].spare_type == l && reps[i].epoch == t) --h;
      if (h < 0) return std::nullopt;
      holding += ins.spare_types[static_cast<std::size_t>(l)].hold_cost * h;
    }
  }
  return order_cost + holding;
}

inline double best_inventory_cost(const ProblemInstance& ins,
                                  const std::vector<Repair>& reps) {
  std::vector<std::vector<Source>> options;
  for (const auto& rep : reps) options.push_back(source_options(ins, rep));
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(reps.size(), 0);
  while (true) {
    std::vector<Source> pick;
    for (std::size_t i = 0; i < reps.size(); ++i)
      pick.push_back(options[i][idx[i]]);
    if (const auto cost = inventory_cost(ins, reps, pick))
      best = std::min(best, *cost);
    std::size_t pos = 0;
    while (pos < reps.size() && ++idx[pos] == options[pos].size()) {
      idx[pos] = 0;
      ++pos;
    }
    if (pos == reps.size() || reps.empty()) break;
  }
  return best;
}

}  // namespace toy_detail

// Exhaustive optimal objective; infinity when no schedule is feasible.
inline double toy_optimum(const ProblemInstance& ins,
                          const PrecomputedParams& params, Z2Mode z2_mode) {
  const int J = ins.num_components();
  const int T = ins.t_max;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> epoch(static_cast<std::size_t>(J), 1);
  while (true) {
    bool admissible = true;
    for (int j = 0; j < J; ++j)
      if (epoch[static_cast<std::size_t>(j)] >= params.t_star[static_cast<std::size_t>(j)])
        admissible = false;
    for (int t = 1; t <= T && admissible; ++t) {
      int reps = 0;
      for (int j = 0; j < J; ++j)
        if (epoch[static_cast<std::size_t>(j)] == t) ++reps;
      if (reps > ins.crew_capacity) admissible = false;
    }
    if (admissible && z2_mode == Z2Mode::Exact && ins.gamma < J)
      admissible = check_z2_probability(epoch, params, ins.gamma, ins.beta).feasible;
    if (admissible) {
      double cost = 0.0;
      for (int j = 0; j < J; ++j)
        cost += params.psi_at(j, epoch[static_cast<std::size_t>(j)]);
      const auto by_machine = ins.components_by_machine();
      for (int k = 0; k < ins.num_machines(); ++k)
        for (int t = 1; t <= T; ++t)
          for (int j : by_machine[static_cast<std::size_t>(k)])
            if (epoch[static_cast<std::size_t>(j)] == t) {
              cost += ins.machine_down_cost[static_cast<std::size_t>(k)];
              break;
            }
      for (int t = 1; t <= T; ++t)
        for (int j = 0; j < J; ++j)
          if (epoch[static_cast<std::size_t>(j)] == t) {
            cost += ins.crew_cost;
            break;
          }
      std::vector<toy_detail::Repair> reps;
      for (int j = 0; j < J; ++j)
        reps.push_back({j, epoch[static_cast<std::size_t>(j)],
                        ins.components[static_cast<std::size_t>(j)].spare_type});
      cost += toy_detail::best_inventory_cost(ins, reps);
      best = std::min(best, cost);
    }
    int pos = 0;
    while (pos < J && ++epoch[static_cast<std::size_t>(pos)] == T + 1) {
      epoch[static_cast<std::size_t>(pos)] = 1;
      ++pos;
    }
    if (pos == J) break;
  }
  return best;
}

}  // namespace drcbm::testing

#endif  // DRCBM_TESTS_TOY_ORACLE_HPP
