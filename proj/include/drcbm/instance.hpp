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

#ifndef DRCBM_INSTANCE_HPP
#define DRCBM_INSTANCE_HPP

#include <string>
#include <vector>

#include "drcbm/dro.hpp"
#include "drcbm/error.hpp"
#include "json.hpp"

namespace drcbm {

struct ComponentInfo {
  int machine = 0;     // 0-based machine index
  int spare_type = 0;  // 0-based spare-type index
  MaintenanceCosts costs;
};

struct SpareTypeInfo {
  double hold_cost = 0.0;       // per unit per epoch
  double regular_cost = 0.0;    // per unit
  double expedited_cost = 0.0;  // per unit
  int initial_stock = 0;        // h_{l0}
};

// A regular order placed before the horizon, arriving at the given epoch.
struct InFlightOrder {
  int spare_type = 0;
  int arrival_epoch = 1;
  int qty = 0;
};

// Full problem data: topology, horizon, costs, capacities and risk levels.
// Component, machine and spare-type indices are 0-based; epochs are 1-based.
struct ProblemInstance {
  int t_max = 1;
  int freeze_len = 1;   // executed leading epochs per re-solve
  int lead_time = 1;    // regular-order lead time, epochs

  std::vector<ComponentInfo> components;
  std::vector<double> machine_down_cost;
  std::vector<SpareTypeInfo> spare_types;
  std::vector<InFlightOrder> in_flight;

  double crew_cost = 0.0;        // per deployment epoch
  double fixed_order_cost = 0.0; // per epoch with a regular order
  int crew_capacity = 1;         // M
  std::vector<int> supplier_capacity;  // G_t, one per epoch

  double rho = 0.0;    // downtime cap
  int gamma = 0;       // unexpected-failure cap
  double epsilon = 0.1, beta = 0.1;

  int num_components() const { return static_cast<int>(components.size()); }
  int num_machines() const { return static_cast<int>(machine_down_cost.size()); }
  int num_spare_types() const { return static_cast<int>(spare_types.size()); }

  std::vector<std::vector<int>> components_by_machine() const {
    std::vector<std::vector<int>> out(machine_down_cost.size());
    for (int j = 0; j < num_components(); ++j)
      out[static_cast<std::size_t>(components[static_cast<std::size_t>(j)].machine)]
          .push_back(j);
    return out;
  }

  std::vector<std::vector<int>> components_by_type() const {
    std::vector<std::vector<int>> out(spare_types.size());
    for (int j = 0; j < num_components(); ++j)
      out[static_cast<std::size_t>(components[static_cast<std::size_t>(j)].spare_type)]
          .push_back(j);
    return out;
  }

  void validate() const {
    DRCBM_REQUIRE(t_max >= 1, "t_max must be >= 1");
    DRCBM_REQUIRE(freeze_len >= 1 && freeze_len <= t_max,
                  "freeze length must lie in [1, t_max]");
    DRCBM_REQUIRE(lead_time >= 1, "regular-order lead time must be >= 1");
    DRCBM_REQUIRE(!components.empty(), "instance needs at least one component");
    DRCBM_REQUIRE(!machine_down_cost.empty(), "instance needs at least one machine");
    DRCBM_REQUIRE(!spare_types.empty(), "instance needs at least one spare type");
    for (const auto& cmp : components) {
      DRCBM_REQUIRE(cmp.machine >= 0 && cmp.machine < num_machines(),
                    "component references unknown machine");
      DRCBM_REQUIRE(cmp.spare_type >= 0 && cmp.spare_type < num_spare_types(),
                    "component references unknown spare type");
      cmp.costs.validate();
    }
    for (double c : machine_down_cost) DRCBM_REQUIRE(c >= 0, "negative shutdown cost");
    for (const auto& st : spare_types) {
      DRCBM_REQUIRE(st.hold_cost >= 0 && st.regular_cost >= 0 && st.expedited_cost >= 0,
                    "spare costs must be non-negative");
      DRCBM_REQUIRE(st.initial_stock >= 0, "negative initial stock");
    }
    DRCBM_REQUIRE(crew_cost >= 0 && fixed_order_cost >= 0, "negative fixed costs");
    DRCBM_REQUIRE(crew_capacity >= 0, "crew capacity must be >= 0");
    DRCBM_REQUIRE(static_cast<int>(supplier_capacity.size()) == t_max,
                  "supplier capacity must have one entry per epoch");
    for (int g : supplier_capacity) DRCBM_REQUIRE(g >= 0, "negative supplier capacity");
    DRCBM_REQUIRE(rho >= 0 && gamma >= 0, "risk caps must be non-negative");
    DRCBM_REQUIRE(epsilon > 0 && epsilon < 1 && beta > 0 && beta < 1,
                  "risk levels must lie in (0,1)");
    for (const auto& o : in_flight) {
      DRCBM_REQUIRE(o.spare_type >= 0 && o.spare_type < num_spare_types(),
                    "in-flight order references unknown spare type");
      DRCBM_REQUIRE(o.arrival_epoch >= 1 && o.arrival_epoch <= lead_time,
                    "in-flight orders must arrive within the first lead-time epochs");
      DRCBM_REQUIRE(o.qty >= 0, "negative in-flight quantity");
    }
  }

  // Warn-level check (costs are usually ordered c_pr <= c_co, v_pr <= v_co).
  std::vector<int> unconventional_cost_components() const {
    std::vector<int> out;
    for (int j = 0; j < num_components(); ++j)
      if (!components[static_cast<std::size_t>(j)].costs.is_conventional())
        out.push_back(j);
    return out;
  }
};

inline nlohmann::json to_json(const ProblemInstance& ins) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["horizon"] = {{"t_max", ins.t_max},
                  {"freeze", ins.freeze_len},
                  {"lead_time", ins.lead_time}};
  j["risk"] = {{"rho", ins.rho},
               {"gamma", ins.gamma},
               {"epsilon", ins.epsilon},
               {"beta", ins.beta}};
  j["crew"] = {{"capacity", ins.crew_capacity}, {"cost", ins.crew_cost}};
  j["fixed_order_cost"] = ins.fixed_order_cost;
  j["supplier_capacity"] = ins.supplier_capacity;
  j["machines"] = nlohmann::json::array();
  for (double c : ins.machine_down_cost)
    j["machines"].push_back({{"down_cost", c}});
  j["spare_types"] = nlohmann::json::array();
  for (const auto& st : ins.spare_types)
    j["spare_types"].push_back({{"hold_cost", st.hold_cost},
                                {"regular_cost", st.regular_cost},
                                {"expedited_cost", st.expedited_cost},
                                {"initial_stock", st.initial_stock}});
  j["components"] = nlohmann::json::array();
  for (const auto& cmp : ins.components)
    j["components"].push_back({{"machine", cmp.machine},
                               {"spare_type", cmp.spare_type},
                               {"c_pr", cmp.costs.c_pr},
                               {"v_pr", cmp.costs.v_pr},
                               {"c_co", cmp.costs.c_co},
                               {"v_co", cmp.costs.v_co}});
  j["in_flight_orders"] = nlohmann::json::array();
  for (const auto& o : ins.in_flight)
    j["in_flight_orders"].push_back({{"spare_type", o.spare_type},
                                     {"arrival_epoch", o.arrival_epoch},
                                     {"qty", o.qty}});
  return j;
}

inline ProblemInstance instance_from_json(const nlohmann::json& j) {
  ProblemInstance ins;
  const auto& hz = j.at("horizon");
  ins.t_max = hz.at("t_max").get<int>();
  ins.freeze_len = hz.at("freeze").get<int>();
  ins.lead_time = hz.at("lead_time").get<int>();
  const auto& rk = j.at("risk");
  ins.rho = rk.at("rho").get<double>();
  ins.gamma = rk.at("gamma").get<int>();
  ins.epsilon = rk.at("epsilon").get<double>();
  ins.beta = rk.at("beta").get<double>();
  ins.crew_capacity = j.at("crew").at("capacity").get<int>();
  ins.crew_cost = j.at("crew").at("cost").get<double>();
  ins.fixed_order_cost = j.at("fixed_order_cost").get<double>();
  if (j.at("supplier_capacity").is_array())
    ins.supplier_capacity = j.at("supplier_capacity").get<std::vector<int>>();
  else
    ins.supplier_capacity.assign(static_cast<std::size_t>(ins.t_max),
                                 j.at("supplier_capacity").get<int>());
  for (const auto& m : j.at("machines"))
    ins.machine_down_cost.push_back(m.at("down_cost").get<double>());
  for (const auto& st : j.at("spare_types")) {
    SpareTypeInfo info;
    info.hold_cost = st.at("hold_cost").get<double>();
    info.regular_cost = st.at("regular_cost").get<double>();
    info.expedited_cost = st.at("expedited_cost").get<double>();
    info.initial_stock = st.value("initial_stock", 0);
    ins.spare_types.push_back(info);
  }
  for (const auto& cj : j.at("components")) {
    ComponentInfo cmp;
    cmp.machine = cj.at("machine").get<int>();
    cmp.spare_type = cj.at("spare_type").get<int>();
    cmp.costs.c_pr = cj.at("c_pr").get<double>();
    cmp.costs.v_pr = cj.at("v_pr").get<double>();
    cmp.costs.c_co = cj.at("c_co").get<double>();
    cmp.costs.v_co = cj.at("v_co").get<double>();
    ins.components.push_back(cmp);
  }
  if (j.contains("in_flight_orders"))
    for (const auto& oj : j.at("in_flight_orders")) {
      InFlightOrder o;
      o.spare_type = oj.at("spare_type").get<int>();
      o.arrival_epoch = oj.at("arrival_epoch").get<int>();
      o.qty = oj.at("qty").get<int>();
      ins.in_flight.push_back(o);
    }
  ins.validate();
  return ins;
}

// The wind-farm configuration used throughout the numerical studies:
// turbines with three component types sharing three spare pools.
// Cost figures are in K$ and epochs are days.
inline ProblemInstance make_wind_farm_instance(int num_turbines,
                                               int t_max = 50) {
  DRCBM_REQUIRE(num_turbines >= 1, "need at least one turbine");
  ProblemInstance ins;
  ins.t_max = t_max;
  ins.freeze_len = 20;
  ins.lead_time = 20;
  ins.crew_capacity = std::max(10, (3 * num_turbines) / 5);
  ins.crew_cost = 40.0;
  ins.fixed_order_cost = 3.0;
  ins.supplier_capacity.assign(static_cast<std::size_t>(t_max), 30);
  ins.rho = 5.0;
  ins.gamma = 7;
  ins.epsilon = 0.1;
  ins.beta = 0.1;
  ins.machine_down_cost.assign(static_cast<std::size_t>(num_turbines), 2.0);
  for (int l = 0; l < 3; ++l) {
    SpareTypeInfo st;
    st.hold_cost = 0.1;
    st.regular_cost = 1.5;
    st.expedited_cost = 6.0;
    st.initial_stock = 1;
    ins.spare_types.push_back(st);
  }
  for (int k = 0; k < num_turbines; ++k)
    for (int l = 0; l < 3; ++l) {
      ComponentInfo cmp;
      cmp.machine = k;
      cmp.spare_type = l;
      cmp.costs = {1.3, 0.13, 7.8, 0.78};
      ins.components.push_back(cmp);
    }
  ins.validate();
  return ins;
}

}  // namespace drcbm

#endif  // DRCBM_INSTANCE_HPP
