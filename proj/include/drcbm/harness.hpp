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

#ifndef DRCBM_HARNESS_HPP
#define DRCBM_HARNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "drcbm/baselines.hpp"
#include "drcbm/degradation.hpp"
#include "drcbm/error.hpp"
#include "drcbm/highs_backend.hpp"
#include "drcbm/instance.hpp"
#include "drcbm/model.hpp"
#include "drcbm/prognostics.hpp"
#include "drcbm/rng.hpp"

namespace drcbm {

// Seed stream tags. Everything random in an episode flows from the episode
// seed through these, so a replay with the same seed is event-identical and
// the ground truth of unit (j, generation) does not depend on the policy.
namespace stream {
inline constexpr std::uint64_t kTraining = 1;
inline constexpr std::uint64_t kWorld = 2;
inline constexpr std::uint64_t kRld = 3;
inline constexpr std::uint64_t kInitialAge = 4;
}  // namespace stream

// The six cost categories of the planning objective, accrued from realized
// events.
struct CostLedger {
  double preventive = 0, corrective = 0, shutdown = 0, crew = 0;
  double holding = 0, orders = 0;

  double total() const {
    return preventive + corrective + shutdown + crew + holding + orders;
  }
};

struct SimEvent {
  int day = 0;
  std::string kind;
  int component = -1;
  double value = 0.0;
};

struct UnitState {
  int spare_type = 0, machine = 0;
  int install_day = 0;
  int generation = 0;
  DegradationSignal truth;
  bool failed = false;
  int failure_day = -1;    // onset day of the current failure
  int scheduled_day = -1;  // committed repair day, -1 when none
};

struct SpareState {
  int on_hand = 0;
  std::vector<std::pair<int, int>> pipeline;  // (arrival day, qty)
};

struct SimState {
  int clock = 0;
  std::vector<UnitState> units;
  std::vector<SpareState> spares;
  CostLedger ledger;
  std::vector<SimEvent> events;
  int preventive_repairs = 0, corrective_repairs = 0;
  int expedited_units = 0, regular_units = 0;
  int solves = 0;
  // Per-day records for the violation windows (index 1..sim_days).
  std::vector<std::vector<std::uint8_t>> down_days;  // [j][day]
  std::vector<int> failure_onsets;                   // [day]
};

struct EpisodeConfig {
  ProblemInstance instance;
  std::vector<ComponentTypeParams> type_params;  // one per spare type
  PolicySpec policy;
  Z2Config z2;  // mode/sample settings; excluded set is managed per solve
  int training_signals = 50;
  int rld_samples = 200;
  int sim_days = 200;
  double initial_age_max_fraction = 0.5;
  std::uint64_t seed = 0;
  milp::SolveOptions solve_options{60.0, 1e-4, false, std::nullopt};
};

struct WindowFlags {
  bool downtime_violated = false;  // some component down longer than rho
  bool failures_violated = false;  // more than gamma failure onsets
};

// Single-episode key performance indicators.
struct EpisodeKpis {
  std::optional<double> pct_pm;
  double cost_per_day = 0.0;
  double avg_cc_violation = 0.0;
  int repairs = 0;
};

struct EpisodeResult {
  SimState state;
  EpisodeKpis kpis;
  std::vector<WindowFlags> windows;
};

namespace harness_detail {

inline double approx_mean_lifetime(const ComponentTypeParams& p) {
  const double phase1 = 0.5 * (p.tau_a + p.tau_b);
  const double log_dist = std::log(p.failure_threshold) - p.log_theta_mu;
  const double inv_beta =
      std::exp(-p.log_beta_mu + 0.5 * p.log_beta_sigma * p.log_beta_sigma);
  return phase1 + log_dist * inv_beta;
}

// Fresh ground-truth signal for unit slot j, generation g; optionally
// conditioned on surviving beyond a minimum age (rejection over derived
// attempt seeds).
inline DegradationSignal draw_truth(const ComponentTypeParams& params,
                                    std::uint64_t episode_seed, int j, int g,
                                    double min_life = 0.0) {
  const std::uint64_t base =
      derive_seed(episode_seed, stream::kWorld, static_cast<std::uint64_t>(j),
                  static_cast<std::uint64_t>(g));
  for (std::uint64_t attempt = 0;; ++attempt) {
    auto sig = simulate_signal(params, derive_seed(base, attempt));
    if (sig.failure_time > min_life) return sig;
    if (attempt > 10000)
      throw Error("could not draw a ground-truth signal surviving past " +
                  std::to_string(min_life));
  }
}

}  // namespace harness_detail

// Closed-loop rolling-horizon episode: every freeze period the surviving
// components are observed, remaining-life distributions are refreshed, the
// policy's model is re-solved over a fresh horizon seeded with current
// stock and pipeline, and only the decisions inside the freeze period are
// executed against the hidden ground truth.
inline EpisodeResult run_episode(const EpisodeConfig& cfg, milp::Solver& solver) {
  cfg.instance.validate();
  DRCBM_REQUIRE(static_cast<int>(cfg.type_params.size()) ==
                    cfg.instance.num_spare_types(),
                "one generative parameter set per spare type required");
  DRCBM_REQUIRE(cfg.sim_days >= 1, "sim_days must be positive");

  const auto& ins = cfg.instance;
  const int J = ins.num_components();
  const int L = ins.num_spare_types();

  // Population priors per spare type from freshly generated training data.
  std::vector<Priors> priors;
  for (int l = 0; l < L; ++l) {
    const auto training = generate_dataset(
        cfg.type_params[static_cast<std::size_t>(l)], cfg.training_signals,
        derive_seed(cfg.seed, stream::kTraining, static_cast<std::uint64_t>(l)));
    priors.push_back(fit_priors(
        training, cfg.type_params[static_cast<std::size_t>(l)].failure_threshold));
  }

  EpisodeResult out;
  auto& st = out.state;
  st.units.resize(static_cast<std::size_t>(J));
  st.spares.resize(static_cast<std::size_t>(L));
  st.down_days.assign(static_cast<std::size_t>(J),
                      std::vector<std::uint8_t>(static_cast<std::size_t>(cfg.sim_days) + 1, 0));
  st.failure_onsets.assign(static_cast<std::size_t>(cfg.sim_days) + 1, 0);

  for (int l = 0; l < L; ++l)
    st.spares[static_cast<std::size_t>(l)].on_hand =
        ins.spare_types[static_cast<std::size_t>(l)].initial_stock;
  for (const auto& o : ins.in_flight)
    st.spares[static_cast<std::size_t>(o.spare_type)].pipeline.emplace_back(
        o.arrival_epoch, o.qty);

  for (int j = 0; j < J; ++j) {
    auto& unit = st.units[static_cast<std::size_t>(j)];
    unit.spare_type = ins.components[static_cast<std::size_t>(j)].spare_type;
    unit.machine = ins.components[static_cast<std::size_t>(j)].machine;
    const auto& tp = cfg.type_params[static_cast<std::size_t>(unit.spare_type)];
    auto age_rng = make_engine(derive_seed(cfg.seed, stream::kInitialAge,
                                           static_cast<std::uint64_t>(j)));
    const double max_age = cfg.initial_age_max_fraction *
                           harness_detail::approx_mean_lifetime(tp);
    const int age = static_cast<int>(
        std::uniform_real_distribution<double>(0.0, std::max(max_age, 0.0))(age_rng));
    unit.install_day = -age;
    unit.truth = harness_detail::draw_truth(tp, cfg.seed, j, 0,
                                            static_cast<double>(age));
  }

  while (st.clock < cfg.sim_days) {
    const int exec_days = std::min(ins.freeze_len, cfg.sim_days - st.clock);

    // (1)-(2) observe and refresh remaining-life distributions.
    std::vector<EmpiricalRld> rlds;
    Z2Config z2 = cfg.z2;
    z2.excluded.clear();
    for (int j = 0; j < J; ++j) {
      auto& unit = st.units[static_cast<std::size_t>(j)];
      const auto& pri = priors[static_cast<std::size_t>(unit.spare_type)];
      const std::uint64_t rld_seed =
          derive_seed(cfg.seed, stream::kRld,
                      static_cast<std::uint64_t>(st.solves),
                      static_cast<std::uint64_t>(j));
      if (unit.failed) {
        rlds.push_back(failed_rld(cfg.rld_samples, pri.tau_max));
        z2.excluded.push_back(j);  // this failure already happened
        continue;
      }
      const double age = static_cast<double>(st.clock - unit.install_day);
      const auto observed = truncate_at_age(unit.truth, age).signal;
      if (detail::first_phase2_index(observed, pri.phi) < observed.size()) {
        const auto post = update_posterior(pri, observed);
        rlds.push_back(sample_rld(post, cfg.rld_samples, rld_seed));
      } else {
        rlds.push_back(prior_rld(pri, age, cfg.rld_samples, rld_seed));
      }
    }

    // (3)-(4) plan over a fresh horizon seeded with current stock/pipeline.
    ProblemInstance now = ins;
    for (int l = 0; l < L; ++l)
      now.spare_types[static_cast<std::size_t>(l)].initial_stock =
          st.spares[static_cast<std::size_t>(l)].on_hand;
    now.in_flight.clear();
    for (int l = 0; l < L; ++l)
      for (const auto& [arrival, qty] : st.spares[static_cast<std::size_t>(l)].pipeline) {
        const int epoch = arrival - st.clock;
        DRCBM_REQUIRE(epoch >= 1 && epoch <= now.lead_time,
                      "pipeline order outside the lead-time window");
        now.in_flight.push_back({l, epoch, qty});
      }
    z2.seed = derive_seed(cfg.z2.seed, static_cast<std::uint64_t>(st.solves));

    PlanOutcome plan;
    try {
      plan = run_policy(cfg.policy, now, rlds, z2, solver, cfg.solve_options);
    } catch (const InfeasibleModelError& e) {
      throw Error("episode aborted at day " + std::to_string(st.clock) +
                  ": " + e.what());
    }
    if (!plan.has_solution())
      throw Error("episode aborted at day " + std::to_string(st.clock) +
                  ": solver returned " +
                  std::string(milp::to_string(plan.solution.status)));
    st.events.push_back({st.clock, "solve", -1, plan.solution.objective});
    ++st.solves;

    // (5) commit decisions that fall inside the freeze period.
    for (int j = 0; j < J; ++j) {
      const int epoch = plan.solution.repair_epoch[static_cast<std::size_t>(j)];
      st.units[static_cast<std::size_t>(j)].scheduled_day =
          (epoch >= 1 && epoch <= exec_days) ? st.clock + epoch : -1;
    }
    std::vector<std::vector<int>> committed_orders(
        static_cast<std::size_t>(L), std::vector<int>(static_cast<std::size_t>(exec_days) + 1, 0));
    if (!plan.solution.regular_orders.empty())
      for (int l = 0; l < L; ++l)
        for (int t = 1; t <= exec_days; ++t)
          committed_orders[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)] =
              plan.solution.regular_orders[static_cast<std::size_t>(l)]
                                          [static_cast<std::size_t>(t - 1)];

    // (6)-(7) advance the hidden truth day by day.
    for (int step = 1; step <= exec_days; ++step) {
      const int day = st.clock + step;

      for (int l = 0; l < L; ++l) {
        auto& sp = st.spares[static_cast<std::size_t>(l)];
        for (auto it = sp.pipeline.begin(); it != sp.pipeline.end();) {
          if (it->first == day) {
            sp.on_hand += it->second;
            st.events.push_back({day, "arrival", -1, static_cast<double>(it->second)});
            it = sp.pipeline.erase(it);
          } else {
            ++it;
          }
        }
        const int qty = committed_orders[static_cast<std::size_t>(l)][static_cast<std::size_t>(step)];
        if (qty > 0) {
          sp.pipeline.emplace_back(day + ins.lead_time, qty);
          st.ledger.orders +=
              ins.spare_types[static_cast<std::size_t>(l)].regular_cost * qty;
          st.regular_units += qty;
          st.events.push_back({day, "order_regular", l, static_cast<double>(qty)});
        }
      }
      {
        int placed = 0;
        for (int l = 0; l < L; ++l)
          placed += committed_orders[static_cast<std::size_t>(l)][static_cast<std::size_t>(step)];
        if (placed > 0) st.ledger.orders += ins.fixed_order_cost;
      }

      for (int j = 0; j < J; ++j) {
        auto& unit = st.units[static_cast<std::size_t>(j)];
        if (!unit.failed &&
            day >= unit.install_day + static_cast<int>(unit.truth.failure_time)) {
          unit.failed = true;
          unit.failure_day = day;
          st.failure_onsets[static_cast<std::size_t>(day)] += 1;
          st.events.push_back({day, "failure", j, 0.0});
        }
      }

      std::vector<bool> machine_repair(static_cast<std::size_t>(ins.num_machines()), false);
      bool any_repair = false;
      for (int j = 0; j < J; ++j) {
        auto& unit = st.units[static_cast<std::size_t>(j)];
        if (unit.scheduled_day != day) continue;
        auto& sp = st.spares[static_cast<std::size_t>(unit.spare_type)];
        if (sp.on_hand > 0) {
          sp.on_hand -= 1;
        } else {
          st.ledger.orders +=
              ins.spare_types[static_cast<std::size_t>(unit.spare_type)].expedited_cost;
          st.expedited_units += 1;
          st.events.push_back({day, "order_expedited", j, 1.0});
        }
        const auto& costs = ins.components[static_cast<std::size_t>(j)].costs;
        if (unit.failed) {
          const double late = static_cast<double>(day - unit.failure_day);
          st.ledger.corrective += costs.c_co + costs.v_co * late;
          ++st.corrective_repairs;
          st.events.push_back({day, "repair_corrective", j, late});
        } else {
          const double early = static_cast<double>(
              unit.install_day + static_cast<int>(unit.truth.failure_time) - day);
          st.ledger.preventive += costs.c_pr + costs.v_pr * early;
          ++st.preventive_repairs;
          st.events.push_back({day, "repair_preventive", j, early});
        }
        machine_repair[static_cast<std::size_t>(unit.machine)] = true;
        any_repair = true;
        // As-good-as-new replacement with a fresh hidden signal.
        unit.generation += 1;
        unit.truth = harness_detail::draw_truth(
            cfg.type_params[static_cast<std::size_t>(unit.spare_type)], cfg.seed, j,
            unit.generation);
        unit.install_day = day;
        unit.failed = false;
        unit.failure_day = -1;
        unit.scheduled_day = -1;
      }
      for (int k = 0; k < ins.num_machines(); ++k)
        if (machine_repair[static_cast<std::size_t>(k)])
          st.ledger.shutdown += ins.machine_down_cost[static_cast<std::size_t>(k)];
      if (any_repair) st.ledger.crew += ins.crew_cost;

      for (int j = 0; j < J; ++j)
        if (st.units[static_cast<std::size_t>(j)].failed)
          st.down_days[static_cast<std::size_t>(j)][static_cast<std::size_t>(day)] = 1;
      for (int l = 0; l < L; ++l)
        st.ledger.holding +=
            ins.spare_types[static_cast<std::size_t>(l)].hold_cost *
            st.spares[static_cast<std::size_t>(l)].on_hand;
    }
    st.clock += exec_days;
  }

  out.windows = violation_windows(st, ins, cfg.sim_days);
  out.kpis = compute_kpis(st, out.windows, cfg.sim_days);
  return out;
}

// --- study runner -----------------------------------------------------------

struct StudyCell {
  std::string label;
  PolicySpec policy;
  int training_signals = 50;
};

struct StudyConfig {
  ProblemInstance instance;
  std::vector<ComponentTypeParams> type_params;
  std::vector<StudyCell> cells;
  int replications = 20;
  int sim_days = 200;
  int rld_samples = 200;
  double initial_age_max_fraction = 0.5;
  Z2Config z2;
  std::uint64_t seed = 0;
  int workers = 1;
  milp::SolveOptions solve_options{60.0, 1e-4, false, std::nullopt};
};

struct ReplicationRow {
  std::string cell;
  int replication = 0;
  bool failed = false;
  std::string error;
  EpisodeKpis kpis;
  CostLedger ledger;
};

struct CellSummary {
  std::string label;
  int completed = 0, failed = 0;
  double mean_pct_pm = 0, se_pct_pm = 0;
  double mean_cost_per_day = 0, se_cost_per_day = 0;
  double mean_violation = 0, se_violation = 0;
};

struct StudyResult {
  std::vector<ReplicationRow> rows;
  std::vector<CellSummary> cells;
  std::vector<EpisodeResult> episodes;  // aligned with rows; empty on failure
};

namespace harness_detail {

inline void mean_se(const std::vector<double>& xs, double& mean, double& se) {
  mean = 0;
  se = 0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return;
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / static_cast<double>(xs.size() - 1) /
                 static_cast<double>(xs.size()));
}

}  // namespace harness_detail

// Cross product of cells and replications. Replication r shares its seed
// across cells (paired comparisons); failures are recorded per cell and the
// study continues.
inline StudyResult run_study(const StudyConfig& cfg) {
  StudyResult result;
  const int n_jobs = static_cast<int>(cfg.cells.size()) * cfg.replications;
  result.rows.resize(static_cast<std::size_t>(n_jobs));
  result.episodes.resize(static_cast<std::size_t>(n_jobs));

  std::mutex mu;
  int next_job = 0;
  auto worker = [&]() {
    milp::HighsSolver solver;
    while (true) {
      int job;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next_job >= n_jobs) return;
        job = next_job++;
      }
      const int cell_idx = job / cfg.replications;
      const int rep = job % cfg.replications;
      const auto& cell = cfg.cells[static_cast<std::size_t>(cell_idx)];
      EpisodeConfig ep;
      ep.instance = cfg.instance;
      ep.type_params = cfg.type_params;
      ep.policy = cell.policy;
      ep.z2 = cfg.z2;
      ep.training_signals = cell.training_signals;
      ep.rld_samples = cfg.rld_samples;
      ep.sim_days = cfg.sim_days;
      ep.initial_age_max_fraction = cfg.initial_age_max_fraction;
      ep.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
      ep.solve_options = cfg.solve_options;

      ReplicationRow row;
      row.cell = cell.label;
      row.replication = rep;
      try {
        auto episode = run_episode(ep, solver);
        row.kpis = episode.kpis;
        row.ledger = episode.state.ledger;
        result.episodes[static_cast<std::size_t>(job)] = std::move(episode);
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
      result.rows[static_cast<std::size_t>(job)] = std::move(row);
    }
  };

  const int n_workers = std::max(1, std::min(cfg.workers, n_jobs));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
    CellSummary summary;
    summary.label = cfg.cells[c].label;
    std::vector<double> pm, cost, viol;
    for (int rep = 0; rep < cfg.replications; ++rep) {
      const auto& row =
          result.rows[c * static_cast<std::size_t>(cfg.replications) +
                      static_cast<std::size_t>(rep)];
      if (row.failed) {
        ++summary.failed;
        continue;
      }
      ++summary.completed;
      if (row.kpis.pct_pm) pm.push_back(*row.kpis.pct_pm);
      cost.push_back(row.kpis.cost_per_day);
      viol.push_back(row.kpis.avg_cc_violation);
    }
    harness_detail::mean_se(pm, summary.mean_pct_pm, summary.se_pct_pm);
    harness_detail::mean_se(cost, summary.mean_cost_per_day, summary.se_cost_per_day);
    harness_detail::mean_se(viol, summary.mean_violation, summary.se_violation);
    result.cells.push_back(summary);
  }
  return result;
}

inline void write_cell_table(std::ostream& os, const StudyResult& res) {
  os << "cell\tcompleted\tfailed\tmean_pct_pm\tse_pct_pm\tmean_cost_per_day"
        "\tse_cost_per_day\tmean_cc_violation\tse_cc_violation\n";
  for (const auto& c : res.cells)
    os << c.label << '\t' << c.completed << '\t' << c.failed << '\t'
       << c.mean_pct_pm << '\t' << c.se_pct_pm << '\t' << c.mean_cost_per_day
       << '\t' << c.se_cost_per_day << '\t' << c.mean_violation << '\t'
       << c.se_violation << '\n';
}

inline void write_replication_table(std::ostream& os, const StudyResult& res) {
  os << "cell\treplication\tstatus\tpct_pm\tcost_per_day\tcc_violation\trepairs"
        "\tpreventive_cost\tcorrective_cost\tshutdown_cost\tcrew_cost"
        "\tholding_cost\torder_cost\terror\n";
  for (const auto& row : res.rows) {
    os << row.cell << '\t' << row.replication << '\t'
       << (row.failed ? "failed" : "ok") << '\t';
    if (row.kpis.pct_pm)
      os << *row.kpis.pct_pm;
    else
      os << "na";
    os << '\t' << row.kpis.cost_per_day << '\t' << row.kpis.avg_cc_violation
       << '\t' << row.kpis.repairs << '\t' << row.ledger.preventive << '\t'
       << row.ledger.corrective << '\t' << row.ledger.shutdown << '\t'
       << row.ledger.crew << '\t' << row.ledger.holding << '\t'
       << row.ledger.orders << '\t' << row.error << '\n';
  }
}

inline void write_event_log(std::ostream& os, const SimState& st) {
  for (const auto& e : st.events)
    os << "{\"day\":" << e.day << ",\"kind\":\"" << e.kind
       << "\",\"component\":" << e.component << ",\"value\":" << e.value
       << "}\n";
}

}  // namespace drcbm

#endif  // DRCBM_HARNESS_HPP
