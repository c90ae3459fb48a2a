#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lendsim/choice.hpp"
#include "lendsim/metrics.hpp"
#include "lendsim/policy.hpp"
#include "lendsim/pool.hpp"

namespace lendsim::runner {

// Everything one policy simulation needs.  master_seed plus a simulation
// index determines every random draw.
struct Scenario {
  std::string name;  // report label; defaults to the policy kind
  policy::PolicySpec policy;
  int pool_size = 22;
  int n_sims = 50;
  int n_lenders = 500;
  double omega = 1.0;
  choice::PreferenceParams prefs;
  pool::FixedEffectSet fe_set;
  pool::CalibrationTable calib;
  std::uint64_t master_seed = 0;
  bool match_pools = true;  // common random numbers across policies

  void validate() const;
  std::string label() const;
};

struct MetricsReport {
  double gini = 0.0;
  double bottom_tercile_share = 0.0;
  double efficiency = 0.0;
  double male_ratio = 0.0;
  double raw_male_share = 0.0;
};

struct Aggregate {
  MetricsReport mean;
  MetricsReport sd;
  bool sd_valid = false;  // false when n_sims == 1
};

struct ScenarioResult {
  std::string policy_name;
  std::vector<MetricsReport> per_sim;
  Aggregate aggregate;
};

Aggregate aggregate_reports(std::span<const MetricsReport> reports);

// One simulation: pool draw, style transform, then per-lender market
// sampling, preference draws and choice simulation; metrics are computed
// over the full pool including never-shown borrowers.
MetricsReport run_simulation(const Scenario& scenario, int sim_index);

// n_sims independent simulations plus their aggregate.  Results are
// identical for any thread count.
ScenarioResult run_scenario(const Scenario& scenario, int threads = 1);

struct SweepOptions {
  int threads = 1;
  // Report Benchmark fairness metrics alongside Baseline's efficiency.
  bool pin_benchmark_efficiency = true;
};

// Runs each scenario; with a shared master seed and match_pools the pools
// are identical across policies wherever pool-affecting parameters coincide.
std::vector<ScenarioResult> run_sweep(std::span<const Scenario> scenarios,
                                      const SweepOptions& options = {});

}  // namespace lendsim::runner
