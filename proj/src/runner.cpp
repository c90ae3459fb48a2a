#include "lendsim/runner.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "lendsim/errors.hpp"
#include "lendsim/rng.hpp"

namespace lendsim::runner {

void Scenario::validate() const {
  if (pool_size < 1 || n_sims < 1 || n_lenders < 1) {
    throw ConfigError("scenario counts must be positive");
  }
  policy.validate(pool_size);
  prefs.validate();
  fe_set.validate();
  calib.validate();
  if (!std::isfinite(omega)) {
    throw ConfigError("omega must be finite");
  }
}

std::string Scenario::label() const {
  return name.empty() ? policy::to_string(policy.kind) : name;
}

namespace {

// With match_pools every stream key is policy-free, so scenarios sharing a
// master seed reuse pools, style draws and lender preferences (common random
// numbers).  Without it the policy kind is folded into every stream.
std::uint64_t policy_key(const Scenario& s) {
  return s.match_pools
             ? 0
             : 0x50ULL + static_cast<std::uint64_t>(s.policy.kind);
}

MetricsReport metrics_from_tally(const metrics::OutcomeTally& tally) {
  MetricsReport report;
  report.efficiency = metrics::efficiency(tally);
  if (tally.inside_total() == 0) {
    // No lender chose a borrower; every distribution metric degenerates.
    return report;
  }
  std::vector<double> counts(tally.counts.begin(), tally.counts.end());
  report.gini = metrics::gini(counts);
  report.bottom_tercile_share = metrics::bottom_tercile_share(tally);
  if (tally.pool.male_share() > 0.0) {
    const auto ms = metrics::male_selection_ratio(tally);
    report.male_ratio = ms.ratio;
    report.raw_male_share = ms.raw_share;
  }
  return report;
}

}  // namespace

MetricsReport run_simulation(const Scenario& scenario, int sim_index) {
  scenario.validate();
  const auto sim = static_cast<std::uint64_t>(sim_index);
  const std::uint64_t pkey = policy_key(scenario);

  RngStream pool_rng = RngStream::from_keys(
      scenario.master_seed, {sim, stream_tag::kPool, pkey});
  const pool::BorrowerPool base_pool = pool::draw_pool(
      scenario.fe_set, scenario.calib, scenario.pool_size, pool_rng);

  RngStream style_rng = RngStream::from_keys(
      scenario.master_seed, {sim, stream_tag::kStyle, pkey});
  const pool::BorrowerPool sim_pool =
      policy::apply_style_transform(base_pool, scenario.policy, style_rng);

  metrics::OutcomeTally tally;
  tally.pool = sim_pool;
  tally.counts.assign(sim_pool.profiles.size(), 0);

  for (int lender = 0; lender < scenario.n_lenders; ++lender) {
    const auto lkey = static_cast<std::uint64_t>(lender);
    RngStream market_rng = RngStream::from_keys(
        scenario.master_seed, {sim, stream_tag::kMarket, pkey, lkey});
    const choice::Market market = policy::sample_market(
        sim_pool, scenario.policy, scenario.omega, market_rng);

    RngStream prefs_rng = RngStream::from_keys(
        scenario.master_seed, {sim, stream_tag::kPrefs, pkey, lkey});
    const choice::LenderPrefs prefs =
        choice::draw_prefs(scenario.prefs, prefs_rng);

    RngStream choice_rng = RngStream::from_keys(
        scenario.master_seed, {sim, stream_tag::kChoice, pkey, lkey});
    const auto outcome = choice::simulate_choice(market, prefs, choice_rng);
    if (outcome.is_outside()) {
      ++tally.outside_count;
    } else {
      ++tally.counts[static_cast<std::size_t>(outcome.chosen)];
    }
  }
  return metrics_from_tally(tally);
}

Aggregate aggregate_reports(std::span<const MetricsReport> reports) {
  Aggregate agg;
  const auto n = static_cast<double>(reports.size());
  if (reports.empty()) return agg;

  auto accumulate = [&](auto member) {
    double sum = 0.0;
    for (const auto& r : reports) sum += r.*member;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : reports) ss += (r.*member - mean) * (r.*member - mean);
    const double sd = n > 1.0 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return std::pair{mean, sd};
  };

  auto assign = [&](auto member) {
    const auto [mean, sd] = accumulate(member);
    agg.mean.*member = mean;
    agg.sd.*member = sd;
  };
  assign(&MetricsReport::gini);
  assign(&MetricsReport::bottom_tercile_share);
  assign(&MetricsReport::efficiency);
  assign(&MetricsReport::male_ratio);
  assign(&MetricsReport::raw_male_share);
  agg.sd_valid = reports.size() > 1;
  return agg;
}

ScenarioResult run_scenario(const Scenario& scenario, int threads) {
  scenario.validate();
  if (threads < 1) {
    throw ConfigError("thread count must be >= 1");
  }

  ScenarioResult result;
  result.policy_name = scenario.label();
  result.per_sim.resize(static_cast<std::size_t>(scenario.n_sims));

  if (threads == 1) {
    for (int i = 0; i < scenario.n_sims; ++i) {
      result.per_sim[static_cast<std::size_t>(i)] = run_simulation(scenario, i);
    }
  } else {
    // Each simulation is keyed by its index, so any work split gives the
    // same per_sim vector.
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int i = next.fetch_add(1); i < scenario.n_sims;
           i = next.fetch_add(1)) {
        result.per_sim[static_cast<std::size_t>(i)] = run_simulation(scenario, i);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.aggregate = aggregate_reports(result.per_sim);
  return result;
}

std::vector<ScenarioResult> run_sweep(std::span<const Scenario> scenarios,
                                      const SweepOptions& options) {
  std::vector<ScenarioResult> results;
  results.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    results.push_back(run_scenario(s, options.threads));
  }

  if (options.pin_benchmark_efficiency) {
    const ScenarioResult* baseline = nullptr;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      if (scenarios[i].policy.kind == policy::PolicyKind::Baseline) {
        baseline = &results[i];
        break;
      }
    }
    if (baseline != nullptr) {
      for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (scenarios[i].policy.kind != policy::PolicyKind::Benchmark ||
            results[i].per_sim.size() != baseline->per_sim.size()) {
          continue;
        }
        for (std::size_t k = 0; k < results[i].per_sim.size(); ++k) {
          results[i].per_sim[k].efficiency = baseline->per_sim[k].efficiency;
        }
        results[i].aggregate = aggregate_reports(results[i].per_sim);
      }
    }
  }
  return results;
}

}  // namespace lendsim::runner
