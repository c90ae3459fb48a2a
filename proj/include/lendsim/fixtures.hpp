#pragma once

#include <cstdint>
#include <vector>

#include "lendsim/choice.hpp"
#include "lendsim/estimate.hpp"
#include "lendsim/pool.hpp"
#include "lendsim/runner.hpp"

namespace lendsim::fixtures {

// Experimental preference estimates used to calibrate the simulator:
// means are the estimated coefficients, sds their standard errors.
choice::PreferenceParams experiment_preference_params();

// The experiment's estimated fixed effects, stylized as n evenly spaced
// values spanning [0, 0.64].
pool::FixedEffectSet experiment_fixed_effects(int n = 20);

// Stylized platform calibration: male share 0.198 in every decile, smile
// 0.77 | female and 0.33 | male, bodyshot 0.22 | female and 0.26 | male.
pool::CalibrationTable stylized_calibration();

// A scenario with the platform defaults: pool of 22, markets of 10,
// omega = 1, the stylized calibration and experiment preferences.
runner::Scenario default_scenario(policy::PolicyKind kind,
                                  std::uint64_t master_seed = 42);

// All seven policies in report order.
std::vector<policy::PolicySpec> all_policies(int market_size = 10);

// Synthetic paired choices drawn from the pair logit under `truth` with the
// given per-profile fixed effects (profile p01 is the reference at index 0).
// Option features are iid Bernoulli(0.5), profiles distinct within a pair.
std::vector<estimate::ChoiceRecord> make_choice_records(
    int n_pairs, const choice::LenderPrefs& truth,
    const std::vector<double>& profile_fes, std::uint64_t seed);

// Synthetic campaign records whose calibration marginals match the platform
// data: male 0.198 overall (declining across fixed-effect deciles), smile
// 0.498 and bodyshot 0.406 overall via gender-conditional rates.
struct CampaignFixture {
  std::vector<pool::CampaignRecord> records;
  std::vector<double> fe;
  std::vector<int> week;
};

CampaignFixture make_campaign_records(int n, std::uint64_t seed,
                                      int campaigns_per_week = 450);

}  // namespace lendsim::fixtures
