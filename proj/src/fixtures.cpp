#include "lendsim/fixtures.hpp"

#include <cmath>
#include <cstdio>

#include "lendsim/errors.hpp"
#include "lendsim/rng.hpp"

namespace lendsim::fixtures {

choice::PreferenceParams experiment_preference_params() {
  choice::PreferenceParams p;
  p.alpha_mean = -0.385;
  p.alpha_sd = 0.079;
  p.beta_mean = 0.298;
  p.beta_sd = 0.074;
  p.gamma_mean = -0.191;
  p.gamma_sd = 0.079;
  p.omega = 1.0;
  return p;
}

pool::FixedEffectSet experiment_fixed_effects(int n) {
  if (n < 2) {
    throw ConfigError("fixed-effect fixture needs n >= 2");
  }
  pool::FixedEffectSet fe;
  fe.values.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    fe.values.push_back(0.64 * static_cast<double>(i) /
                        static_cast<double>(n - 1));
  }
  return fe;
}

pool::CalibrationTable stylized_calibration() {
  pool::CalibrationTable t;
  for (int d = 0; d < pool::kNumDeciles; ++d) {
    t.male_by_decile[d] = 0.198;
    t.smile_by_decile_gender[0][d] = 0.77;
    t.smile_by_decile_gender[1][d] = 0.33;
    t.bodyshot_by_decile_gender[0][d] = 0.22;
    t.bodyshot_by_decile_gender[1][d] = 0.26;
  }
  return t;
}

runner::Scenario default_scenario(policy::PolicyKind kind,
                                  std::uint64_t master_seed) {
  runner::Scenario s;
  s.policy.kind = kind;
  s.pool_size = 22;
  s.n_sims = 50;
  s.n_lenders = 500;
  s.omega = 1.0;
  s.prefs = experiment_preference_params();
  s.fe_set = experiment_fixed_effects();
  s.calib = stylized_calibration();
  s.master_seed = master_seed;
  return s;
}

std::vector<policy::PolicySpec> all_policies(int market_size) {
  std::vector<policy::PolicySpec> specs;
  for (auto kind : {policy::PolicyKind::Baseline, policy::PolicyKind::Benchmark,
                    policy::PolicyKind::Naive,
                    policy::PolicyKind::PartialCompliance,
                    policy::PolicyKind::LowTypeSupport,
                    policy::PolicyKind::RestrictCompetition,
                    policy::PolicyKind::Hybrid}) {
    policy::PolicySpec spec;
    spec.kind = kind;
    spec.market_size = market_size;
    specs.push_back(spec);
  }
  return specs;
}

namespace {

std::string padded_id(const char* prefix, int i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, i);
  return buf;
}

}  // namespace

std::vector<estimate::ChoiceRecord> make_choice_records(
    int n_pairs, const choice::LenderPrefs& truth,
    const std::vector<double>& profile_fes, std::uint64_t seed) {
  if (profile_fes.size() < 2) {
    throw ConfigError("choice fixture needs at least two profiles");
  }
  RngStream rng = RngStream::from_keys(seed, {0x43484f49ULL});
  const auto n_profiles = profile_fes.size();

  std::vector<estimate::ChoiceRecord> records;
  records.reserve(static_cast<std::size_t>(n_pairs));
  for (int i = 0; i < n_pairs; ++i) {
    estimate::ChoiceRecord r;
    // Six pairs per subject, mirroring the survey protocol.
    r.subject_id = padded_id("s", i / 6 + 1, 5);
    r.pair_id = padded_id("q", i + 1, 7);

    const auto first = rng.uniform_int(n_profiles);
    auto second = rng.uniform_int(n_profiles - 1);
    if (second >= first) ++second;
    const std::size_t profile_idx[2] = {first, second};

    double v[2];
    for (int k = 0; k < 2; ++k) {
      auto& opt = r.options[static_cast<std::size_t>(k)];
      opt.profile_id =
          padded_id("p", static_cast<int>(profile_idx[k]) + 1, 2);
      opt.male = rng.bernoulli(0.5);
      opt.smile = rng.bernoulli(0.5);
      opt.bodyshot = rng.bernoulli(0.5);
      v[k] = truth.alpha * (opt.male ? 1.0 : 0.0) +
             truth.beta * (opt.smile ? 1.0 : 0.0) +
             truth.gamma * (opt.bodyshot ? 1.0 : 0.0) +
             profile_fes[profile_idx[k]];
    }
    const double p1 = 1.0 / (1.0 + std::exp(v[0] - v[1]));
    r.chosen = rng.bernoulli(p1) ? 1 : 0;
    records.push_back(std::move(r));
  }
  return records;
}

CampaignFixture make_campaign_records(int n, std::uint64_t seed,
                                      int campaigns_per_week) {
  if (n < 1 || campaigns_per_week < 1) {
    throw ConfigError("campaign fixture needs positive sizes");
  }
  RngStream rng = RngStream::from_keys(seed, {0x43414d50ULL});

  // Gender-conditional style rates chosen so the overall marginals are
  // male 0.198, smile 0.498 and bodyshot 0.406.
  const double smile_male = 0.33;
  const double smile_female = (0.498 - 0.198 * smile_male) / 0.802;
  const double bodyshot_male = 0.26;
  const double bodyshot_female = (0.406 - 0.198 * bodyshot_male) / 0.802;

  CampaignFixture fx;
  fx.records.reserve(static_cast<std::size_t>(n));
  fx.fe.reserve(static_cast<std::size_t>(n));
  fx.week.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    pool::CampaignRecord r;
    const double fe = 0.64 * rng.uniform01();
    // Male share declines across fixed-effect deciles, mean 0.198.
    const int decile = std::min(static_cast<int>(fe / 0.064), 9);
    const double p_male = 0.297 - 0.022 * decile;
    r.male = rng.bernoulli(p_male);
    r.smile = rng.bernoulli(r.male ? smile_male : smile_female);
    r.bodyshot = rng.bernoulli(r.male ? bodyshot_male : bodyshot_female);
    r.defaulted = rng.bernoulli(0.05);

    // Outcomes: log-normal noise plus feature effects, means near the
    // platform's 104.6 cash per day and 13.2 days to raise.
    const double effect = 0.15 * (r.smile ? 1.0 : 0.0) -
                          0.10 * (r.bodyshot ? 1.0 : 0.0) -
                          0.30 * (r.male ? 1.0 : 0.0) + 0.5 * fe;
    r.cash_per_day = std::exp(rng.normal(4.20, 0.80) + effect);
    r.days_to_raise =
        std::max(1.0, std::round(std::exp(rng.normal(2.40, 0.60) - effect)));
    r.loan_amount = std::max(25.0, std::round(std::exp(rng.normal(6.28, 0.90))));

    fx.records.push_back(r);
    fx.fe.push_back(fe);
    fx.week.push_back(i / campaigns_per_week + 1);
  }
  return fx;
}

}  // namespace lendsim::fixtures
