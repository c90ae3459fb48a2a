#include "lendsim/choice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lendsim/errors.hpp"

namespace lendsim::choice {

void PreferenceParams::validate() const {
  for (double v : {alpha_mean, alpha_sd, beta_mean, beta_sd, gamma_mean,
                   gamma_sd, omega}) {
    if (!std::isfinite(v)) {
      throw ConfigError("preference parameters must be finite");
    }
  }
  if (alpha_sd < 0.0 || beta_sd < 0.0 || gamma_sd < 0.0) {
    throw ConfigError("preference standard deviations must be >= 0");
  }
}

LenderPrefs draw_prefs(const PreferenceParams& params, RngStream& rng) {
  LenderPrefs prefs;
  prefs.alpha = rng.normal(params.alpha_mean, params.alpha_sd);
  prefs.beta = rng.normal(params.beta_mean, params.beta_sd);
  prefs.gamma = rng.normal(params.gamma_mean, params.gamma_sd);
  return prefs;
}

double systematic_utility(const pool::BorrowerProfile& profile,
                          const LenderPrefs& prefs) {
  return prefs.alpha * (profile.male ? 1.0 : 0.0) +
         prefs.beta * (profile.smile ? 1.0 : 0.0) +
         prefs.gamma * (profile.bodyshot ? 1.0 : 0.0) + profile.eta;
}

ChoiceProbabilities choice_probs(const Market& market,
                                 const LenderPrefs& prefs) {
  if (market.profiles.empty()) {
    throw ConfigError("choice probabilities require a non-empty market");
  }
  std::vector<double> v(market.profiles.size());
  double vmax = market.outside_utility;
  for (std::size_t i = 0; i < market.profiles.size(); ++i) {
    v[i] = systematic_utility(market.profiles[i], prefs);
    vmax = std::max(vmax, v[i]);
  }
  double denom = std::exp(market.outside_utility - vmax);
  for (double& vi : v) {
    vi = std::exp(vi - vmax);
    denom += vi;
  }
  ChoiceProbabilities probs;
  probs.borrower.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    probs.borrower[i] = v[i] / denom;
  }
  probs.outside = std::exp(market.outside_utility - vmax) / denom;
  return probs;
}

ChoiceOutcome simulate_choice(const Market& market, const LenderPrefs& prefs,
                              RngStream& rng) {
  if (market.profiles.empty()) {
    throw ConfigError("choice simulation requires a non-empty market");
  }
  int best = kOutsideOption;
  double best_u = -std::numeric_limits<double>::infinity();
  for (const auto& p : market.profiles) {
    const double u = systematic_utility(p, prefs) + rng.gumbel();
    if (u > best_u) {
      best_u = u;
      best = p.id;
    }
  }
  const double outside = market.outside_utility + rng.gumbel();
  if (outside > best_u) {
    best = kOutsideOption;
  }
  return ChoiceOutcome{best};
}

}  // namespace lendsim::choice
