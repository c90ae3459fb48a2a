#pragma once

#include <vector>

#include "lendsim/pool.hpp"
#include "lendsim/rng.hpp"

namespace lendsim::choice {

// Population distribution of lender preference coefficients plus the
// outside-option utility.
struct PreferenceParams {
  double alpha_mean = 0.0;  // male
  double alpha_sd = 0.0;
  double beta_mean = 0.0;   // smile
  double beta_sd = 0.0;
  double gamma_mean = 0.0;  // bodyshot
  double gamma_sd = 0.0;
  double omega = 1.0;       // outside-option utility

  void validate() const;
};

struct LenderPrefs {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// The subset of the pool shown to one lender, plus the outside option.
struct Market {
  std::vector<pool::BorrowerProfile> profiles;
  double outside_utility = 0.0;
};

inline constexpr int kOutsideOption = -1;

struct ChoiceOutcome {
  int chosen = kOutsideOption;  // borrower id, or kOutsideOption

  bool is_outside() const { return chosen == kOutsideOption; }
};

// Independent normal draws for (alpha, beta, gamma), in that order.
LenderPrefs draw_prefs(const PreferenceParams& params, RngStream& rng);

// alpha*male + beta*smile + gamma*bodyshot + eta.
double systematic_utility(const pool::BorrowerProfile& profile,
                          const LenderPrefs& prefs);

struct ChoiceProbabilities {
  std::vector<double> borrower;  // aligned with market.profiles
  double outside = 0.0;
};

// Multinomial logit over systematic utilities and the outside utility,
// stabilized with log-sum-exp.
ChoiceProbabilities choice_probs(const Market& market,
                                 const LenderPrefs& prefs);

// Argmax of systematic utility plus an iid standard Gumbel draw per option;
// draw order is market order, outside option last.
ChoiceOutcome simulate_choice(const Market& market, const LenderPrefs& prefs,
                              RngStream& rng);

}  // namespace lendsim::choice
