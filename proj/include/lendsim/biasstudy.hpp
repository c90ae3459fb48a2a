#pragma once

#include <cstdint>
#include <vector>

namespace lendsim::biasstudy {

// Measurement-error simulation: a binary feature is observed through a
// classifier with the given false-negative / false-positive rates and the
// per-simulation OLS coefficient quantifies the attenuation.
struct BiasStudySpec {
  double fn_rate = 0.34;
  double fp_rate = 0.0;
  int n_units = 100000;
  int n_sims = 1000;
  double mean_untreated = 1.0;
  double mean_treated = 1.3;
  double sd = 1.0;
  double treated_share = 0.5;

  void validate() const;
};

struct BiasStudyResult {
  double mean_coef = 0.0;
  double se_of_mean = 0.0;
  double relative_bias = 0.0;  // vs the true effect
  int degenerate_sims = 0;     // dropped: all units in one observed arm
  std::vector<double> coefficients;
};

BiasStudyResult run_bias_study(const BiasStudySpec& spec, std::uint64_t seed);

// Population coefficient under misclassification:
// E[y | observed = 1] - E[y | observed = 0].
double attenuated_coefficient(const BiasStudySpec& spec);

}  // namespace lendsim::biasstudy
