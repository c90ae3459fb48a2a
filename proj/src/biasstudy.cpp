#include "lendsim/biasstudy.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "lendsim/econtools.hpp"
#include "lendsim/errors.hpp"
#include "lendsim/rng.hpp"

namespace lendsim::biasstudy {

void BiasStudySpec::validate() const {
  for (double p : {fn_rate, fp_rate, treated_share}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("bias study rates must be in [0, 1]");
    }
  }
  if (n_units < 2 || n_sims < 1) {
    throw ConfigError("bias study needs n_units >= 2 and n_sims >= 1");
  }
  if (sd < 0.0) {
    throw ConfigError("bias study sd must be >= 0");
  }
}

double attenuated_coefficient(const BiasStudySpec& spec) {
  const double t = spec.treated_share;
  // Observed-arm masses and outcome mixtures.
  const double w1 = t * (1.0 - spec.fn_rate) + (1.0 - t) * spec.fp_rate;
  const double w0 = t * spec.fn_rate + (1.0 - t) * (1.0 - spec.fp_rate);
  if (w1 <= 0.0 || w0 <= 0.0) {
    throw NumericError("an observed arm has zero mass");
  }
  const double e1 = (t * (1.0 - spec.fn_rate) * spec.mean_treated +
                     (1.0 - t) * spec.fp_rate * spec.mean_untreated) / w1;
  const double e0 = (t * spec.fn_rate * spec.mean_treated +
                     (1.0 - t) * (1.0 - spec.fp_rate) * spec.mean_untreated) / w0;
  return e1 - e0;
}

BiasStudyResult run_bias_study(const BiasStudySpec& spec, std::uint64_t seed) {
  spec.validate();

  BiasStudyResult result;
  result.coefficients.reserve(static_cast<std::size_t>(spec.n_sims));
  for (int sim = 0; sim < spec.n_sims; ++sim) {
    RngStream rng = RngStream::from_keys(
        seed, {static_cast<std::uint64_t>(sim), 0x42494153ULL});

    Eigen::VectorXd y(spec.n_units);
    Eigen::MatrixXd X(spec.n_units, 2);
    X.col(0).setOnes();
    int observed_treated = 0;
    for (int i = 0; i < spec.n_units; ++i) {
      const bool treated = rng.bernoulli(spec.treated_share);
      y[i] = rng.normal(treated ? spec.mean_treated : spec.mean_untreated,
                        spec.sd);
      bool observed = treated;
      if (treated && rng.bernoulli(spec.fn_rate)) observed = false;
      if (!treated && rng.bernoulli(spec.fp_rate)) observed = true;
      X(i, 1) = observed ? 1.0 : 0.0;
      observed_treated += observed ? 1 : 0;
    }
    if (observed_treated == 0 || observed_treated == spec.n_units) {
      ++result.degenerate_sims;
      continue;
    }
    const auto fit = econtools::ols(y, X, {"intercept", "observed"});
    result.coefficients.push_back(fit.coef[1]);
  }

  const auto n = static_cast<double>(result.coefficients.size());
  if (n == 0.0) {
    throw NumericError("all simulations were degenerate");
  }
  double sum = 0.0;
  for (double c : result.coefficients) sum += c;
  result.mean_coef = sum / n;
  double ss = 0.0;
  for (double c : result.coefficients) {
    ss += (c - result.mean_coef) * (c - result.mean_coef);
  }
  result.se_of_mean = n > 1.0 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;

  const double truth = spec.mean_treated - spec.mean_untreated;
  result.relative_bias =
      truth != 0.0 ? (result.mean_coef - truth) / truth : 0.0;
  return result;
}

}  // namespace lendsim::biasstudy
