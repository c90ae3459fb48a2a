#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lendsim/pool.hpp"
#include "lendsim/rng.hpp"

namespace lendsim::metrics {

// Gini coefficient: sum_{j,j'} |x_j - x_j'| / (2 n^2 xbar), computed via the
// O(n log n) sorted form.  Inputs must be nonnegative with positive mean.
double gini(std::span<const double> values);

// Lorenz curve over sorted ascending values: n+1 points from (0,0) to (1,1),
// coordinates (population share, cumulative outcome share).
struct LorenzCurve {
  std::vector<std::pair<double, double>> points;

  // Trapezoid area under the curve; gini == 1 - 2 * area.
  double area_under() const;
};

LorenzCurve lorenz(std::span<const double> values);

// Choice counts over a full borrower pool, including never-shown borrowers.
// counts is aligned with pool.profiles; sum(counts) + outside_count equals
// the number of simulated lenders.
struct OutcomeTally {
  std::vector<std::int64_t> counts;
  std::int64_t outside_count = 0;
  pool::BorrowerPool pool;

  std::int64_t inside_total() const;
  std::int64_t lender_total() const { return inside_total() + outside_count; }
};

// Share of lenders choosing any borrower rather than the outside option.
double efficiency(const OutcomeTally& tally);

// Summed market share of the floor(n/3) borrowers with the lowest choice
// counts (ties broken by id).  Zero inside choices yields 0.
double bottom_tercile_share(const OutcomeTally& tally);

struct MaleSelection {
  double ratio;      // raw share divided by the pool's male share
  double raw_share;  // male choices / inside choices
};

MaleSelection male_selection_ratio(const OutcomeTally& tally);

// Solves 2*Phi(sigma/sqrt 2) - 1 = target_gini for the log-normal sigma by
// bracketed bisection (interval tolerance 1e-10).
double lognormal_sigma_for_gini(double target_gini);

// Draws n values from a log-normal whose mean matches mean(baseline) and
// whose Gini is (1 + gini_delta_pct) * gini(baseline), then scales everything
// by (1 + eff_delta_pct).
std::vector<double> synthesize_counterfactual_outcomes(
    std::span<const double> baseline, double gini_delta_pct,
    double eff_delta_pct, std::size_t n, RngStream& rng);

// Caps values at the given upper percentile (type-7 quantile).
std::vector<double> winsorize(std::span<const double> values,
                              double upper_pct);

double normal_cdf(double x);

}  // namespace lendsim::metrics
