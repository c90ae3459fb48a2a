#include "lendsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lendsim/errors.hpp"

namespace lendsim::metrics {

namespace {

void check_nonnegative(std::span<const double> values) {
  if (values.empty()) {
    throw NumericError("metric requires a non-empty input");
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw NumericError("metric requires finite nonnegative values");
    }
  }
}

}  // namespace

double gini(std::span<const double> values) {
  check_nonnegative(values);
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double total = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += x[i];
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * x[i];
  }
  if (total <= 0.0) {
    throw NumericError("Gini undefined for an all-zero vector");
  }
  return weighted / (n * total);
}

double LorenzCurve::area_under() const {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dx = points[i].first - points[i - 1].first;
    area += dx * (points[i].second + points[i - 1].second) / 2.0;
  }
  return area;
}

LorenzCurve lorenz(std::span<const double> values) {
  check_nonnegative(values);
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  if (total <= 0.0) {
    throw NumericError("Lorenz curve undefined for an all-zero vector");
  }
  LorenzCurve curve;
  curve.points.reserve(x.size() + 1);
  curve.points.emplace_back(0.0, 0.0);
  double cum = 0.0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    cum += x[i];
    curve.points.emplace_back(static_cast<double>(i + 1) / n, cum / total);
  }
  return curve;
}

std::int64_t OutcomeTally::inside_total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

double efficiency(const OutcomeTally& tally) {
  const std::int64_t lenders = tally.lender_total();
  if (lenders <= 0) {
    throw NumericError("efficiency requires at least one lender");
  }
  return 1.0 - static_cast<double>(tally.outside_count) /
                   static_cast<double>(lenders);
}

double bottom_tercile_share(const OutcomeTally& tally) {
  const auto n = tally.counts.size();
  if (n == 0 || tally.pool.profiles.size() != n) {
    throw NumericError("tally counts not aligned with pool");
  }
  const std::int64_t inside = tally.inside_total();
  if (inside == 0) return 0.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tally.counts[a] != tally.counts[b])
      return tally.counts[a] < tally.counts[b];
    return tally.pool.profiles[a].id < tally.pool.profiles[b].id;
  });

  const std::size_t k = n / 3;
  std::int64_t bottom = 0;
  for (std::size_t i = 0; i < k; ++i) bottom += tally.counts[order[i]];
  return static_cast<double>(bottom) / static_cast<double>(inside);
}

MaleSelection male_selection_ratio(const OutcomeTally& tally) {
  const std::int64_t inside = tally.inside_total();
  if (inside <= 0) {
    throw NumericError("male selection ratio requires inside choices");
  }
  const double pool_share = tally.pool.male_share();
  if (pool_share <= 0.0) {
    throw NumericError("male selection ratio requires male borrowers in pool");
  }
  std::int64_t male_choices = 0;
  for (std::size_t i = 0; i < tally.counts.size(); ++i) {
    if (tally.pool.profiles[i].male) male_choices += tally.counts[i];
  }
  const double raw =
      static_cast<double>(male_choices) / static_cast<double>(inside);
  return MaleSelection{raw / pool_share, raw};
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double lognormal_sigma_for_gini(double target_gini) {
  if (!(target_gini > 0.0 && target_gini < 1.0)) {
    throw NumericError("log-normal Gini target must be in (0, 1)");
  }
  auto f = [target_gini](double sigma) {
    return 2.0 * normal_cdf(sigma / std::numbers::sqrt2) - 1.0 - target_gini;
  };
  double lo = 0.0, hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;  // f(40) ~ 1 - target > 0, terminates early
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> synthesize_counterfactual_outcomes(
    std::span<const double> baseline, double gini_delta_pct,
    double eff_delta_pct, std::size_t n, RngStream& rng) {
  const double base_gini = gini(baseline);
  const double base_mean =
      std::accumulate(baseline.begin(), baseline.end(), 0.0) /
      static_cast<double>(baseline.size());
  if (!(base_mean > 0.0)) {
    throw NumericError("baseline mean must be positive");
  }
  const double target_gini = (1.0 + gini_delta_pct) * base_gini;
  const double sigma = lognormal_sigma_for_gini(target_gini);
  const double mu = std::log(base_mean) - 0.5 * sigma * sigma;

  std::vector<double> out(n);
  const double scale = 1.0 + eff_delta_pct;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = scale * std::exp(rng.normal(mu, sigma));
  }
  return out;
}

std::vector<double> winsorize(std::span<const double> values,
                              double upper_pct) {
  check_nonnegative(values);
  if (!(upper_pct > 0.0 && upper_pct <= 1.0)) {
    throw ConfigError("winsorization percentile must be in (0, 1]");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // Type-7 quantile: linear interpolation between order statistics.
  const double h = upper_pct * (static_cast<double>(sorted.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double cap = sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);

  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v = std::min(v, cap);
  return out;
}

}  // namespace lendsim::metrics
