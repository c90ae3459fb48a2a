#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "lendsim/rng.hpp"

namespace lendsim::pool {

// One borrowing campaign in a simulated pool.  male is the borrower's type;
// smile/bodyshot are style flags a policy may transform; eta is the profile
// fixed effect in utility units.
struct BorrowerProfile {
  int id = 0;
  double eta = 0.0;
  bool male = false;
  bool smile = false;
  bool bodyshot = false;
};

// The set of experimentally estimated fixed effects that pool draws and
// decile assignment are defined against.
struct FixedEffectSet {
  std::vector<double> values;

  void validate() const;  // non-empty, all finite
};

inline constexpr int kNumDeciles = 10;

// Decile-conditional feature frequencies.  Style cells are indexed
// [male ? 1 : 0][decile - 1].
struct CalibrationTable {
  std::array<double, kNumDeciles> male_by_decile{};
  std::array<std::array<double, kNumDeciles>, 2> smile_by_decile_gender{};
  std::array<std::array<double, kNumDeciles>, 2> bodyshot_by_decile_gender{};

  void validate() const;  // all probabilities in [0, 1]

  // Uniform-decile pooled marginals (diagnostics and tests).
  double male_marginal() const;
  double smile_marginal() const;
  double bodyshot_marginal() const;
};

struct BorrowerPool {
  std::vector<BorrowerProfile> profiles;

  int size() const { return static_cast<int>(profiles.size()); }
  double male_share() const;
};

// Rank-based decile of eta within fe_set: rank = #{v <= eta}, decile =
// ceil(10 * rank / n) clamped to [1, 10], so boundary values land in the
// lower decile, values below the minimum in decile 1, above the maximum in
// decile 10.
int decile_of(double eta, const FixedEffectSet& fe_set);

// Same, against a pre-sorted ascending span (hot path for calibration).
int decile_of_sorted(double eta, std::span<const double> sorted_fe);

// Draws pool_size profiles: eta uniform with replacement from fe_set, male ~
// Bernoulli(male_by_decile[D(eta)]), then smile and bodyshot from the
// (decile, male) cells.  Draw order per profile is eta, male, smile,
// bodyshot, so the result is a pure function of the stream state.
BorrowerPool draw_pool(const FixedEffectSet& fe_set,
                       const CalibrationTable& calib, int pool_size,
                       RngStream& rng);

// One ingested campaign row.  Extra CSV columns ride along in covariates.
struct CampaignRecord {
  double cash_per_day = 0.0;
  double days_to_raise = 0.0;
  bool defaulted = false;
  double loan_amount = 0.0;
  bool male = false;
  bool smile = false;
  bool bodyshot = false;
};

// Cells that had no observations and were backfilled, for diagnostics.
struct CalibrationDiagnostics {
  std::vector<std::string> backfilled_cells;
};

// Empirical conditional frequencies per (decile of fe_estimate, male) cell.
// Empty style cells back off to the gender-pooled decile rate, empty deciles
// to the overall rate; every backfill is flagged in diagnostics.
CalibrationTable build_calibration(std::span<const CampaignRecord> records,
                                   std::span<const double> fe_estimates,
                                   CalibrationDiagnostics* diagnostics = nullptr);

}  // namespace lendsim::pool
