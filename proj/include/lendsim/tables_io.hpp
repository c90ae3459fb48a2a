#pragma once

#include <filesystem>
#include <vector>

#include "lendsim/csv.hpp"
#include "lendsim/estimate.hpp"
#include "lendsim/pool.hpp"

namespace lendsim::io {

// Calibration tables round-trip through CSV with full double precision:
// columns decile, male, smile_female, smile_male, bodyshot_female,
// bodyshot_male; one row per decile 1..10.
pool::CalibrationTable read_calibration_csv(const std::filesystem::path& path);
void write_calibration_csv(const std::filesystem::path& path,
                           const pool::CalibrationTable& table);

// Fixed-effect sets: single column `fe`.
pool::FixedEffectSet read_fixed_effects_csv(const std::filesystem::path& path);
void write_fixed_effects_csv(const std::filesystem::path& path,
                             const pool::FixedEffectSet& fe_set);

// Campaign CSV: required columns cash_per_day, days_to_raise, default,
// loan_amount, male, smile, bodyshot; anything else rides along in `raw`.
struct CampaignData {
  std::vector<pool::CampaignRecord> records;
  CsvTable raw;

  std::vector<double> numeric_column(const std::string& name) const;
  bool has_column(const std::string& name) const { return raw.column(name) >= 0; }
};

CampaignData read_campaign_csv(const std::filesystem::path& path);
void write_campaign_csv(const std::filesystem::path& path,
                        const std::vector<pool::CampaignRecord>& records,
                        const std::vector<double>& fe,
                        const std::vector<int>& week = {});

// Paired-choice CSV: subject_id, pair_id, option_index, profile_id, male,
// smile, bodyshot, chosen; exactly two rows per pair, exactly one chosen.
std::vector<estimate::ChoiceRecord> read_choice_csv(
    const std::filesystem::path& path);
void write_choice_csv(const std::filesystem::path& path,
                      const std::vector<estimate::ChoiceRecord>& records);

}  // namespace lendsim::io
