#include "lendsim/pool.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lendsim/errors.hpp"

namespace lendsim::pool {

void FixedEffectSet::validate() const {
  if (values.empty()) {
    throw ConfigError("fixed-effect set is empty");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw ConfigError("fixed-effect set contains a non-finite value");
    }
  }
}

void CalibrationTable::validate() const {
  auto check = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(std::string("calibration probability out of [0,1]: ") +
                        what);
    }
  };
  for (int d = 0; d < kNumDeciles; ++d) {
    check(male_by_decile[d], "male");
    for (int g = 0; g < 2; ++g) {
      check(smile_by_decile_gender[g][d], "smile");
      check(bodyshot_by_decile_gender[g][d], "bodyshot");
    }
  }
}

double CalibrationTable::male_marginal() const {
  double s = 0.0;
  for (double p : male_by_decile) s += p;
  return s / kNumDeciles;
}

double CalibrationTable::smile_marginal() const {
  double s = 0.0;
  for (int d = 0; d < kNumDeciles; ++d) {
    const double pm = male_by_decile[d];
    s += pm * smile_by_decile_gender[1][d] +
         (1.0 - pm) * smile_by_decile_gender[0][d];
  }
  return s / kNumDeciles;
}

double CalibrationTable::bodyshot_marginal() const {
  double s = 0.0;
  for (int d = 0; d < kNumDeciles; ++d) {
    const double pm = male_by_decile[d];
    s += pm * bodyshot_by_decile_gender[1][d] +
         (1.0 - pm) * bodyshot_by_decile_gender[0][d];
  }
  return s / kNumDeciles;
}

double BorrowerPool::male_share() const {
  if (profiles.empty()) return 0.0;
  int m = 0;
  for (const auto& p : profiles) m += p.male ? 1 : 0;
  return static_cast<double>(m) / static_cast<double>(profiles.size());
}

int decile_of_sorted(double eta, std::span<const double> sorted_fe) {
  const auto n = static_cast<long>(sorted_fe.size());
  const long rank =
      std::upper_bound(sorted_fe.begin(), sorted_fe.end(), eta) -
      sorted_fe.begin();
  // ceil(10 * rank / n), clamped so out-of-range etas map to 1 or 10.
  const long d = (10 * rank + n - 1) / n;
  return static_cast<int>(std::clamp(d, 1L, 10L));
}

int decile_of(double eta, const FixedEffectSet& fe_set) {
  fe_set.validate();
  std::vector<double> sorted(fe_set.values);
  std::sort(sorted.begin(), sorted.end());
  return decile_of_sorted(eta, sorted);
}

BorrowerPool draw_pool(const FixedEffectSet& fe_set,
                       const CalibrationTable& calib, int pool_size,
                       RngStream& rng) {
  fe_set.validate();
  calib.validate();
  if (pool_size < 1) {
    throw ConfigError("pool size must be >= 1");
  }

  std::vector<double> sorted(fe_set.values);
  std::sort(sorted.begin(), sorted.end());

  BorrowerPool pool;
  pool.profiles.reserve(static_cast<std::size_t>(pool_size));
  for (int i = 0; i < pool_size; ++i) {
    BorrowerProfile p;
    p.id = i;
    p.eta = fe_set.values[rng.uniform_int(fe_set.values.size())];
    const int d = decile_of_sorted(p.eta, sorted) - 1;
    p.male = rng.bernoulli(calib.male_by_decile[d]);
    const int g = p.male ? 1 : 0;
    p.smile = rng.bernoulli(calib.smile_by_decile_gender[g][d]);
    p.bodyshot = rng.bernoulli(calib.bodyshot_by_decile_gender[g][d]);
    pool.profiles.push_back(p);
  }
  return pool;
}

namespace {

struct CellAccum {
  long n = 0;
  long smile = 0;
  long bodyshot = 0;
};

}  // namespace

CalibrationTable build_calibration(std::span<const CampaignRecord> records,
                                   std::span<const double> fe_estimates,
                                   CalibrationDiagnostics* diagnostics) {
  if (records.empty()) {
    throw SchemaError("cannot calibrate from an empty record set");
  }
  if (records.size() != fe_estimates.size()) {
    throw SchemaError("fixed-effect estimates not aligned with records");
  }

  std::vector<double> sorted(fe_estimates.begin(), fe_estimates.end());
  std::sort(sorted.begin(), sorted.end());

  // Accumulate per (decile, gender) cell and per decile.
  std::array<std::array<CellAccum, kNumDeciles>, 2> cells{};
  std::array<long, kNumDeciles> decile_n{};
  std::array<long, kNumDeciles> decile_male{};
  long total_male = 0, total_smile = 0, total_bodyshot = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const int d = decile_of_sorted(fe_estimates[i], sorted) - 1;
    const int g = r.male ? 1 : 0;
    ++cells[g][d].n;
    cells[g][d].smile += r.smile ? 1 : 0;
    cells[g][d].bodyshot += r.bodyshot ? 1 : 0;
    ++decile_n[d];
    decile_male[d] += r.male ? 1 : 0;
    total_male += r.male ? 1 : 0;
    total_smile += r.smile ? 1 : 0;
    total_bodyshot += r.bodyshot ? 1 : 0;
  }

  const double n_all = static_cast<double>(records.size());
  auto flag = [&](const std::string& cell) {
    if (diagnostics != nullptr) diagnostics->backfilled_cells.push_back(cell);
  };

  CalibrationTable table;
  for (int d = 0; d < kNumDeciles; ++d) {
    const std::string dlab = "decile " + std::to_string(d + 1);
    if (decile_n[d] > 0) {
      table.male_by_decile[d] =
          static_cast<double>(decile_male[d]) / decile_n[d];
    } else {
      table.male_by_decile[d] = total_male / n_all;
      flag("male | " + dlab);
    }
    const double pooled_smile =
        decile_n[d] > 0 ? static_cast<double>(cells[0][d].smile +
                                              cells[1][d].smile) / decile_n[d]
                        : total_smile / n_all;
    const double pooled_bodyshot =
        decile_n[d] > 0 ? static_cast<double>(cells[0][d].bodyshot +
                                              cells[1][d].bodyshot) / decile_n[d]
                        : total_bodyshot / n_all;
    for (int g = 0; g < 2; ++g) {
      const std::string glab = g == 1 ? "male" : "female";
      if (cells[g][d].n > 0) {
        table.smile_by_decile_gender[g][d] =
            static_cast<double>(cells[g][d].smile) / cells[g][d].n;
        table.bodyshot_by_decile_gender[g][d] =
            static_cast<double>(cells[g][d].bodyshot) / cells[g][d].n;
      } else {
        table.smile_by_decile_gender[g][d] = pooled_smile;
        table.bodyshot_by_decile_gender[g][d] = pooled_bodyshot;
        flag("smile/bodyshot | " + glab + ", " + dlab);
      }
    }
  }
  return table;
}

}  // namespace lendsim::pool
