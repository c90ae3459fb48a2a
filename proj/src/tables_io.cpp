#include "lendsim/tables_io.hpp"

#include <map>

#include "lendsim/errors.hpp"

namespace lendsim::io {

pool::CalibrationTable read_calibration_csv(
    const std::filesystem::path& path) {
  const CsvTable csv = read_csv(path);
  const int c_decile = csv.require_column("decile");
  const int c_male = csv.require_column("male");
  const int c_sf = csv.require_column("smile_female");
  const int c_sm = csv.require_column("smile_male");
  const int c_bf = csv.require_column("bodyshot_female");
  const int c_bm = csv.require_column("bodyshot_male");
  if (csv.rows.size() != pool::kNumDeciles) {
    throw SchemaError("calibration table must have exactly 10 decile rows");
  }
  pool::CalibrationTable table;
  std::array<bool, pool::kNumDeciles> seen{};
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    const std::size_t line = i + 2;
    const int d = static_cast<int>(
        parse_double_cell(row[static_cast<std::size_t>(c_decile)], line, "decile"));
    if (d < 1 || d > pool::kNumDeciles) {
      throw SchemaError("row " + std::to_string(line) +
                        ": decile out of range 1..10");
    }
    if (seen[static_cast<std::size_t>(d - 1)]) {
      throw SchemaError("row " + std::to_string(line) + ": duplicate decile " +
                        std::to_string(d));
    }
    seen[static_cast<std::size_t>(d - 1)] = true;
    auto cell = [&](int col, const char* name) {
      return parse_double_cell(row[static_cast<std::size_t>(col)], line, name);
    };
    table.male_by_decile[static_cast<std::size_t>(d - 1)] = cell(c_male, "male");
    table.smile_by_decile_gender[0][static_cast<std::size_t>(d - 1)] =
        cell(c_sf, "smile_female");
    table.smile_by_decile_gender[1][static_cast<std::size_t>(d - 1)] =
        cell(c_sm, "smile_male");
    table.bodyshot_by_decile_gender[0][static_cast<std::size_t>(d - 1)] =
        cell(c_bf, "bodyshot_female");
    table.bodyshot_by_decile_gender[1][static_cast<std::size_t>(d - 1)] =
        cell(c_bm, "bodyshot_male");
  }
  table.validate();
  return table;
}

void write_calibration_csv(const std::filesystem::path& path,
                           const pool::CalibrationTable& table) {
  std::vector<std::vector<std::string>> rows;
  for (int d = 0; d < pool::kNumDeciles; ++d) {
    rows.push_back({std::to_string(d + 1),
                    format_double(table.male_by_decile[d], 17),
                    format_double(table.smile_by_decile_gender[0][d], 17),
                    format_double(table.smile_by_decile_gender[1][d], 17),
                    format_double(table.bodyshot_by_decile_gender[0][d], 17),
                    format_double(table.bodyshot_by_decile_gender[1][d], 17)});
  }
  write_csv(path,
            {"decile", "male", "smile_female", "smile_male", "bodyshot_female",
             "bodyshot_male"},
            rows);
}

pool::FixedEffectSet read_fixed_effects_csv(
    const std::filesystem::path& path) {
  const CsvTable csv = read_csv(path);
  const int c_fe = csv.require_column("fe");
  pool::FixedEffectSet fe_set;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    fe_set.values.push_back(parse_double_cell(
        csv.rows[i][static_cast<std::size_t>(c_fe)], i + 2, "fe"));
  }
  fe_set.validate();
  return fe_set;
}

void write_fixed_effects_csv(const std::filesystem::path& path,
                             const pool::FixedEffectSet& fe_set) {
  std::vector<std::vector<std::string>> rows;
  for (double v : fe_set.values) {
    rows.push_back({format_double(v, 17)});
  }
  write_csv(path, {"fe"}, rows);
}

std::vector<double> CampaignData::numeric_column(
    const std::string& name) const {
  const int col = raw.require_column(name);
  std::vector<double> out;
  out.reserve(raw.rows.size());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    out.push_back(parse_double_cell(raw.rows[i][static_cast<std::size_t>(col)],
                                    i + 2, name));
  }
  return out;
}

CampaignData read_campaign_csv(const std::filesystem::path& path) {
  CampaignData data;
  data.raw = read_csv(path);
  const int c_cash = data.raw.require_column("cash_per_day");
  const int c_days = data.raw.require_column("days_to_raise");
  const int c_default = data.raw.require_column("default");
  const int c_loan = data.raw.require_column("loan_amount");
  const int c_male = data.raw.require_column("male");
  const int c_smile = data.raw.require_column("smile");
  const int c_bodyshot = data.raw.require_column("bodyshot");
  data.records.reserve(data.raw.rows.size());
  for (std::size_t i = 0; i < data.raw.rows.size(); ++i) {
    const auto& row = data.raw.rows[i];
    const std::size_t line = i + 2;
    pool::CampaignRecord r;
    auto num = [&](int col, const char* name) {
      return parse_double_cell(row[static_cast<std::size_t>(col)], line, name);
    };
    auto flag = [&](int col, const char* name) {
      return parse_bool01_cell(row[static_cast<std::size_t>(col)], line, name);
    };
    r.cash_per_day = num(c_cash, "cash_per_day");
    r.days_to_raise = num(c_days, "days_to_raise");
    r.defaulted = flag(c_default, "default");
    r.loan_amount = num(c_loan, "loan_amount");
    r.male = flag(c_male, "male");
    r.smile = flag(c_smile, "smile");
    r.bodyshot = flag(c_bodyshot, "bodyshot");
    data.records.push_back(r);
  }
  return data;
}

void write_campaign_csv(const std::filesystem::path& path,
                        const std::vector<pool::CampaignRecord>& records,
                        const std::vector<double>& fe,
                        const std::vector<int>& week) {
  if (fe.size() != records.size()) {
    throw ConfigError("fixed effects not aligned with campaign records");
  }
  std::vector<std::string> header = {"cash_per_day", "days_to_raise",
                                     "default",      "loan_amount",
                                     "male",         "smile",
                                     "bodyshot",     "fe"};
  if (!week.empty()) header.push_back("week");
  std::vector<std::vector<std::string>> rows;
  rows.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::vector<std::string> row = {
        format_double(r.cash_per_day, 17), format_double(r.days_to_raise, 17),
        r.defaulted ? "1" : "0",           format_double(r.loan_amount, 17),
        r.male ? "1" : "0",                r.smile ? "1" : "0",
        r.bodyshot ? "1" : "0",            format_double(fe[i], 17)};
    if (!week.empty()) row.push_back(std::to_string(week[i]));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

std::vector<estimate::ChoiceRecord> read_choice_csv(
    const std::filesystem::path& path) {
  const CsvTable csv = read_csv(path);
  const int c_subject = csv.require_column("subject_id");
  const int c_pair = csv.require_column("pair_id");
  const int c_index = csv.require_column("option_index");
  const int c_profile = csv.require_column("profile_id");
  const int c_male = csv.require_column("male");
  const int c_smile = csv.require_column("smile");
  const int c_bodyshot = csv.require_column("bodyshot");
  const int c_chosen = csv.require_column("chosen");

  // Keyed by (subject, pair) in first-seen order.
  struct PairAccum {
    estimate::ChoiceRecord record;
    std::array<bool, 2> have{};
    int chosen_count = 0;
    std::size_t first_line = 0;
  };
  std::vector<PairAccum> pairs;
  std::map<std::pair<std::string, std::string>, std::size_t> index;

  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    const std::size_t line = i + 2;
    const std::string subject = row[static_cast<std::size_t>(c_subject)];
    const std::string pair = row[static_cast<std::size_t>(c_pair)];
    const auto opt_index = static_cast<int>(parse_double_cell(
        row[static_cast<std::size_t>(c_index)], line, "option_index"));
    if (opt_index != 0 && opt_index != 1) {
      throw SchemaError("row " + std::to_string(line) +
                        ": option_index must be 0 or 1");
    }
    auto key = std::make_pair(subject, pair);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, pairs.size());
      pairs.push_back(PairAccum{});
      it = index.find(key);
      pairs.back().record.subject_id = subject;
      pairs.back().record.pair_id = pair;
      pairs.back().first_line = line;
    }
    PairAccum& acc = pairs[it->second];
    if (acc.have[static_cast<std::size_t>(opt_index)]) {
      throw SchemaError("row " + std::to_string(line) + ": duplicate option " +
                        std::to_string(opt_index) + " for pair " + pair);
    }
    acc.have[static_cast<std::size_t>(opt_index)] = true;
    estimate::ChoiceOption& opt =
        acc.record.options[static_cast<std::size_t>(opt_index)];
    opt.profile_id = row[static_cast<std::size_t>(c_profile)];
    opt.male = parse_bool01_cell(row[static_cast<std::size_t>(c_male)], line,
                                 "male");
    opt.smile = parse_bool01_cell(row[static_cast<std::size_t>(c_smile)], line,
                                  "smile");
    opt.bodyshot = parse_bool01_cell(
        row[static_cast<std::size_t>(c_bodyshot)], line, "bodyshot");
    if (parse_bool01_cell(row[static_cast<std::size_t>(c_chosen)], line,
                          "chosen")) {
      acc.record.chosen = opt_index;
      ++acc.chosen_count;
    }
  }

  std::vector<estimate::ChoiceRecord> records;
  records.reserve(pairs.size());
  for (const auto& acc : pairs) {
    if (!acc.have[0] || !acc.have[1]) {
      throw SchemaError("pair " + acc.record.pair_id + " of subject " +
                        acc.record.subject_id + " (line " +
                        std::to_string(acc.first_line) +
                        ") is missing an option row");
    }
    if (acc.chosen_count != 1) {
      throw SchemaError("pair " + acc.record.pair_id + " of subject " +
                        acc.record.subject_id + " (line " +
                        std::to_string(acc.first_line) +
                        ") must have exactly one chosen row");
    }
    records.push_back(acc.record);
  }
  if (records.empty()) {
    throw SchemaError("choice file contains no pairs");
  }
  return records;
}

void write_choice_csv(const std::filesystem::path& path,
                      const std::vector<estimate::ChoiceRecord>& records) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(records.size() * 2);
  for (const auto& r : records) {
    for (int k = 0; k < 2; ++k) {
      const auto& o = r.options[static_cast<std::size_t>(k)];
      rows.push_back({r.subject_id, r.pair_id, std::to_string(k), o.profile_id,
                      o.male ? "1" : "0", o.smile ? "1" : "0",
                      o.bodyshot ? "1" : "0", r.chosen == k ? "1" : "0"});
    }
  }
  write_csv(path,
            {"subject_id", "pair_id", "option_index", "profile_id", "male",
             "smile", "bodyshot", "chosen"},
            rows);
}

}  // namespace lendsim::io
