#include "lendsim/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>

#include "lendsim/errors.hpp"
#include "lendsim/tables_io.hpp"

namespace lendsim::io {

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown key '" + context + key + "'");
    }
  }
}

double get_number(const json& obj, const std::string& key,
                  const std::string& context, double fallback,
                  bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError("missing key '" + context + key + "'");
    return fallback;
  }
  if (!obj[key].is_number()) {
    throw ConfigError("key '" + context + key + "' must be a number");
  }
  return obj[key].get<double>();
}

policy::PolicySpec parse_policy(const json& obj, const std::string& context,
                                const policy::PolicySpec& defaults) {
  if (obj.is_string()) {
    policy::PolicySpec spec = defaults;
    spec.kind = policy::policy_kind_from_string(obj.get<std::string>());
    return spec;
  }
  if (!obj.is_object()) {
    throw ConfigError("'" + context + "' must be an object or a kind string");
  }
  reject_unknown_keys(
      obj, {"kind", "compliance_prob", "restricted_size", "market_size"},
      context + ".");
  if (!obj.contains("kind") || !obj["kind"].is_string()) {
    throw ConfigError("missing key '" + context + ".kind'");
  }
  policy::PolicySpec spec = defaults;
  spec.kind = policy::policy_kind_from_string(obj["kind"].get<std::string>());
  spec.compliance_prob = get_number(obj, "compliance_prob", context + ".",
                                    defaults.compliance_prob);
  spec.restricted_size = static_cast<int>(get_number(
      obj, "restricted_size", context + ".", defaults.restricted_size));
  spec.market_size = static_cast<int>(
      get_number(obj, "market_size", context + ".", defaults.market_size));
  return spec;
}

choice::PreferenceParams parse_prefs(const json& obj) {
  if (!obj.is_object()) {
    throw ConfigError("'prefs' must be an object");
  }
  reject_unknown_keys(obj,
                      {"alpha_mean", "alpha_sd", "beta_mean", "beta_sd",
                       "gamma_mean", "gamma_sd"},
                      "prefs.");
  choice::PreferenceParams p;
  p.alpha_mean = get_number(obj, "alpha_mean", "prefs.", 0.0, true);
  p.alpha_sd = get_number(obj, "alpha_sd", "prefs.", 0.0, true);
  p.beta_mean = get_number(obj, "beta_mean", "prefs.", 0.0, true);
  p.beta_sd = get_number(obj, "beta_sd", "prefs.", 0.0, true);
  p.gamma_mean = get_number(obj, "gamma_mean", "prefs.", 0.0, true);
  p.gamma_sd = get_number(obj, "gamma_sd", "prefs.", 0.0, true);
  return p;
}

std::array<double, pool::kNumDeciles> parse_decile_array(
    const json& arr, const std::string& context) {
  if (!arr.is_array() || arr.size() != pool::kNumDeciles) {
    throw ConfigError("'" + context + "' must be an array of 10 numbers");
  }
  std::array<double, pool::kNumDeciles> out{};
  for (int d = 0; d < pool::kNumDeciles; ++d) {
    if (!arr[static_cast<std::size_t>(d)].is_number()) {
      throw ConfigError("'" + context + "' must contain only numbers");
    }
    out[static_cast<std::size_t>(d)] =
        arr[static_cast<std::size_t>(d)].get<double>();
  }
  return out;
}

pool::CalibrationTable parse_calibration(const json& obj,
                                         const std::filesystem::path& base_dir) {
  if (obj.is_object() && obj.contains("file")) {
    reject_unknown_keys(obj, {"file"}, "calibration.");
    return read_calibration_csv(base_dir / obj["file"].get<std::string>());
  }
  if (!obj.is_object()) {
    throw ConfigError("'calibration' must be an object");
  }
  reject_unknown_keys(obj,
                      {"male_by_decile", "smile_female", "smile_male",
                       "bodyshot_female", "bodyshot_male"},
                      "calibration.");
  pool::CalibrationTable table;
  table.male_by_decile =
      parse_decile_array(obj.value("male_by_decile", json()), "calibration.male_by_decile");
  table.smile_by_decile_gender[0] =
      parse_decile_array(obj.value("smile_female", json()), "calibration.smile_female");
  table.smile_by_decile_gender[1] =
      parse_decile_array(obj.value("smile_male", json()), "calibration.smile_male");
  table.bodyshot_by_decile_gender[0] = parse_decile_array(
      obj.value("bodyshot_female", json()), "calibration.bodyshot_female");
  table.bodyshot_by_decile_gender[1] = parse_decile_array(
      obj.value("bodyshot_male", json()), "calibration.bodyshot_male");
  table.validate();
  return table;
}

pool::FixedEffectSet parse_fe_set(const json& obj,
                                  const std::filesystem::path& base_dir) {
  pool::FixedEffectSet fe;
  if (obj.is_object() && obj.contains("file")) {
    reject_unknown_keys(obj, {"file"}, "fe_set.");
    return read_fixed_effects_csv(base_dir / obj["file"].get<std::string>());
  }
  if (!obj.is_array()) {
    throw ConfigError("'fe_set' must be an array or a file reference");
  }
  for (const auto& v : obj) {
    if (!v.is_number()) {
      throw ConfigError("'fe_set' must contain only numbers");
    }
    fe.values.push_back(v.get<double>());
  }
  fe.validate();
  return fe;
}

const std::set<std::string> kScenarioKeys = {
    "name",   "policy",    "policies",  "pool_size",   "market_size",
    "n_sims", "n_lenders", "omega",     "prefs",       "fe_set",
    "calibration", "master_seed", "match_pools"};

runner::Scenario parse_scenario_base(const json& obj,
                                     const std::filesystem::path& base_dir) {
  reject_unknown_keys(obj, kScenarioKeys, "");
  runner::Scenario s;
  if (obj.contains("name")) s.name = obj["name"].get<std::string>();
  s.pool_size = static_cast<int>(get_number(obj, "pool_size", "", 22));
  s.n_sims = static_cast<int>(get_number(obj, "n_sims", "", 50));
  s.n_lenders = static_cast<int>(get_number(obj, "n_lenders", "", 500));
  s.omega = get_number(obj, "omega", "", 1.0);
  if (!obj.contains("prefs")) throw ConfigError("missing key 'prefs'");
  s.prefs = parse_prefs(obj["prefs"]);
  s.prefs.omega = s.omega;
  if (!obj.contains("fe_set")) throw ConfigError("missing key 'fe_set'");
  s.fe_set = parse_fe_set(obj["fe_set"], base_dir);
  if (!obj.contains("calibration")) {
    throw ConfigError("missing key 'calibration'");
  }
  s.calib = parse_calibration(obj["calibration"], base_dir);
  if (obj.contains("master_seed")) {
    if (!obj["master_seed"].is_number_unsigned()) {
      throw ConfigError("'master_seed' must be a nonnegative integer");
    }
    s.master_seed = obj["master_seed"].get<std::uint64_t>();
  }
  if (obj.contains("match_pools")) {
    if (!obj["match_pools"].is_boolean()) {
      throw ConfigError("'match_pools' must be a boolean");
    }
    s.match_pools = obj["match_pools"].get<bool>();
  }
  // Scenario-level market size seeds the per-policy default.
  s.policy.market_size =
      static_cast<int>(get_number(obj, "market_size", "", 10));
  return s;
}

}  // namespace

runner::Scenario load_scenario(const std::filesystem::path& config_path) {
  const json obj = load_json(config_path);
  if (!obj.is_object()) {
    throw ConfigError("scenario config must be a JSON object");
  }
  runner::Scenario s = parse_scenario_base(obj, config_path.parent_path());
  if (obj.contains("policies")) {
    throw ConfigError("'policies' belongs in a sweep config; use 'policy'");
  }
  if (!obj.contains("policy")) throw ConfigError("missing key 'policy'");
  s.policy = parse_policy(obj["policy"], "policy", s.policy);
  s.validate();
  return s;
}

std::vector<runner::Scenario> load_sweep(
    const std::filesystem::path& config_path) {
  const json obj = load_json(config_path);
  if (!obj.is_object()) {
    throw ConfigError("sweep config must be a JSON object");
  }
  const runner::Scenario base =
      parse_scenario_base(obj, config_path.parent_path());
  if (!obj.contains("policies") || !obj["policies"].is_array() ||
      obj["policies"].empty()) {
    throw ConfigError("sweep config needs a non-empty 'policies' array");
  }
  std::vector<runner::Scenario> scenarios;
  std::size_t i = 0;
  for (const auto& p : obj["policies"]) {
    runner::Scenario s = base;
    s.policy =
        parse_policy(p, "policies[" + std::to_string(i) + "]", base.policy);
    s.name = "";
    s.validate();
    scenarios.push_back(std::move(s));
    ++i;
  }
  return scenarios;
}

namespace {

json scenario_to_json(const runner::Scenario& s, bool include_policy) {
  json obj;
  if (!s.name.empty()) obj["name"] = s.name;
  obj["pool_size"] = s.pool_size;
  obj["market_size"] = s.policy.market_size;
  obj["n_sims"] = s.n_sims;
  obj["n_lenders"] = s.n_lenders;
  obj["omega"] = s.omega;
  obj["prefs"] = {{"alpha_mean", s.prefs.alpha_mean},
                  {"alpha_sd", s.prefs.alpha_sd},
                  {"beta_mean", s.prefs.beta_mean},
                  {"beta_sd", s.prefs.beta_sd},
                  {"gamma_mean", s.prefs.gamma_mean},
                  {"gamma_sd", s.prefs.gamma_sd}};
  obj["fe_set"] = s.fe_set.values;
  json calib;
  calib["male_by_decile"] = s.calib.male_by_decile;
  calib["smile_female"] = s.calib.smile_by_decile_gender[0];
  calib["smile_male"] = s.calib.smile_by_decile_gender[1];
  calib["bodyshot_female"] = s.calib.bodyshot_by_decile_gender[0];
  calib["bodyshot_male"] = s.calib.bodyshot_by_decile_gender[1];
  obj["calibration"] = calib;
  obj["master_seed"] = s.master_seed;
  obj["match_pools"] = s.match_pools;
  if (include_policy) {
    obj["policy"] = {{"kind", policy::to_string(s.policy.kind)},
                     {"compliance_prob", s.policy.compliance_prob},
                     {"restricted_size", s.policy.restricted_size},
                     {"market_size", s.policy.market_size}};
  }
  return obj;
}

void dump_json(const std::filesystem::path& path, const json& obj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write " + path.string());
  }
  out << obj.dump(2) << '\n';
}

}  // namespace

void write_scenario(const std::filesystem::path& path,
                    const runner::Scenario& scenario) {
  dump_json(path, scenario_to_json(scenario, true));
}

void write_sweep(const std::filesystem::path& path,
                 const runner::Scenario& base,
                 const std::vector<policy::PolicySpec>& policies) {
  json obj = scenario_to_json(base, false);
  json list = json::array();
  for (const auto& p : policies) {
    list.push_back({{"kind", policy::to_string(p.kind)},
                    {"compliance_prob", p.compliance_prob},
                    {"restricted_size", p.restricted_size},
                    {"market_size", p.market_size}});
  }
  obj["policies"] = list;
  dump_json(path, obj);
}

}  // namespace lendsim::io
