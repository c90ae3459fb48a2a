#pragma once

#include <filesystem>
#include <vector>

#include "lendsim/runner.hpp"

namespace lendsim::io {

// Scenario config: a JSON object mirroring runner::Scenario.  fe_set and
// calibration are inline or {"file": "relative/path.csv"} references,
// resolved against the config file's directory.
runner::Scenario load_scenario(const std::filesystem::path& config_path);

// Sweep config: the same scenario keys (minus "policy") plus "policies", a
// list of policy objects or kind strings sharing the base scenario.
std::vector<runner::Scenario> load_sweep(
    const std::filesystem::path& config_path);

void write_scenario(const std::filesystem::path& path,
                    const runner::Scenario& scenario);
void write_sweep(const std::filesystem::path& path,
                 const runner::Scenario& base,
                 const std::vector<policy::PolicySpec>& policies);

}  // namespace lendsim::io
