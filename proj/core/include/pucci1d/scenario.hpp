#pragma once

#include <string>

namespace pucci1d {

/// Runs the scenario described by a JSON config, writing CSV/JSON artifacts
/// into out_dir. Exit codes: 0 success, 1 malformed config, 2 validation
/// failure, 3 solver no-convergence (report still written), 4 certificate
/// strict violation where consistency was expected.
///
/// task_override, when nonempty, must agree with the config's "task" field
/// if that field is present.
int run_scenario(const std::string& config_text, const std::string& out_dir,
                 const std::string& task_override = "");

int run_scenario_file(const std::string& config_path,
                      const std::string& out_dir,
                      const std::string& task_override = "");

}  // namespace pucci1d
