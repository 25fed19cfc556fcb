#pragma once

#include <exception>
#include <string>

namespace tflab::cli {

/// Runs the experiment described by the JSON config, writing outputs under
/// out_dir. Identical configs produce byte-identical outputs, independent
/// of the job count. Throws on error; see exit_code_for.
void run_config_file(const std::string& config_path, const std::string& out_dir,
                     int jobs, const std::string& expected_command = "");
void run_config_text(const std::string& json_text, const std::string& out_dir,
                     int jobs, const std::string& expected_command = "");

/// 2 config error, 4 hypothesis violation, 3 numerical/domain/grid error.
int exit_code_for(const std::exception& e);

}  // namespace tflab::cli
