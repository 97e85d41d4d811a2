#ifndef GABP_TOOLS_CLI_CONFIG_HPP
#define GABP_TOOLS_CLI_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gabp/gabp.h"

namespace gabp_cli {

// Fully resolved settings: built-in defaults, then the config file, then
// command-line flags.
struct CliConfig {
  int hidden_adjust = 1;
  gabp_ga_config ga{};
  gabp_train_config training{};

  std::size_t samples = 13;
  std::size_t train_rows = 0;
  double noise_sd = 0.02;
  std::vector<std::string> cost_indicators;
  bool normalize = false;  // fit min-max stats on the training rows

  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  std::string variant = "gabp";
  bool svg = false;

  std::string train_path;
  std::string test_path;
  std::string model_path;
  std::string data_path;
  std::string out_dir = ".";

  CliConfig();

  gabp_shape shape() const;
  std::vector<int> cost_flags() const;  // one per schema indicator
};

// INI file with [network], [evolution], [training], [data] and [run]
// sections. Unknown keys are an error.
void apply_config_file(CliConfig& cfg, const std::string& path);

// `# key = value` lines describing the settings that shape the results.
std::string provenance(const CliConfig& cfg, const std::string& command);

std::string trainer_name(gabp_trainer t);
gabp_trainer parse_trainer(const std::string& s);

}  // namespace gabp_cli

#endif  // GABP_TOOLS_CLI_CONFIG_HPP
