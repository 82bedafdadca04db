#pragma once

#include <string>

#include "tds/harness.hpp"

namespace tds {

/// Full run configuration: experiment settings plus dataset source, output
/// location and plot grid. Defaults reproduce the reference experimental
/// setup exactly.
struct CliConfig {
  ExperimentConfig experiment;
  PlotGrid grid;
  std::string dataset_path;  // empty = embedded observation table
  double dataset_static_gain = 0.0322;
  std::string output_dir = "results";

  ObservationDataset load_dataset() const;
};

/// Parses the flat key-value config text ("[section]" headers, "key = value"
/// lines, '#' comments). Unknown sections or keys are rejected by name.
CliConfig parse_config_text(const std::string& text);
CliConfig load_config_file(const std::string& path);

/// Serializes the resolved configuration; parse_config_text round-trips it.
std::string config_to_text(const CliConfig& config);

}  // namespace tds
