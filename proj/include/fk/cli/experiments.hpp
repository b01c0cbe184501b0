// Experiment dispatch: each experiment produces one or more CSV tables and a
// one-line summary. Scientific findings (divergence, failed sweeps) are part
// of the output, never errors.
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fk/cli/config.hpp"
#include "fk/cli/csv.hpp"

namespace fk::cli {

struct NamedTable {
  /// Empty for the main output; otherwise inserted before the extension
  /// (out.csv -> out.nodes.csv).
  std::string suffix;
  CsvTable table;
};

struct ExperimentOutput {
  std::string summary;
  std::vector<NamedTable> tables;
};

/// Runs the experiment without touching the filesystem.
ExperimentOutput execute(const ExperimentConfig& config);

std::filesystem::path table_path(const std::filesystem::path& output, const std::string& suffix);

/// execute() and write every table. Returns the summary line.
std::string run(const ExperimentConfig& config);

}  // namespace fk::cli
