// Experiment configuration: a flat JSON object with dotted keys
// ("mc.n_samples": 20000). Nested objects are accepted and flattened.
// Unknown keys are rejected.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fk/convergence.hpp"
#include "fk/feynman_kac.hpp"
#include "fk/potentials.hpp"
#include "fk/wavefunction.hpp"

namespace fk::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  q_estimate,
  matrix_element,
  bound_sweep,
  truncation_study,
  theorem31_demo,
  oracle_crosscheck,
  refine_steps,
};

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);
const std::vector<Experiment>& all_experiments();

struct PotentialConfig {
  std::string name = "zero";
  std::vector<double> field;  // stark
  double omega = 0.0;         // harmonic
  double c = 0.0;             // inverted-quadratic
};

struct WavefunctionConfig {
  std::string name = "bump";
  Point center;
  double width = 1.0;  // bump half-width or gaussian sigma
  double tail = 1e-8;  // gaussian only
};

struct ExperimentConfig {
  Experiment experiment = Experiment::q_estimate;
  int dim = 1;
  PotentialConfig potential;
  WavefunctionConfig phi;
  WavefunctionConfig psi;
  double t = 1.0;
  Point x;
  Point y;
  McConfig mc;
  QuadratureConfig quadrature;
  OracleConfig oracle;
  double oracle_tolerance = 1e-3;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string output_path;

  double sweep_delta0 = 0.5;
  double sweep_half_width = 3.0;
  int sweep_points_per_axis = 7;

  std::vector<double> truncation_levels{1, 2, 4, 8, 16, 32};
  std::string truncation_mode = "matrix-element";

  std::vector<int> refine_steps{16, 32, 64, 128};

  std::string theorem31_case = "counterexample";
  int theorem31_k = 256;
  std::vector<int> theorem31_n{4, 16, 64};

  double crosscheck_half_width = 1.0;
  int crosscheck_points_per_axis = 5;
};

struct ValidationResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;

  bool ok() const { return config.has_value(); }
};

/// Strict validation with defaults applied. Every problem is reported, not
/// only the first; `experiment` is the one mandatory key.
ValidationResult validate_config(const nlohmann::json& raw);

/// Parses a JSON document. Throws IoError if unreadable, ConfigError if malformed.
nlohmann::json load_config_file(const std::filesystem::path& path);

Potential make_potential(const ExperimentConfig& config);
Wavefunction make_wavefunction(const WavefunctionConfig& config, int dim);

}  // namespace fk::cli
