// fkmc: Feynman-Kac Monte Carlo experiment runner.
//
//   fkmc <experiment> [--config file.json] [--seed N] [--output path] [--workers N]
//   fkmc validate --config file.json
//
// Exit status: 0 success, 1 usage, 2 invalid configuration, 3 I/O failure,
// 4 numerical failure.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "fk/cli/config.hpp"
#include "fk/cli/experiments.hpp"
#include "fk/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kIo = 3, kNumerical = 4 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<unsigned> workers;
};

int print_errors(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "config error: " << e << '\n';
  return kConfig;
}

int execute(const std::optional<fk::cli::Experiment>& experiment, const Options& opts) {
  using fk::cli::ConfigError;
  using fk::cli::IoError;
  try {
    nlohmann::json raw = opts.config_path.empty() ? nlohmann::json::object()
                                                  : fk::cli::load_config_file(opts.config_path);
    if (!raw.is_object()) return print_errors({"configuration must be a JSON object"});
    if (experiment) {
      const std::string name(fk::cli::to_string(*experiment));
      if (raw.contains("experiment") && raw["experiment"] != name) {
        return print_errors({"config file sets experiment '" + raw["experiment"].dump() +
                             "' but the subcommand is '" + name + "'"});
      }
      raw["experiment"] = name;
    }
    if (opts.seed) raw["seed"] = *opts.seed;
    if (opts.output) raw["output_path"] = *opts.output;
    if (opts.workers) raw["workers"] = *opts.workers;

    const auto validation = fk::cli::validate_config(raw);
    if (!validation.ok()) return print_errors(validation.errors);
    if (!experiment) {
      std::cout << "config ok: " << fk::cli::to_string(validation.config->experiment) << '\n';
      return kOk;
    }
    std::cout << fk::cli::run(*validation.config) << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const fk::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
}

void add_common(CLI::App* cmd, Options& opts) {
  cmd->add_option("--config", opts.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "random seed (overrides the config)");
  cmd->add_option("--output", opts.output, "output CSV path (overrides the config)");
  cmd->add_option("--workers", opts.workers, "worker threads (overrides the config)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feynman-Kac Monte Carlo experiments"};
  app.require_subcommand(1);

  Options opts;
  std::optional<fk::cli::Experiment> chosen;
  bool validate_only = false;

  for (const auto e : fk::cli::all_experiments()) {
    auto* cmd = app.add_subcommand(std::string(fk::cli::to_string(e)),
                                   "run the " + std::string(fk::cli::to_string(e)) + " experiment");
    add_common(cmd, opts);
    cmd->callback([&chosen, e] { chosen = e; });
  }
  auto* validate = app.add_subcommand("validate", "check a configuration file and exit");
  validate->add_option("--config", opts.config_path, "JSON configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  validate->callback([&validate_only] { validate_only = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (validate_only) return execute(std::nullopt, opts);
  return execute(chosen, opts);
}
