#include "fk/cli/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

namespace fk::cli {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<Experiment, std::string_view>, 7> kExperimentNames{{
    {Experiment::q_estimate, "q-estimate"},
    {Experiment::matrix_element, "matrix-element"},
    {Experiment::bound_sweep, "bound-sweep"},
    {Experiment::truncation_study, "truncation-study"},
    {Experiment::theorem31_demo, "theorem31-demo"},
    {Experiment::oracle_crosscheck, "oracle-crosscheck"},
    {Experiment::refine_steps, "refine-steps"},
}};

void flatten(const json& node, const std::string& prefix, std::map<std::string, json>& out) {
  for (const auto& [key, value] : node.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
    } else {
      out[name] = value;
    }
  }
}

// Pulls typed values out of the flattened document and records every problem.
class Reader {
 public:
  Reader(std::map<std::string, json> entries, std::vector<std::string>& errors)
      : entries_(std::move(entries)), errors_(errors) {
    // A nested {"potential": {"name": ...}} spells the catalog name as potential.name.
    for (const char* section : {"potential", "phi", "psi"}) {
      const std::string alias = std::string(section) + ".name";
      if (auto it = entries_.find(alias); it != entries_.end()) {
        if (entries_.contains(section)) {
          error(std::string("both '") + section + "' and '" + alias + "' are set");
        } else {
          entries_[section] = it->second;
        }
        entries_.erase(it);
      }
    }
  }

  bool has(const std::string& key) const { return entries_.contains(key); }

  void error(std::string message) { errors_.push_back(std::move(message)); }

  const json* take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  void number(const std::string& key, double& out, const std::function<bool(double)>& valid,
              const char* requirement) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_number()) {
      error(key + " must be a number");
      return;
    }
    const double d = v->get<double>();
    if (!std::isfinite(d) || !valid(d)) {
      error(key + " must be " + requirement);
      return;
    }
    out = d;
  }

  template <class Int>
  void integer(const std::string& key, Int& out, long long min_value) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_number_integer()) {
      error(key + " must be an integer");
      return;
    }
    if (v->is_number_unsigned()) {
      const auto u = v->get<unsigned long long>();
      if (min_value > 0 && u < static_cast<unsigned long long>(min_value)) {
        error(key + " must be >= " + std::to_string(min_value));
        return;
      }
      out = static_cast<Int>(u);
      return;
    }
    const auto i = v->get<long long>();
    if (i < min_value) {
      error(key + " must be >= " + std::to_string(min_value));
      return;
    }
    out = static_cast<Int>(i);
  }

  void text(const std::string& key, std::string& out) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_string()) {
      error(key + " must be a string");
      return;
    }
    out = v->get<std::string>();
  }

  /// Number or array of numbers.
  bool numbers(const std::string& key, std::vector<double>& out) {
    const json* v = take(key);
    if (!v) return false;
    std::vector<double> values;
    if (v->is_number()) {
      values.push_back(v->get<double>());
    } else if (v->is_array() && std::ranges::all_of(*v, [](const json& e) { return e.is_number(); })) {
      for (const json& e : *v) values.push_back(e.get<double>());
    } else {
      error(key + " must be a number or an array of numbers");
      return false;
    }
    if (!std::ranges::all_of(values, [](double d) { return std::isfinite(d); })) {
      error(key + " must be finite");
      return false;
    }
    out = std::move(values);
    return true;
  }

  bool integers(const std::string& key, std::vector<int>& out) {
    const json* v = take(key);
    if (!v) return false;
    if (!v->is_array() || v->empty() ||
        !std::ranges::all_of(*v, [](const json& e) { return e.is_number_integer(); })) {
      error(key + " must be a non-empty array of integers");
      return false;
    }
    out.clear();
    for (const json& e : *v) out.push_back(e.get<int>());
    return true;
  }

  void report_unknown() {
    for (const auto& [key, value] : entries_) {
      if (!used_.contains(key)) error("unknown key '" + key + "'");
    }
  }

 private:
  std::map<std::string, json> entries_;
  std::set<std::string> used_;
  std::vector<std::string>& errors_;
};

auto positive = [](double d) { return d > 0.0; };

bool strictly_increasing(const auto& values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) return false;
  }
  return true;
}

void read_potential(Reader& r, ExperimentConfig& c) {
  r.text("potential", c.potential.name);
  const std::string& name = c.potential.name;
  struct Param {
    const char* key;
    const char* owner;
  };
  const std::array<Param, 3> params{{{"potential.F", "stark"},
                                     {"potential.omega", "harmonic"},
                                     {"potential.c", "inverted-quadratic"}}};
  if (name != "zero" && name != "harmonic" && name != "stark" && name != "inverted-quadratic") {
    r.error("unknown potential '" + name + "' (expected zero, harmonic, stark, inverted-quadratic)");
    for (const Param& p : params) r.take(p.key);
    return;
  }
  for (const Param& p : params) {
    if (name == p.owner) {
      if (!r.has(p.key)) r.error("potential '" + name + "' requires " + p.key);
    } else if (r.has(p.key)) {
      r.take(p.key);
      r.error(std::string(p.key) + " is not a parameter of potential '" + name + "'");
    }
  }
  if (name == "stark" && r.numbers("potential.F", c.potential.field) &&
      static_cast<int>(c.potential.field.size()) != c.dim) {
    r.error("potential.F must have dim = " + std::to_string(c.dim) + " components");
  }
  r.number("potential.omega", c.potential.omega, positive, "> 0");
  r.number("potential.c", c.potential.c, [](double d) { return d >= 0.0; }, ">= 0");
}

void read_wavefunction(Reader& r, const std::string& section, WavefunctionConfig& w, int dim) {
  r.text(section, w.name);
  if (w.name != "bump" && w.name != "gaussian") {
    r.error("unknown wavefunction '" + w.name + "' for " + section + " (expected bump, gaussian)");
  }
  w.center.assign(dim, 0.0);
  if (r.numbers(section + ".center", w.center) && static_cast<int>(w.center.size()) != dim) {
    r.error(section + ".center must have dim = " + std::to_string(dim) + " components");
  }
  r.number(section + ".width", w.width, positive, "> 0");
  if (w.name == "bump" && r.has(section + ".tail")) {
    r.take(section + ".tail");
    r.error(section + ".tail only applies to gaussian wavefunctions");
  }
  r.number(section + ".tail", w.tail, [](double d) { return d > 0.0 && d < 1.0; }, "in (0, 1)");
}

void read_point(Reader& r, const std::string& key, Point& p, int dim) {
  p.assign(dim, 0.0);
  if (r.numbers(key, p) && static_cast<int>(p.size()) != dim) {
    r.error(key + " must have dim = " + std::to_string(dim) + " components");
  }
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [value, name] : kExperimentNames) {
    if (value == e) return name;
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [value, n] : kExperimentNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all = [] {
    std::vector<Experiment> v;
    for (const auto& entry : kExperimentNames) v.push_back(entry.first);
    return v;
  }();
  return all;
}

ValidationResult validate_config(const json& raw) {
  ValidationResult result;
  auto& errors = result.errors;
  if (!raw.is_object()) {
    errors.push_back("configuration must be a JSON object");
    return result;
  }
  std::map<std::string, json> flat;
  flatten(raw, "", flat);
  Reader r(std::move(flat), errors);
  ExperimentConfig c;

  std::string experiment;
  if (!r.has("experiment")) {
    r.error("experiment is required");
  } else {
    r.text("experiment", experiment);
    if (!experiment.empty()) {
      if (auto e = parse_experiment(experiment)) {
        c.experiment = *e;
      } else {
        r.error("unknown experiment '" + experiment + "'");
      }
    }
  }

  r.integer("dim", c.dim, 1);
  if (c.dim > 3) r.error("dim must be <= 3");
  read_potential(r, c);
  read_wavefunction(r, "phi", c.phi, c.dim);
  read_wavefunction(r, "psi", c.psi, c.dim);
  r.number("t", c.t, positive, "> 0");
  read_point(r, "x", c.x, c.dim);
  read_point(r, "y", c.y, c.dim);

  r.integer("mc.n_samples", c.mc.n_samples, 1);
  r.integer("mc.n_steps", c.mc.n_steps, 1);
  r.integer("mc.top_k", c.mc.top_k, 0);
  r.number("mc.heavy_fraction", c.mc.heavy_fraction, [](double d) { return d > 0.0 && d <= 1.0; },
           "in (0, 1]");
  r.integer("quadrature.nodes_per_axis", c.quadrature.nodes_per_axis, 1);
  r.number("oracle.L", c.oracle.half_width, positive, "> 0");
  r.integer("oracle.n_points", c.oracle.n_points, 3);
  r.number("oracle.tolerance", c.oracle_tolerance, positive, "> 0");
  r.integer("seed", c.seed, 0);
  r.integer("workers", c.workers, 1);
  c.output_path = experiment.empty() ? "output.csv" : experiment + ".csv";
  r.text("output_path", c.output_path);
  if (c.output_path.empty()) r.error("output_path must be non-empty");

  r.number("sweep.delta0", c.sweep_delta0, [](double d) { return d > 0.0 && d < 1.0; }, "in (0, 1)");
  r.number("sweep.half_width", c.sweep_half_width, positive, "> 0");
  r.integer("sweep.points_per_axis", c.sweep_points_per_axis, 1);

  if (r.numbers("truncation.levels", c.truncation_levels)) {
    if (c.truncation_levels.empty() || !strictly_increasing(c.truncation_levels) ||
        c.truncation_levels.front() < 0.0) {
      r.error("truncation.levels must be non-negative and strictly increasing");
    }
  }
  r.text("truncation.mode", c.truncation_mode);
  if (c.truncation_mode != "matrix-element" && c.truncation_mode != "point") {
    r.error("truncation.mode must be 'matrix-element' or 'point'");
  }

  if (r.integers("refine.steps", c.refine_steps)) {
    const bool positive_steps = std::ranges::all_of(c.refine_steps, [](int n) { return n >= 1; });
    if (!positive_steps || !strictly_increasing(c.refine_steps)) {
      r.error("refine.steps must be positive and strictly increasing");
    } else if (!std::ranges::all_of(c.refine_steps,
                                    [&](int n) { return c.refine_steps.back() % n == 0; })) {
      r.error("every entry of refine.steps must divide the last one");
    }
  }

  r.text("theorem31.case", c.theorem31_case);
  if (c.theorem31_case != "counterexample" && c.theorem31_case != "semigroup") {
    r.error("theorem31.case must be 'counterexample' or 'semigroup'");
  }
  r.integer("theorem31.k", c.theorem31_k, 1);
  if (r.integers("theorem31.n", c.theorem31_n) &&
      (!std::ranges::all_of(c.theorem31_n, [](int n) { return n >= 1; }) ||
       !strictly_increasing(c.theorem31_n))) {
    r.error("theorem31.n must be positive and strictly increasing");
  }

  r.number("crosscheck.half_width", c.crosscheck_half_width, positive, "> 0");
  r.integer("crosscheck.points_per_axis", c.crosscheck_points_per_axis, 1);

  r.report_unknown();

  // Cross-field requirements.
  const bool grid_oracle =
      c.experiment == Experiment::oracle_crosscheck || c.experiment == Experiment::bound_sweep ||
      (c.experiment == Experiment::truncation_study && c.truncation_mode == "matrix-element") ||
      (c.experiment == Experiment::theorem31_demo && c.theorem31_case == "semigroup");
  if (errors.empty() && grid_oracle && c.dim != 1) {
    r.error(std::string(to_string(c.experiment)) + " requires dim = 1");
  }
  if (errors.empty() && c.experiment == Experiment::oracle_crosscheck &&
      c.potential.name == "inverted-quadratic") {
    r.error("oracle-crosscheck needs a potential with a closed-form kernel (zero, harmonic, stark)");
  }

  if (errors.empty()) result.config = std::move(c);
  return result;
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

Potential make_potential(const ExperimentConfig& config) {
  const auto& p = config.potential;
  if (p.name == "zero") return zero_potential(config.dim);
  if (p.name == "harmonic") return harmonic(p.omega, config.dim);
  if (p.name == "stark") return stark(p.field);
  if (p.name == "inverted-quadratic") return inverted_quadratic(p.c, config.dim);
  throw ConfigError("unknown potential '" + p.name + "'");
}

Wavefunction make_wavefunction(const WavefunctionConfig& config, int dim) {
  Point center = config.center.empty() ? Point(dim, 0.0) : config.center;
  if (config.name == "bump") return bump(std::move(center), config.width);
  if (config.name == "gaussian") return gaussian(std::move(center), config.width, config.tail);
  throw ConfigError("unknown wavefunction '" + config.name + "'");
}

}  // namespace fk::cli
