#include "fk/cli/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "fk/bounds.hpp"
#include "fk/convergence.hpp"
#include "fk/feynman_kac.hpp"
#include "fk/oracles.hpp"

namespace fk::cli {

namespace {

using S = std::vector<std::string>;

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

std::string brief(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

McConfig mc_of(const ExperimentConfig& c) {
  McConfig mc = c.mc;
  mc.workers = c.workers;
  return mc;
}

RngSeed seed_of(const ExperimentConfig& c) { return {c.seed, 0}; }

std::vector<NamedTable> single(CsvTable table) {
  std::vector<NamedTable> out;
  out.push_back({"", std::move(table)});
  return out;
}

ExperimentOutput q_estimate(const ExperimentConfig& c) {
  const Potential v = make_potential(c);
  const QEstimate q = estimate_q(c.x, c.y, v, c.t, mc_of(c), seed_of(c));
  CsvTable table(S{"x", "y", "t", "n_samples", "n_steps", "mean", "std_error", "heavy_share",
                   "divergence_suspected"});
  table.add({format_point(c.x), format_point(c.y), num(c.t), num(q.n_samples), num(q.n_steps),
             num(q.mean), num(q.std_error), num(q.heavy_share), format_bool(q.divergence_suspected)});
  std::string summary = "q-estimate: Q = " + brief(q.mean) + " +/- " + brief(q.std_error);
  if (q.divergence_suspected) summary += " (divergence suspected)";
  return {summary, single(std::move(table))};
}

ExperimentOutput matrix_element_experiment(const ExperimentConfig& c) {
  const Potential v = make_potential(c);
  const Wavefunction phi = make_wavefunction(c.phi, c.dim);
  const Wavefunction psi = make_wavefunction(c.psi, c.dim);
  const MatrixElementEstimate m =
      matrix_element(phi, psi, v, c.t, c.quadrature, mc_of(c), seed_of(c));

  CsvTable total(S{"t", "value", "std_error", "quadrature_nodes", "mc_samples_per_node",
                   "divergent_nodes"});
  total.add({num(c.t), num(m.value), num(m.std_error), num(m.quadrature_nodes),
             num(m.mc_samples_per_node), num(m.divergent_nodes)});
  CsvTable nodes(S{"node", "x", "y", "weight", "q_mean", "q_std_error", "divergence_suspected"});
  for (std::size_t j = 0; j < m.nodes.size(); ++j) {
    const NodeEstimate& n = m.nodes[j];
    nodes.add({num(j), format_point(n.x), format_point(n.y), num(n.weight), num(n.q.mean),
               num(n.q.std_error), format_bool(n.q.divergence_suspected)});
  }
  std::string summary = "matrix-element: <phi, exp(-tH) psi> = " + brief(m.value) + " +/- " +
                        brief(m.std_error);
  if (m.divergent_nodes > 0) {
    summary += " (divergence suspected at " + std::to_string(m.divergent_nodes) + " nodes)";
  }
  std::vector<NamedTable> tables;
  tables.push_back({"", std::move(total)});
  tables.push_back({"nodes", std::move(nodes)});
  return {summary, std::move(tables)};
}

ExperimentOutput bound_sweep(const ExperimentConfig& c) {
  const Potential v = make_potential(c);
  const auto grid = square_grid(c.sweep_half_width, c.sweep_points_per_axis);
  const double delta = 2.0 * c.sweep_delta0 / c.t;
  const SweepReport report = verify_bound_sweep(v, c.t, delta, grid, mc_of(c), seed_of(c));
  CsvTable table(S{"x", "y", "q_mean", "q_stderr", "bound", "pass", "jensen_bound", "chain_pass"});
  for (const SweepPoint& p : report.points) {
    table.add({format_point(p.x), format_point(p.y), num(p.q.mean), num(p.q.std_error),
               num(p.bound), format_bool(p.pass), num(p.jensen), format_bool(p.chain_pass)});
  }
  const std::string summary = "bound-sweep: pass " + std::to_string(report.passes) + "/" +
                              std::to_string(report.points.size()) + " (chain " +
                              std::to_string(report.chain_passes) + "/" +
                              std::to_string(report.points.size()) + ")";
  return {summary, single(std::move(table))};
}

ExperimentOutput truncation_experiment(const ExperimentConfig& c) {
  const Potential v = make_potential(c);
  if (c.truncation_mode == "point") {
    const QLevelReport report =
        q_truncation_study(v, c.x, c.y, c.t, c.truncation_levels, mc_of(c), seed_of(c));
    CsvTable table(S{"level", "q_mean", "q_std_error", "heavy_share", "divergence_suspected"});
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      const QEstimate& q = report.estimates[i];
      table.add({num(report.levels[i]), num(q.mean), num(q.std_error), num(q.heavy_share),
                 format_bool(q.divergence_suspected)});
    }
    std::string summary = "truncation-study (point): ";
    summary += report.stabilization.stabilized
                   ? "stabilized from level " + brief(report.levels[report.stabilization.from_index])
                   : std::string("no stabilization");
    if (report.divergence_flagged) summary += "; divergence suspected";
    return {summary, single(std::move(table))};
  }

  const Wavefunction phi = make_wavefunction(c.phi, c.dim);
  const Wavefunction psi = make_wavefunction(c.psi, c.dim);
  const TruncationReport report = truncation_study(v, phi, psi, c.t, c.truncation_levels,
                                                   c.quadrature, mc_of(c), c.oracle, seed_of(c));
  CsvTable table(S{"level", "left", "right", "right_std_error", "divergent_nodes", "agree"});
  std::size_t agree = 0;
  for (const TruncationLevel& row : report.levels) {
    table.add({num(row.level), num(row.left), num(row.right), num(row.right_std_error),
               num(row.divergent_nodes), format_bool(row.agree)});
    agree += row.agree ? 1 : 0;
  }
  std::string summary = "truncation-study: left ";
  summary += report.left_stable.stabilized ? "stabilized" : "no stabilization";
  summary += ", right ";
  summary += report.right_stable.stabilized ? "stabilized" : "no stabilization";
  summary += "; agree " + std::to_string(agree) + "/" + std::to_string(report.levels.size());
  return {summary, single(std::move(table))};
}

ExperimentOutput theorem31_demo(const ExperimentConfig& c) {
  OperatorSequence seq;
  Eigen::VectorXd psi;
  double weight = 1.0;
  RealFunction f;
  if (c.theorem31_case == "counterexample") {
    seq = multiplication_counterexample(c.theorem31_k, c.theorem31_n);
    psi = Eigen::VectorXd::Ones(c.theorem31_k);
    weight = 1.0 / c.theorem31_k;
    f = [](double x) { return x; };
  } else {
    const Potential v = make_potential(c);
    seq = truncated_grid_sequence(v, c.truncation_levels, c.oracle.half_width, c.oracle.n_points);
    const GridOperator grid = build_grid_operator(v, c.oracle.half_width, c.oracle.n_points);
    const Wavefunction phi = make_wavefunction(c.phi, 1);
    psi.resize(grid.n_points());
    for (int i = 0; i < grid.n_points(); ++i) {
      const double x = grid.nodes()[i];
      psi[i] = phi(std::span<const double>(&x, 1));
    }
    weight = grid.spacing();
    const double t = c.t;
    f = [t](double x) { return std::exp(-t * x); };
  }
  const ConvergenceReport report = check_theorem31(seq, f, psi, weight);
  CsvTable table(S{"parameter", "resolvent_distance", "basis_resolvent_distance", "norm_f_psi",
                   "norm_f2_psi", "distance_to_limit"});
  for (const ConvergenceRow& row : report.rows) {
    table.add({num(row.parameter), num(row.resolvent_distance), num(row.basis_resolvent_distance),
               num(row.norm_f), num(row.norm_f_squared), num(row.distance_to_limit)});
  }
  std::string summary = "theorem31-demo (" + c.theorem31_case + "): resolvent ";
  summary += report.resolvent_shrinking ? "shrinking" : "not shrinking";
  summary += ", sup ||f(A_n)psi|| = " + brief(report.sup_norm_f);
  summary += ", ||f(A_n)^2 psi|| ";
  summary += report.squared_growing ? "growing" : "bounded";
  summary += ", f(A_n)psi ";
  summary += report.f_converging ? "converging" : "not converging";
  return {summary, single(std::move(table))};
}

ExperimentOutput oracle_crosscheck(const ExperimentConfig& c) {
  const Potential v = make_potential(c);
  const GridOperator grid = build_grid_operator(v, c.oracle.half_width, c.oracle.n_points);
  const double t = c.t;
  std::function<double(double, double)> closed;
  if (c.potential.name == "zero") {
    closed = [t](double x, double y) {
      return free_kernel(std::span<const double>(&x, 1), std::span<const double>(&y, 1), t);
    };
  } else if (c.potential.name == "harmonic") {
    const double omega = c.potential.omega;
    closed = [omega, t](double x, double y) { return mehler_kernel(x, y, omega, t); };
  } else {
    const double field = c.potential.field.at(0);
    closed = [field, t](double x, double y) { return stark_kernel(x, y, field, t); };
  }
  CsvTable table(S{"x", "y", "closed_form", "grid", "rel_diff", "pass"});
  std::size_t passes = 0;
  const auto points = square_grid(c.crosscheck_half_width, c.crosscheck_points_per_axis);
  for (const auto& [px, py] : points) {
    const double k_closed = closed(px[0], py[0]);
    const double k_grid = grid.kernel(px[0], py[0], t);
    const double rel = std::abs(k_grid - k_closed) / std::abs(k_closed);
    const bool pass = rel <= c.oracle_tolerance;
    passes += pass ? 1 : 0;
    table.add({num(px[0]), num(py[0]), num(k_closed), num(k_grid), num(rel), format_bool(pass)});
  }
  const std::string summary = "oracle-crosscheck: pass " + std::to_string(passes) + "/" +
                              std::to_string(points.size()) + " at relative tolerance " +
                              brief(c.oracle_tolerance);
  return {summary, single(std::move(table))};
}

ExperimentOutput refine_experiment(const ExperimentConfig& c) {
  const Potential v = make_potential(c);
  const RefinementReport report =
      refine_steps(c.x, c.y, v, c.t, c.refine_steps, mc_of(c), seed_of(c));
  CsvTable table(S{"n_steps", "mean", "std_error", "diff_to_next", "diff_std_error"});
  for (const RefinementLevel& level : report.levels) {
    table.add({num(level.n_steps), num(level.mean), num(level.std_error), num(level.diff_to_next),
               num(level.diff_std_error)});
  }
  std::string summary = "refine-steps: ";
  summary += std::isnan(report.empirical_order)
                 ? std::string("differences vanish identically")
                 : "empirical order " + brief(report.empirical_order);
  summary += ", max |diff|/se = " + brief(report.max_diff_z);
  return {summary, single(std::move(table))};
}

}  // namespace

ExperimentOutput execute(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::q_estimate: return q_estimate(config);
    case Experiment::matrix_element: return matrix_element_experiment(config);
    case Experiment::bound_sweep: return bound_sweep(config);
    case Experiment::truncation_study: return truncation_experiment(config);
    case Experiment::theorem31_demo: return theorem31_demo(config);
    case Experiment::oracle_crosscheck: return oracle_crosscheck(config);
    case Experiment::refine_steps: return refine_experiment(config);
  }
  throw ConfigError("unhandled experiment");
}

std::filesystem::path table_path(const std::filesystem::path& output, const std::string& suffix) {
  if (suffix.empty()) return output;
  std::filesystem::path p = output;
  const std::string ext = p.has_extension() ? p.extension().string() : std::string(".csv");
  p.replace_extension();
  p += "." + suffix + ext;
  return p;
}

std::string run(const ExperimentConfig& config) {
  const ExperimentOutput out = execute(config);
  for (const NamedTable& t : out.tables) t.table.write(table_path(config.output_path, t.suffix));
  return out.summary;
}

}  // namespace fk::cli
