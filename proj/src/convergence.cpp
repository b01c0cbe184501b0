#include "fk/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "fk/errors.hpp"

namespace fk {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

ComplexMatrix shifted_resolvent(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  ComplexMatrix shifted = a.cast<std::complex<double>>();
  shifted.diagonal().array() += std::complex<double>(0.0, 1.0);
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  ComplexMatrix inv = lu.solve(ComplexMatrix::Identity(n, n));
  if (!inv.allFinite()) throw NumericalError("resolvent solve produced non-finite values");
  return inv;
}

void check_levels(std::span<const double> levels) {
  if (levels.empty()) throw std::invalid_argument("truncation levels must be non-empty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] >= 0.0) || (i > 0 && levels[i] <= levels[i - 1])) {
      throw std::invalid_argument("truncation levels must be non-negative and increasing");
    }
  }
}

}  // namespace

double resolvent_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          const Eigen::VectorXd& probe, double weight) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() ||
      probe.size() != a.rows()) {
    throw std::invalid_argument("resolvent_distance: size mismatch");
  }
  if (probe.norm() == 0.0) throw std::invalid_argument("resolvent_distance: probe must be nonzero");
  const Eigen::VectorXcd p = probe.cast<std::complex<double>>();
  auto solve = [&](const Eigen::MatrixXd& m) {
    ComplexMatrix shifted = m.cast<std::complex<double>>();
    shifted.diagonal().array() += std::complex<double>(0.0, 1.0);
    Eigen::VectorXcd r = Eigen::PartialPivLU<ComplexMatrix>(shifted).solve(p);
    if (!r.allFinite()) throw NumericalError("resolvent solve produced non-finite values");
    return r;
  };
  return std::sqrt(weight) * (solve(a) - solve(b)).norm();
}

CutoffFunction::CutoffFunction(RealFunction base, double level)
    : base_(std::move(base)), level_(level) {
  if (!(level > 0.0)) throw std::invalid_argument("cutoff level must be > 0");
}

double CutoffFunction::operator()(double x) const {
  const double v = base_(x);
  if (v >= level_) return level_;
  if (v <= -level_) return -level_;
  return v;
}

CutoffFunction apply_cutoff(RealFunction f, double m) { return CutoffFunction(std::move(f), m); }

Eigen::VectorXd apply_function(const Eigen::MatrixXd& a, const RealFunction& f,
                               const Eigen::VectorXd& v) {
  return decompose(a).apply(f, v);
}

ConvergenceReport check_theorem31(const OperatorSequence& seq, const RealFunction& f,
                                const Eigen::VectorXd& psi, double weight) {
  if (seq.members.empty()) throw std::invalid_argument("check_theorem31: empty sequence");
  const double scale = std::sqrt(weight);
  const auto f_squared = [&f](double x) {
    const double v = f(x);
    return v * v;
  };

  const ComplexMatrix limit_resolvent = shifted_resolvent(seq.limit);
  const SpectralDecomposition limit_spec = decompose(seq.limit);
  const Eigen::VectorXd f_limit = limit_spec.apply(f, psi);
  const Eigen::VectorXcd psi_c = psi.cast<std::complex<double>>();

  ConvergenceReport report;
  report.label = seq.label;
  for (std::size_t n = 0; n < seq.members.size(); ++n) {
    const Eigen::MatrixXd& a = seq.members[n];
    if (a.rows() != seq.limit.rows() || a.cols() != seq.limit.cols()) {
      throw std::invalid_argument("check_theorem31: member size mismatch");
    }
    ConvergenceRow row;
    row.parameter = n < seq.parameters.size() ? seq.parameters[n] : static_cast<double>(n);
    const ComplexMatrix diff = shifted_resolvent(a) - limit_resolvent;
    row.resolvent_distance = scale * (diff * psi_c).norm();
    row.basis_resolvent_distance = diff.colwise().norm().maxCoeff();

    const SpectralDecomposition spec = decompose(a);
    const Eigen::VectorXd fa = spec.apply(f, psi);
    row.norm_f = scale * fa.norm();
    row.norm_f_squared = scale * spec.apply(f_squared, psi).norm();
    row.distance_to_limit = scale * (fa - f_limit).norm();
    report.sup_norm_f = std::max(report.sup_norm_f, row.norm_f);
    report.sup_norm_f_squared = std::max(report.sup_norm_f_squared, row.norm_f_squared);
    report.rows.push_back(row);
  }
  const ConvergenceRow& first = report.rows.front();
  const ConvergenceRow& last = report.rows.back();
  report.resolvent_shrinking = last.resolvent_distance < 0.5 * first.resolvent_distance;
  report.f_converging = last.distance_to_limit < 0.5 * first.distance_to_limit;
  report.squared_growing = last.norm_f_squared > 2.0 * first.norm_f_squared;
  return report;
}

OperatorSequence multiplication_counterexample(int k, std::span<const int> ns) {
  if (k < 1) throw std::invalid_argument("counterexample grid size must be >= 1");
  OperatorSequence seq;
  seq.label = "sqrt(n) 1[0,1/n]";
  seq.limit = Eigen::MatrixXd::Zero(k, k);
  for (int n : ns) {
    if (n < 1) throw std::invalid_argument("counterexample index must be >= 1");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < k; ++i) {
      const double x = (i + 0.5) / k;
      if (x <= 1.0 / n) diag[i] = std::sqrt(static_cast<double>(n));
    }
    seq.members.push_back(diag.asDiagonal());
    seq.parameters.push_back(n);
  }
  return seq;
}

OperatorSequence truncated_grid_sequence(const Potential& v, std::span<const double> levels,
                                         double half_width, int n_points) {
  check_levels(levels);
  OperatorSequence seq;
  seq.label = "grid H_n for " + v.name();
  seq.limit = build_grid_operator(v, half_width, n_points).dense();
  for (double level : levels) {
    seq.members.push_back(build_grid_operator(truncate(v, level), half_width, n_points).dense());
    seq.parameters.push_back(level);
  }
  return seq;
}

Stabilization check_stabilization(std::span<const double> values,
                                  std::span<const double> std_errors,
                                  const std::vector<bool>& unreliable, std::size_t run,
                                  double relative) {
  if (values.size() != std_errors.size()) {
    throw std::invalid_argument("check_stabilization: values/std_errors size mismatch");
  }
  if (!unreliable.empty() && unreliable.size() != values.size()) {
    throw std::invalid_argument("check_stabilization: unreliable flags size mismatch");
  }
  Stabilization out;
  out.from_index = values.size();
  if (values.size() < run + 1 || run == 0) return out;

  auto small = [&](std::size_t i) {
    const double increment = std::abs(values[i + 1] - values[i]);
    const double combined = std::sqrt(std_errors[i] * std_errors[i] + std_errors[i + 1] * std_errors[i + 1]);
    const double threshold = std::max(3.0 * combined, relative * std::abs(values[i + 1]));
    const bool flagged = !unreliable.empty() && (unreliable[i] || unreliable[i + 1]);
    return increment <= threshold && !flagged;
  };
  std::size_t i = values.size() - 1;
  while (i > 0 && small(i - 1)) --i;
  out.from_index = i;
  out.stabilized = (values.size() - 1 - i) >= run;
  return out;
}

TruncationReport truncation_study(const Potential& v, const Wavefunction& phi,
                                  const Wavefunction& psi, double t,
                                  std::span<const double> levels, const QuadratureConfig& quad,
                                  const McConfig& mc, const OracleConfig& oracle,
                                  const RngSeed& seed) {
  check_levels(levels);
  TruncationReport report;
  std::vector<MatrixElementEstimate> right;
  for (double level : levels) {
    const Potential vn = truncate(v, level);
    const GridOperator op = build_grid_operator(vn, oracle.half_width, oracle.n_points);
    TruncationLevel row;
    row.level = level;
    row.left = semigroup_matrix_element(op, phi, psi, t);
    right.push_back(matrix_element(phi, psi, vn, t, quad, mc, seed));
    row.right = right.back().value;
    row.right_std_error = right.back().std_error;
    row.divergent_nodes = right.back().divergent_nodes;
    row.agree = std::abs(row.left - row.right) <=
                std::max(3.0 * row.right_std_error, 0.01 * std::abs(row.left));
    report.levels.push_back(row);
  }

  report.left_monotone = true;
  report.right_monotone = true;
  report.all_agree = true;
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    report.all_agree = report.all_agree && report.levels[i].agree;
    if (i == 0) continue;
    const auto& prev = report.levels[i - 1];
    const auto& cur = report.levels[i];
    // The oracle matrices differ between levels, so allow eigensolver round-off.
    if (cur.left < prev.left - 1e-10 * std::abs(prev.left)) report.left_monotone = false;
    if (cur.right < prev.right) report.right_monotone = false;
    for (std::size_t j = 0; j < right[i].nodes.size(); ++j) {
      if (right[i].nodes[j].q.mean < right[i - 1].nodes[j].q.mean) report.right_monotone = false;
    }
  }

  std::vector<double> left_values, zeros(levels.size(), 0.0), right_values, right_se;
  std::vector<bool> unreliable;
  for (const auto& row : report.levels) {
    left_values.push_back(row.left);
    right_values.push_back(row.right);
    right_se.push_back(row.right_std_error);
    unreliable.push_back(row.divergent_nodes > 0);
  }
  report.left_stable = check_stabilization(left_values, zeros);
  report.right_stable = check_stabilization(right_values, right_se, unreliable);
  return report;
}

QLevelReport q_truncation_study(const Potential& v, std::span<const double> x,
                                std::span<const double> y, double t,
                                std::span<const double> levels, const McConfig& mc,
                                const RngSeed& seed) {
  check_levels(levels);
  QLevelReport report;
  std::vector<double> means, ses;
  std::vector<bool> flags;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const QEstimate q = estimate_q(x, y, truncate(v, levels[i]), t, mc, seed);
    report.levels.push_back(levels[i]);
    report.estimates.push_back(q);
    means.push_back(q.mean);
    ses.push_back(q.std_error);
    flags.push_back(q.divergence_suspected);
    report.divergence_flagged = report.divergence_flagged || q.divergence_suspected;
  }
  report.monotone = std::ranges::is_sorted(means);
  report.stabilization =
      check_stabilization(means, ses, flags);
  return report;
}

}  // namespace fk
