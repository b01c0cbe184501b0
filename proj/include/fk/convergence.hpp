// Finite-dimensional checks of the strong-resolvent convergence lemma and the
// truncation scheme V_n = max(V, -n) applied to both sides of the
// Feynman-Kac identity.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fk/feynman_kac.hpp"
#include "fk/oracles.hpp"
#include "fk/potentials.hpp"
#include "fk/wavefunction.hpp"

namespace fk {

using RealFunction = std::function<double(double)>;

struct OperatorSequence {
  std::vector<Eigen::MatrixXd> members;
  Eigen::MatrixXd limit;
  std::string label;
  /// Index label of each member (n for A_n), used in reports.
  std::vector<double> parameters;
};

/// sqrt(weight) || (A + i)^{-1} probe - (B + i)^{-1} probe ||.
/// `weight` is the quadrature weight of the discrete inner product.
double resolvent_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          const Eigen::VectorXd& probe, double weight = 1.0);

/// f clamped to [-m, m].
class CutoffFunction {
 public:
  CutoffFunction(RealFunction base, double level);
  double operator()(double x) const;
  double level() const { return level_; }

 private:
  RealFunction base_;
  double level_;
};

CutoffFunction apply_cutoff(RealFunction f, double m);

/// f(A) v through a dense eigendecomposition.
Eigen::VectorXd apply_function(const Eigen::MatrixXd& a, const RealFunction& f,
                               const Eigen::VectorXd& v);

struct ConvergenceRow {
  double parameter = 0.0;
  double resolvent_distance = 0.0;        ///< on psi
  double basis_resolvent_distance = 0.0;  ///< max over the unit vectors
  double norm_f = 0.0;                    ///< ||f(A_n) psi||
  double norm_f_squared = 0.0;            ///< ||f(A_n)^2 psi||
  double distance_to_limit = 0.0;         ///< ||f(A_n) psi - f(A) psi||
};

struct ConvergenceReport {
  std::string label;
  std::vector<ConvergenceRow> rows;
  double sup_norm_f = 0.0;
  double sup_norm_f_squared = 0.0;
  /// The finite-sequence readings below compare the last member with the
  /// first: "shrinking" means last < first / 2, "growing" means last > 2 first.
  bool resolvent_shrinking = false;
  bool f_converging = false;
  bool squared_growing = false;
};

ConvergenceReport check_theorem31(const OperatorSequence& seq, const RealFunction& f,
                                const Eigen::VectorXd& psi, double weight = 1.0);

/// A_n = multiplication by sqrt(n) on [0, 1/n] in L^2(0, 1), sampled at the k
/// cell midpoints; limit 0. Pair with psi = 1 and weight 1/k.
OperatorSequence multiplication_counterexample(int k, std::span<const int> ns);

/// Grid Hamiltonians for truncate(v, n) with the untruncated grid operator as limit.
OperatorSequence truncated_grid_sequence(const Potential& v, std::span<const double> levels,
                                         double half_width, int n_points);

struct Stabilization {
  bool stabilized = false;
  /// Level index where the final run of small increments begins.
  std::size_t from_index = 0;
};

/// Stabilized when each of the last `run` increments is below
/// max(3 sqrt(se_i^2 + se_{i+1}^2), relative |value_{i+1}|) and none of the
/// levels in that run is flagged unreliable (heavy-tailed estimates have no
/// meaningful standard error).
Stabilization check_stabilization(std::span<const double> values,
                                  std::span<const double> std_errors,
                                  const std::vector<bool>& unreliable = {}, std::size_t run = 3,
                                  double relative = 1e-3);

struct OracleConfig {
  double half_width = 8.0;
  int n_points = 800;
};

struct TruncationLevel {
  double level = 0.0;
  double left = 0.0;  ///< grid-oracle <phi, exp(-t H_n) psi>
  double right = 0.0;
  double right_std_error = 0.0;
  std::size_t divergent_nodes = 0;
  bool agree = false;  ///< |left - right| <= max(3 se, 1% |left|)
};

struct TruncationReport {
  std::vector<TruncationLevel> levels;
  bool left_monotone = false;
  /// Every node estimate and the total are non-decreasing in the level.
  bool right_monotone = false;
  Stabilization left_stable;
  Stabilization right_stable;
  bool all_agree = false;
};

/// Both sides of the Feynman-Kac identity for V_n at each level. The right
/// side reuses the same random numbers at every level.
TruncationReport truncation_study(const Potential& v, const Wavefunction& phi,
                                  const Wavefunction& psi, double t,
                                  std::span<const double> levels, const QuadratureConfig& quad,
                                  const McConfig& mc, const OracleConfig& oracle,
                                  const RngSeed& seed);

struct QLevelReport {
  std::vector<double> levels;
  std::vector<QEstimate> estimates;
  bool monotone = false;
  Stabilization stabilization;
  bool divergence_flagged = false;
};

/// Q(x, y; V_n, t) over the truncation levels with common random numbers.
QLevelReport q_truncation_study(const Potential& v, std::span<const double> x,
                                std::span<const double> y, double t,
                                std::span<const double> levels, const McConfig& mc,
                                const RngSeed& seed);

}  // namespace fk
