// Feynman-Kac evaluation of <phi, exp(-tH) psi> for H = -Delta/2 + V.
//
//   Q(x, y; V, t) = E exp(-int_0^t V((1 - s/t) x + (s/t) y + sqrt(t) alpha(s/t)) ds)
//   <phi, exp(-tH) psi> = int int phi(x) psi(y) K_0(x, y; t) Q(x, y; V, t) dx dy
//
// with alpha the Brownian bridge and K_0 the free heat kernel.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fk/potentials.hpp"
#include "fk/stochastic.hpp"
#include "fk/wavefunction.hpp"

namespace fk {

struct McConfig {
  std::size_t n_samples = 10000;
  int n_steps = 64;
  /// Heavy-tail heuristic: flag when the top_k samples carry more than
  /// heavy_fraction of the total weight.
  std::size_t top_k = 10;
  double heavy_fraction = 0.5;
  unsigned workers = 1;
};

struct QuadratureConfig {
  int nodes_per_axis = 32;
};

struct QEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  int n_steps = 0;
  /// Heuristic only: a Monte Carlo mean cannot certify an infinite expectation.
  bool divergence_suspected = false;
  double heavy_share = 0.0;
};

struct NodeEstimate {
  Point x;
  Point y;
  /// Quadrature weight times phi(x) psi(y) K_0(x, y; t).
  double weight = 0.0;
  QEstimate q;
};

struct MatrixElementEstimate {
  double value = 0.0;
  /// sqrt(sum_j weight_j^2 se_j^2) over independent per-node estimates.
  double std_error = 0.0;
  std::size_t quadrature_nodes = 0;
  std::size_t mc_samples_per_node = 0;
  std::size_t divergent_nodes = 0;
  std::vector<NodeEstimate> nodes;
};

/// (2 pi t)^{-nu/2} exp(-|x - y|^2 / (2t)).
double free_kernel(std::span<const double> x, std::span<const double> y, double t);

/// Trapezoidal approximation of int_0^t V(...) ds along `path`.
double action_integral(const BridgePath& path, const Potential& v, std::span<const double> x,
                       std::span<const double> y, double t);

QEstimate estimate_q(std::span<const double> x, std::span<const double> y, const Potential& v,
                     double t, const McConfig& mc, const RngSeed& seed);

/// Node j of the tensor grid uses the stream seed.child(j), so results do not
/// depend on mc.workers and repeated calls reuse the same paths per node.
MatrixElementEstimate matrix_element(const Wavefunction& phi, const Wavefunction& psi,
                                     const Potential& v, double t, const QuadratureConfig& quad,
                                     const McConfig& mc, const RngSeed& seed);

using Kernel = std::function<double(std::span<const double>, std::span<const double>)>;

/// int int phi(x) psi(y) kernel(x, y) dx dy on the same tensor grid that
/// matrix_element uses.
double integrate_kernel(const Wavefunction& phi, const Wavefunction& psi, const Kernel& kernel,
                        const QuadratureConfig& quad);

struct RefinementLevel {
  int n_steps = 0;
  double mean = 0.0;
  double std_error = 0.0;
  /// mean(n_steps) - mean(next n_steps), from paired samples. Zero on the last level.
  double diff_to_next = 0.0;
  double diff_std_error = 0.0;
};

struct RefinementReport {
  std::vector<RefinementLevel> levels;
  /// Least-squares p in |diff| ~ n^{-p}; NaN when a difference is exactly 0.
  double empirical_order = 0.0;
  /// max |diff| / diff_std_error (0 when all differences vanish identically).
  double max_diff_z = 0.0;
};

/// Every sample is drawn at the finest resolution and restricted to the coarser
/// grids, so all resolutions share random numbers. Each entry of `steps_schedule`
/// must divide the last one.
RefinementReport refine_steps(std::span<const double> x, std::span<const double> y,
                              const Potential& v, double t, std::span<const int> steps_schedule,
                              const McConfig& mc, const RngSeed& seed);

}  // namespace fk
