// A priori upper bounds on Q(x, y; V, t) for potentials obeying
//   V(x) >= -eps |x|^2 - C_eps.
//
// Choosing eps = delta0 / t^2 with 0 < delta0 < 1 gives
//   Q <= sqrt(2) (1 - delta0)^{-nu/2} exp(C_eps t + 2 delta0 (|x|^2 + |y|^2) / t),
// and the intermediate Jensen step gives the tighter
//   Q <= exp(C_eps t + 2 eps t (|x|^2 + |y|^2)) E exp(2 eps t^2 |alpha(1/2)|^2).
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fk/feynman_kac.hpp"
#include "fk/potentials.hpp"
#include "fk/stochastic.hpp"

namespace fk {

struct BoundParameters {
  double t = 1.0;
  double delta0 = 0.5;
  double c_eps = 0.0;

  double eps() const { return delta0 / (t * t); }

  /// Takes C_eps from the potential's certificate at eps = delta0 / t^2.
  static BoundParameters for_potential(const Potential& v, double t, double delta0);
};

/// Throws std::invalid_argument unless 0 < delta0 < 1 and t > 0.
double theorem21_bound(std::span<const double> x, std::span<const double> y,
                       const BoundParameters& params);

/// Divergent exactly when eps t^2 >= 1.
MaybeDivergent jensen_chain_bound(std::span<const double> x, std::span<const double> y,
                                  const Potential& v, double t, double eps);

struct SweepPoint {
  Point x;
  Point y;
  QEstimate q;
  double jensen = 0.0;  ///< +inf when divergent
  double bound = 0.0;
  bool pass = false;        ///< q.mean - 3 se <= bound
  bool chain_pass = false;  ///< q.mean - 3 se <= jensen <= bound
  bool rechecked = false;   ///< an apparent violation was re-run with doubled samples
};

struct SweepReport {
  double t = 0.0;
  double delta = 0.0;
  BoundParameters params;
  std::vector<SweepPoint> points;
  std::size_t passes = 0;
  std::size_t chain_passes = 0;
};

/// Square grid of (x, y) pairs in one dimension, `per_axis` points per axis.
std::vector<std::pair<Point, Point>> square_grid(double half_width, int per_axis);

/// Checks Q <= D exp(delta |x|^2 + delta |y|^2) over `grid`, with delta0 = delta t / 2.
/// A point whose first estimate violates the bound is re-estimated with twice
/// the samples on a fresh stream and only counted as a failure if that persists.
SweepReport verify_bound_sweep(const Potential& v, double t, double delta,
                               std::span<const std::pair<Point, Point>> grid, const McConfig& mc,
                               const RngSeed& seed);

}  // namespace fk
