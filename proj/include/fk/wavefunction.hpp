// Real test functions phi, psi with an explicit integration box.
#pragma once

#include <functional>
#include <span>

#include "fk/stochastic.hpp"

namespace fk {

enum class WavefunctionKind {
  compact,            ///< identically zero outside the support box
  gaussian_weighted,  ///< box is a truncation radius chosen from a tail tolerance
};

class Wavefunction {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  /// Throws std::invalid_argument when the box is empty or not finite.
  Wavefunction(int dim, Evaluator evaluate, Point lower, Point upper, WavefunctionKind kind);

  /// Zero outside the box for compact wavefunctions.
  double operator()(std::span<const double> x) const;

  int dim() const { return dim_; }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }
  WavefunctionKind kind() const { return kind_; }
  bool inside(std::span<const double> x) const;

 private:
  int dim_;
  Evaluator evaluate_;
  Point lower_;
  Point upper_;
  WavefunctionKind kind_;
};

/// exp(1 - 1/(1 - r^2)) with r = |x - center| / half_width, zero for r >= 1.
/// Peak value 1 at the center.
Wavefunction bump(Point center, double half_width);

/// exp(-|x - center|^2 / (2 sigma^2)) truncated to the smallest box whose
/// complement carries less than `tail_tolerance` of the L^2 mass.
Wavefunction gaussian(Point center, double sigma, double tail_tolerance = 1e-8);

/// Truncation radius (in units of sigma) used by `gaussian`.
double gaussian_truncation_radius(int dim, double tail_tolerance);

/// Integral of phi^2 over the support box by tensor Gauss-Legendre.
double l2_norm_squared(const Wavefunction& phi, int nodes_per_axis = 32);

}  // namespace fk
