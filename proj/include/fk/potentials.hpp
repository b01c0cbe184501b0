// Potentials with quadratic lower-bound certificates.
//
// Every potential carries a growth certificate eps -> C_eps asserting
//     V(x) >= -eps |x|^2 - C_eps.
// A certificate value of +inf means no finite constant exists for that eps.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fk/stochastic.hpp"

namespace fk {

class Potential {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;
  using Certificate = std::function<double(double)>;

  /// `evaluate` and `certificate` must be pure; they are called concurrently.
  Potential(std::string name, int dim, Evaluator evaluate, Certificate certificate);

  double operator()(std::span<const double> x) const { return evaluate_(x); }

  /// C_eps for eps > 0.
  double growth_constant(double eps) const;

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  int dim_;
  Evaluator evaluate_;
  Certificate certificate_;
};

Potential zero_potential(int dim = 1);

/// V(x) = omega^2 |x|^2 / 2.
Potential harmonic(double omega, int dim = 1);

/// V(x) = F . x, with C_eps = |F|^2 / (4 eps).
Potential stark(std::vector<double> field);

/// V(x) = -c |x|^2. Only certified for eps >= c; this is the fixed-C_2 regime.
Potential inverted_quadratic(double c, int dim = 1);

/// Pointwise sum; C_eps = C_a(eps/2) + C_b(eps/2).
Potential operator+(const Potential& a, const Potential& b);

/// V_n(x) = max(V(x), -level), bounded below by -level, so C_eps = level.
Potential truncate(const Potential& v, double level);

struct CertificateReport {
  bool pass = true;
  double eps = 0.0;
  double c_eps = 0.0;
  /// min over points of V(x) + eps |x|^2 + C_eps.
  double worst_margin = 0.0;
  std::size_t worst_index = 0;
};

/// Spot-checks the potential's own certificate at `points`.
CertificateReport certify(const Potential& v, double eps, std::span<const Point> points);

/// Spot-checks an externally claimed constant C_eps.
CertificateReport certify(const Potential& v, double eps, double claimed_c_eps,
                          std::span<const Point> points);

}  // namespace fk
