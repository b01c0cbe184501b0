#include "fk/wavefunction.hpp"

#include <cmath>
#include <stdexcept>

#include "fk/quadrature.hpp"

namespace fk {

Wavefunction::Wavefunction(int dim, Evaluator evaluate, Point lower, Point upper,
                           WavefunctionKind kind)
    : dim_(dim),
      evaluate_(std::move(evaluate)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      kind_(kind) {
  if (dim < 1) throw std::invalid_argument("wavefunction dimension must be >= 1");
  if (static_cast<int>(lower_.size()) != dim || static_cast<int>(upper_.size()) != dim) {
    throw std::invalid_argument("wavefunction support box has wrong dimension");
  }
  for (int i = 0; i < dim; ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
      throw std::invalid_argument("wavefunction support must be bounded (set a truncation radius)");
    }
    if (!(upper_[i] > lower_[i])) throw std::invalid_argument("wavefunction support box is empty");
  }
  if (!evaluate_) throw std::invalid_argument("wavefunction needs an evaluator");
}

bool Wavefunction::inside(std::span<const double> x) const {
  for (int i = 0; i < dim_; ++i) {
    if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
  }
  return true;
}

double Wavefunction::operator()(std::span<const double> x) const {
  if (kind_ == WavefunctionKind::compact && !inside(x)) return 0.0;
  return evaluate_(x);
}

Wavefunction bump(Point center, double half_width) {
  if (!(half_width > 0.0)) throw std::invalid_argument("bump: half_width must be > 0");
  Point lower = center;
  Point upper = center;
  for (std::size_t i = 0; i < center.size(); ++i) {
    lower[i] -= half_width;
    upper[i] += half_width;
  }
  const int dim = static_cast<int>(center.size());
  return Wavefunction(
      dim,
      [center = std::move(center), half_width](std::span<const double> x) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < center.size(); ++i) {
          const double d = (x[i] - center[i]) / half_width;
          r2 += d * d;
        }
        if (r2 >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - r2));
      },
      std::move(lower), std::move(upper), WavefunctionKind::compact);
}

double gaussian_truncation_radius(int dim, double tail_tolerance) {
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
    throw std::invalid_argument("gaussian: tail tolerance must lie in (0, 1)");
  }
  // |phi|^2 is a Gaussian with per-axis std sigma/sqrt(2); the mass outside
  // [-R, R] on one axis is erfc(R / sigma). Union bound over the axes.
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (dim * std::erfc(mid) > tail_tolerance) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

Wavefunction gaussian(Point center, double sigma, double tail_tolerance) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be > 0");
  const int dim = static_cast<int>(center.size());
  const double radius = sigma * gaussian_truncation_radius(dim, tail_tolerance);
  Point lower = center;
  Point upper = center;
  for (int i = 0; i < dim; ++i) {
    lower[i] -= radius;
    upper[i] += radius;
  }
  return Wavefunction(
      dim,
      [center = std::move(center), sigma](std::span<const double> x) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < center.size(); ++i) {
          const double d = x[i] - center[i];
          r2 += d * d;
        }
        return std::exp(-r2 / (2.0 * sigma * sigma));
      },
      std::move(lower), std::move(upper), WavefunctionKind::gaussian_weighted);
}

double l2_norm_squared(const Wavefunction& phi, int nodes_per_axis) {
  const int dim = phi.dim();
  std::vector<QuadratureRule> rules;
  for (int i = 0; i < dim; ++i) {
    rules.push_back(gauss_legendre(nodes_per_axis, phi.lower()[i], phi.upper()[i]));
  }
  std::vector<int> idx(dim, 0);
  Point x(dim);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int i = 0; i < dim; ++i) {
      x[i] = rules[i].nodes[idx[i]];
      w *= rules[i].weights[idx[i]];
    }
    const double v = phi(x);
    total += w * v * v;
    int axis = 0;
    while (axis < dim && ++idx[axis] == nodes_per_axis) idx[axis++] = 0;
    if (axis == dim) break;
  }
  return total;
}

}  // namespace fk
