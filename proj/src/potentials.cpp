#include "fk/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("potential dimension must be >= 1");
}

std::string format_level(double level) {
  std::ostringstream os;
  os << level;
  return os.str();
}

}  // namespace

Potential::Potential(std::string name, int dim, Evaluator evaluate, Certificate certificate)
    : name_(std::move(name)),
      dim_(dim),
      evaluate_(std::move(evaluate)),
      certificate_(std::move(certificate)) {
  require_dim(dim);
  if (!evaluate_ || !certificate_) {
    throw std::invalid_argument("potential '" + name_ + "' needs an evaluator and a certificate");
  }
}

double Potential::growth_constant(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("growth_constant: eps must be > 0");
  return certificate_(eps);
}

Potential zero_potential(int dim) {
  return Potential("zero", dim, [](std::span<const double>) { return 0.0; },
                   [](double) { return 0.0; });
}

Potential harmonic(double omega, int dim) {
  if (!(omega > 0.0)) throw std::invalid_argument("harmonic: omega must be > 0");
  const double half_w2 = 0.5 * omega * omega;
  return Potential(
      "harmonic", dim, [half_w2](std::span<const double> x) { return half_w2 * squared_norm(x); },
      [](double) { return 0.0; });
}

Potential stark(std::vector<double> field) {
  if (field.empty()) throw std::invalid_argument("stark: field must be non-empty");
  const double f2 = squared_norm(field);
  const int dim = static_cast<int>(field.size());
  return Potential(
      "stark", dim,
      [field = std::move(field)](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < field.size(); ++i) s += field[i] * x[i];
        return s;
      },
      // min over x of F.x + eps |x|^2 is -|F|^2 / (4 eps).
      [f2](double eps) { return f2 / (4.0 * eps); });
}

Potential inverted_quadratic(double c, int dim) {
  if (!(c >= 0.0)) throw std::invalid_argument("inverted_quadratic: c must be >= 0");
  return Potential(
      "inverted-quadratic", dim, [c](std::span<const double> x) { return -c * squared_norm(x); },
      [c](double eps) { return eps >= c ? 0.0 : kInf; });
}

Potential operator+(const Potential& a, const Potential& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("potential sum: dimension mismatch");
  return Potential(
      a.name() + "+" + b.name(), a.dim(),
      [a, b](std::span<const double> x) { return a(x) + b(x); },
      [a, b](double eps) { return a.growth_constant(0.5 * eps) + b.growth_constant(0.5 * eps); });
}

Potential truncate(const Potential& v, double level) {
  if (!(level >= 0.0)) throw std::invalid_argument("truncate: level must be >= 0");
  return Potential(
      v.name() + "|n=" + format_level(level), v.dim(),
      [v, level](std::span<const double> x) { return std::max(v(x), -level); },
      [level](double) { return level; });
}

CertificateReport certify(const Potential& v, double eps, std::span<const Point> points) {
  return certify(v, eps, v.growth_constant(eps), points);
}

CertificateReport certify(const Potential& v, double eps, double claimed_c_eps,
                          std::span<const Point> points) {
  if (!(eps > 0.0)) throw std::invalid_argument("certify: eps must be > 0");
  if (points.empty()) throw std::invalid_argument("certify: no sample points");
  CertificateReport report;
  report.eps = eps;
  report.c_eps = claimed_c_eps;
  report.worst_margin = kInf;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(points[i].size()) != v.dim()) {
      throw std::invalid_argument("certify: sample point dimension mismatch");
    }
    const double margin = v(points[i]) + eps * squared_norm(points[i]) + claimed_c_eps;
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_index = i;
    }
  }
  report.pass = report.worst_margin >= 0.0;
  return report;
}

}  // namespace fk
