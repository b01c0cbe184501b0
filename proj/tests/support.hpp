// Small helpers shared by the unit and acceptance tests.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace fk::test {

struct SampleMean {
  double mean = 0.0;
  double std_error = 0.0;
};

inline SampleMean summarize(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double n = static_cast<double>(xs.size());
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

/// Composite trapezoid rule on [a, b] with n panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

inline double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace fk::test
