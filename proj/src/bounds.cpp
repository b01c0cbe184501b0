#include "fk/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "detail/parallel.hpp"

namespace fk {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("bound: point dimension mismatch");
}

}  // namespace

BoundParameters BoundParameters::for_potential(const Potential& v, double t, double delta0) {
  if (!(t > 0.0)) throw std::invalid_argument("bound: t must be > 0");
  BoundParameters p{t, delta0, 0.0};
  p.c_eps = v.growth_constant(p.eps());
  return p;
}

double theorem21_bound(std::span<const double> x, std::span<const double> y,
                       const BoundParameters& params) {
  if (!(params.delta0 > 0.0 && params.delta0 < 1.0)) {
    throw std::invalid_argument("theorem21_bound: delta0 must lie in (0, 1)");
  }
  if (!(params.t > 0.0)) throw std::invalid_argument("theorem21_bound: t must be > 0");
  check_pair(x, y);
  const double nu = static_cast<double>(x.size());
  const double r2 = squared_norm(x) + squared_norm(y);
  return std::numbers::sqrt2 * std::pow(1.0 - params.delta0, -0.5 * nu) *
         std::exp(params.c_eps * params.t + 2.0 * params.delta0 * r2 / params.t);
}

MaybeDivergent jensen_chain_bound(std::span<const double> x, std::span<const double> y,
                                  const Potential& v, double t, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("jensen_chain_bound: eps must be > 0");
  if (!(t > 0.0)) throw std::invalid_argument("jensen_chain_bound: t must be > 0");
  check_pair(x, y);
  // Var alpha_i(1/2) = 1/4; the coordinates are independent.
  const MaybeDivergent moment = gaussian_exp_moment(2.0 * eps * t * t, 0.25);
  if (moment.is_divergent()) return moment;
  const double c_eps = v.growth_constant(eps);
  if (!std::isfinite(c_eps)) return MaybeDivergent::divergent();
  const double nu = static_cast<double>(x.size());
  const double r2 = squared_norm(x) + squared_norm(y);
  return MaybeDivergent::finite(std::exp(c_eps * t + 2.0 * eps * t * r2) *
                                std::pow(moment.value(), nu));
}

std::vector<std::pair<Point, Point>> square_grid(double half_width, int per_axis) {
  if (per_axis < 1) throw std::invalid_argument("square_grid: per_axis must be >= 1");
  std::vector<double> axis(per_axis, 0.0);
  for (int i = 0; i < per_axis; ++i) {
    axis[i] = per_axis == 1 ? 0.0 : -half_width + 2.0 * half_width * i / (per_axis - 1);
  }
  std::vector<std::pair<Point, Point>> grid;
  for (double x : axis) {
    for (double y : axis) grid.push_back({Point{x}, Point{y}});
  }
  return grid;
}

SweepReport verify_bound_sweep(const Potential& v, double t, double delta,
                               std::span<const std::pair<Point, Point>> grid, const McConfig& mc,
                               const RngSeed& seed) {
  if (!(delta > 0.0)) throw std::invalid_argument("verify_bound_sweep: delta must be > 0");
  SweepReport report;
  report.t = t;
  report.delta = delta;
  report.params = BoundParameters::for_potential(v, t, 0.5 * delta * t);
  report.points.resize(grid.size());

  McConfig serial = mc;
  serial.workers = 1;
  McConfig doubled = serial;
  doubled.n_samples *= 2;

  detail::parallel_for(grid.size(), mc.workers, [&](std::size_t i) {
    SweepPoint& p = report.points[i];
    p.x = grid[i].first;
    p.y = grid[i].second;
    p.bound = theorem21_bound(p.x, p.y, report.params);
    p.jensen = jensen_chain_bound(p.x, p.y, v, t, report.params.eps()).value_or_infinity();
    p.q = estimate_q(p.x, p.y, v, t, serial, seed.child(i));
    auto lower = [](const QEstimate& q) { return q.mean - 3.0 * q.std_error; };
    if (lower(p.q) > p.bound || lower(p.q) > p.jensen) {
      p.rechecked = true;
      p.q = estimate_q(p.x, p.y, v, t, doubled, seed.child(grid.size() + i));
    }
    p.pass = lower(p.q) <= p.bound;
    p.chain_pass = lower(p.q) <= p.jensen && p.jensen <= p.bound;
  });
  for (const SweepPoint& p : report.points) {
    report.passes += p.pass ? 1 : 0;
    report.chain_passes += p.chain_pass ? 1 : 0;
  }
  return report;
}

}  // namespace fk
