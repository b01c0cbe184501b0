#include "fk/feynman_kac.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "detail/parallel.hpp"
#include "fk/quadrature.hpp"

namespace fk {

namespace {

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be > 0");
}

void check_mc(const McConfig& mc) {
  if (mc.n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (mc.n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (!(mc.heavy_fraction > 0.0 && mc.heavy_fraction <= 1.0)) {
    throw std::invalid_argument("heavy_fraction must lie in (0, 1]");
  }
}

void check_point_dims(std::span<const double> x, std::span<const double> y, int dim) {
  if (static_cast<int>(x.size()) != dim || static_cast<int>(y.size()) != dim) {
    throw std::invalid_argument("point dimension does not match the potential");
  }
}

// Trapezoid over the sub-grid k = 0, stride, 2 stride, ... of `path`.
double strided_action(const BridgePath& path, int stride, const Potential& v,
                      std::span<const double> x, std::span<const double> y, double t,
                      std::span<double> position) {
  const int n = path.n_steps() / stride;
  const int dim = path.dim();
  const double sqrt_t = std::sqrt(t);
  double acc = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double u = static_cast<double>(j) / n;
    const auto alpha = path.at(j * stride);
    for (int i = 0; i < dim; ++i) {
      position[i] = (1.0 - u) * x[i] + u * y[i] + sqrt_t * alpha[i];
    }
    const double value = v(position);
    acc += (j == 0 || j == n) ? 0.5 * value : value;
  }
  return t * acc / n;
}

bool heavy_tail_flag(const detail::WeightStats& stats, const McConfig& mc) {
  // Too few samples for the top-k share to mean anything.
  if (mc.top_k == 0 || stats.count() < 10 * mc.top_k) return false;
  return stats.top_share() > mc.heavy_fraction;
}

struct TensorNode {
  std::size_t index;
  Point x;
  Point y;
  double weight;  // product of quadrature weights
};

std::vector<TensorNode> tensor_nodes(const Wavefunction& phi, const Wavefunction& psi,
                                     const QuadratureConfig& quad) {
  if (phi.dim() != psi.dim()) throw std::invalid_argument("phi and psi dimensions differ");
  if (quad.nodes_per_axis < 1) throw std::invalid_argument("nodes_per_axis must be >= 1");
  const int dim = phi.dim();
  const int axes = 2 * dim;
  const int m = quad.nodes_per_axis;
  std::vector<QuadratureRule> rules;
  for (int i = 0; i < dim; ++i) rules.push_back(gauss_legendre(m, phi.lower()[i], phi.upper()[i]));
  for (int i = 0; i < dim; ++i) rules.push_back(gauss_legendre(m, psi.lower()[i], psi.upper()[i]));

  std::vector<TensorNode> nodes;
  std::vector<int> idx(axes, 0);
  std::size_t flat = 0;
  while (true) {
    TensorNode node{flat, Point(dim), Point(dim), 1.0};
    for (int a = 0; a < axes; ++a) {
      const double z = rules[a].nodes[idx[a]];
      node.weight *= rules[a].weights[idx[a]];
      if (a < dim) {
        node.x[a] = z;
      } else {
        node.y[a - dim] = z;
      }
    }
    nodes.push_back(std::move(node));
    ++flat;
    int a = 0;
    while (a < axes && ++idx[a] == m) idx[a++] = 0;
    if (a == axes) break;
  }
  return nodes;
}

}  // namespace

double free_kernel(std::span<const double> x, std::span<const double> y, double t) {
  check_time(t);
  if (x.size() != y.size()) throw std::invalid_argument("free_kernel: dimension mismatch");
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
  const double nu = static_cast<double>(x.size());
  return std::pow(2.0 * std::numbers::pi * t, -0.5 * nu) * std::exp(-d2 / (2.0 * t));
}

double action_integral(const BridgePath& path, const Potential& v, std::span<const double> x,
                       std::span<const double> y, double t) {
  check_time(t);
  if (path.dim() != v.dim()) throw std::invalid_argument("action_integral: path/potential dimension mismatch");
  check_point_dims(x, y, v.dim());
  std::vector<double> position(v.dim());
  return strided_action(path, 1, v, x, y, t, position);
}

QEstimate estimate_q(std::span<const double> x, std::span<const double> y, const Potential& v,
                     double t, const McConfig& mc, const RngSeed& seed) {
  check_time(t);
  check_mc(mc);
  check_point_dims(x, y, v.dim());

  const detail::WeightStats prototype(mc.top_k);
  const auto stats = detail::run_chunks(
      mc.n_samples, mc.workers, seed, prototype,
      [&](Engine& engine, std::size_t count, detail::WeightStats& acc) {
        BridgePath path(v.dim(), mc.n_steps);
        std::vector<double> position(v.dim());
        for (std::size_t s = 0; s < count; ++s) {
          resample(path, engine);
          acc.add(std::exp(-strided_action(path, 1, v, x, y, t, position)));
        }
      });

  QEstimate q;
  q.mean = stats.mean();
  q.std_error = stats.std_error();
  q.n_samples = stats.count();
  q.n_steps = mc.n_steps;
  q.heavy_share = stats.top_share();
  q.divergence_suspected = heavy_tail_flag(stats, mc) || !std::isfinite(q.mean);
  return q;
}

MatrixElementEstimate matrix_element(const Wavefunction& phi, const Wavefunction& psi,
                                     const Potential& v, double t, const QuadratureConfig& quad,
                                     const McConfig& mc, const RngSeed& seed) {
  check_time(t);
  check_mc(mc);
  if (phi.dim() != v.dim()) throw std::invalid_argument("matrix_element: wavefunction/potential dimension mismatch");

  auto grid = tensor_nodes(phi, psi, quad);
  MatrixElementEstimate out;
  out.quadrature_nodes = grid.size();
  out.mc_samples_per_node = mc.n_samples;
  out.nodes.resize(grid.size());

  McConfig serial = mc;
  serial.workers = 1;
  detail::parallel_for(grid.size(), mc.workers, [&](std::size_t j) {
    TensorNode& node = grid[j];
    NodeEstimate& est = out.nodes[j];
    est.weight = node.weight * phi(node.x) * psi(node.y) * free_kernel(node.x, node.y, t);
    if (est.weight != 0.0) {
      est.q = estimate_q(node.x, node.y, v, t, serial, seed.child(node.index));
    }
    est.x = std::move(node.x);
    est.y = std::move(node.y);
  });

  double variance = 0.0;
  for (const NodeEstimate& est : out.nodes) {
    if (est.weight == 0.0) continue;
    out.value += est.weight * est.q.mean;
    variance += est.weight * est.weight * est.q.std_error * est.q.std_error;
    if (est.q.divergence_suspected) ++out.divergent_nodes;
  }
  out.std_error = std::sqrt(variance);
  return out;
}

double integrate_kernel(const Wavefunction& phi, const Wavefunction& psi, const Kernel& kernel,
                        const QuadratureConfig& quad) {
  double total = 0.0;
  for (const TensorNode& node : tensor_nodes(phi, psi, quad)) {
    const double w = node.weight * phi(node.x) * psi(node.y);
    if (w != 0.0) total += w * kernel(node.x, node.y);
  }
  return total;
}

namespace {

struct RefineAccumulator {
  std::vector<detail::WeightStats> levels;
  std::vector<detail::WeightStats> diffs;

  void merge(const RefineAccumulator& other) {
    for (std::size_t i = 0; i < levels.size(); ++i) levels[i].merge(other.levels[i]);
    for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i].merge(other.diffs[i]);
  }
};

}  // namespace

RefinementReport refine_steps(std::span<const double> x, std::span<const double> y,
                              const Potential& v, double t, std::span<const int> steps_schedule,
                              const McConfig& mc, const RngSeed& seed) {
  check_time(t);
  check_mc(mc);
  check_point_dims(x, y, v.dim());
  if (steps_schedule.empty()) throw std::invalid_argument("refine_steps: empty schedule");
  for (std::size_t i = 0; i < steps_schedule.size(); ++i) {
    if (steps_schedule[i] < 1 || (i > 0 && steps_schedule[i] <= steps_schedule[i - 1])) {
      throw std::invalid_argument("refine_steps: schedule must be positive and increasing");
    }
  }
  const int finest = steps_schedule.back();
  for (int n : steps_schedule) {
    if (finest % n != 0) {
      throw std::invalid_argument("refine_steps: every resolution must divide the finest one");
    }
  }

  const std::size_t m = steps_schedule.size();
  RefineAccumulator prototype{std::vector<detail::WeightStats>(m),
                              std::vector<detail::WeightStats>(m > 0 ? m - 1 : 0)};
  const auto acc = detail::run_chunks(
      mc.n_samples, mc.workers, seed, prototype,
      [&](Engine& engine, std::size_t count, RefineAccumulator& a) {
        BridgePath path(v.dim(), finest);
        std::vector<double> position(v.dim());
        std::vector<double> weights(m);
        for (std::size_t s = 0; s < count; ++s) {
          resample(path, engine);
          for (std::size_t i = 0; i < m; ++i) {
            const int stride = finest / steps_schedule[i];
            weights[i] = std::exp(-strided_action(path, stride, v, x, y, t, position));
            a.levels[i].add(weights[i]);
          }
          for (std::size_t i = 0; i + 1 < m; ++i) a.diffs[i].add(weights[i] - weights[i + 1]);
        }
      });

  RefinementReport report;
  bool any_zero = false;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    RefinementLevel level;
    level.n_steps = steps_schedule[i];
    level.mean = acc.levels[i].mean();
    level.std_error = acc.levels[i].std_error();
    if (i + 1 < m) {
      level.diff_to_next = acc.diffs[i].mean();
      level.diff_std_error = acc.diffs[i].std_error();
      if (level.diff_to_next == 0.0) {
        any_zero = true;
      } else {
        const double lx = std::log(static_cast<double>(level.n_steps));
        const double ly = std::log(std::abs(level.diff_to_next));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
      }
      if (level.diff_std_error > 0.0) {
        report.max_diff_z =
            std::max(report.max_diff_z, std::abs(level.diff_to_next) / level.diff_std_error);
      } else if (level.diff_to_next != 0.0) {
        report.max_diff_z = std::numeric_limits<double>::infinity();
      }
    }
    report.levels.push_back(level);
  }
  const double k = static_cast<double>(m - 1);
  if (any_zero || m < 3) {
    report.empirical_order = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    report.empirical_order = -slope;
  }
  return report;
}

}  // namespace fk
