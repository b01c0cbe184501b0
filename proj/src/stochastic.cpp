#include "fk/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fk {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint32_t lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

RngSeed RngSeed::child(std::uint64_t index) const {
  return {seed, splitmix64(stream_id ^ splitmix64(index + 1))};
}

Engine make_engine(const RngSeed& seed, std::uint64_t substream) {
  std::seed_seq seq{lo(seed.seed),      hi(seed.seed),   lo(seed.stream_id),
                    hi(seed.stream_id), lo(substream),   hi(substream)};
  return Engine(seq);
}

BridgePath::BridgePath(int dim, int n_steps) : dim_(dim), n_steps_(n_steps) {
  if (dim < 1) throw std::invalid_argument("bridge dimension must be >= 1");
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  values_.assign(static_cast<std::size_t>(n_steps + 1) * dim, 0.0);
}

BridgePath BridgePath::mirrored() const {
  BridgePath out = *this;
  for (double& v : out.values_) v = -v;
  return out;
}

BridgePath BridgePath::coarsened(int n) const {
  if (n < 1 || n_steps_ % n != 0) {
    throw std::invalid_argument("coarse resolution " + std::to_string(n) +
                                " does not divide " + std::to_string(n_steps_));
  }
  BridgePath out(dim_, n);
  const int stride = n_steps_ / n;
  for (int k = 0; k <= n; ++k) {
    std::ranges::copy(at(k * stride), out.at(k).begin());
  }
  return out;
}

void resample(BridgePath& path, Engine& rng) {
  const int n = path.n_steps();
  const int dim = path.dim();
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(n)));

  // Brownian motion first, stored in place.
  auto first = path.at(0);
  std::ranges::fill(first, 0.0);
  for (int k = 1; k <= n; ++k) {
    auto prev = path.at(k - 1);
    auto cur = path.at(k);
    for (int i = 0; i < dim; ++i) cur[i] = prev[i] + gauss(rng);
  }

  std::vector<double> endpoint(path.at(n).begin(), path.at(n).end());
  for (int k = 1; k < n; ++k) {
    const double s = path.time(k);
    auto cur = path.at(k);
    for (int i = 0; i < dim; ++i) cur[i] -= s * endpoint[i];
  }
  std::ranges::fill(path.at(n), 0.0);
}

BridgePath sample_bridge(int dim, int n_steps, Engine& rng) {
  BridgePath path(dim, n_steps);
  resample(path, rng);
  return path;
}

double bridge_covariance(double s, double u) {
  if (!(s >= 0.0 && s <= 1.0 && u >= 0.0 && u <= 1.0)) {
    throw std::invalid_argument("bridge_covariance: times must lie in [0, 1]");
  }
  return std::min(s, u) * (1.0 - std::max(s, u));
}

double MaybeDivergent::value() const {
  if (divergent_) throw std::logic_error("value() of a divergent quantity");
  return value_;
}

double MaybeDivergent::value_or_infinity() const {
  return divergent_ ? std::numeric_limits<double>::infinity() : value_;
}

MaybeDivergent gaussian_exp_moment(double eps, double variance) {
  if (!(variance >= 0.0)) {
    throw std::invalid_argument("gaussian_exp_moment: variance must be >= 0");
  }
  const double product = eps * variance;
  if (product >= 0.5) return MaybeDivergent::divergent();
  return MaybeDivergent::finite(1.0 / std::sqrt(1.0 - 2.0 * product));
}

}  // namespace fk
