// Brownian bridge sampling and Gaussian moment helpers.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fk {

using Point = std::vector<double>;

double squared_norm(std::span<const double> x);

/// Identifies one reproducible random stream. Workers derive independent
/// streams from the same seed by varying `stream_id`.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Deterministically derived stream, distinct for each `index`.
  RngSeed child(std::uint64_t index) const;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

using Engine = std::mt19937_64;

/// Engine for (seed, stream_id, substream). Identical triples give identical
/// sequences.
Engine make_engine(const RngSeed& seed, std::uint64_t substream = 0);

/// One Brownian bridge realization on the uniform grid k / n_steps over [0, 1].
class BridgePath {
 public:
  BridgePath(int dim, int n_steps);

  int dim() const { return dim_; }
  int n_steps() const { return n_steps_; }
  double time(int k) const { return static_cast<double>(k) / n_steps_; }

  std::span<const double> at(int k) const {
    return {values_.data() + static_cast<std::size_t>(k) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  std::span<double> at(int k) {
    return {values_.data() + static_cast<std::size_t>(k) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  std::span<const double> values() const { return values_; }

  /// The path -alpha, which has the same law.
  BridgePath mirrored() const;

  /// Restriction to the coarser grid k / n. Requires n to divide n_steps.
  BridgePath coarsened(int n) const;

 private:
  int dim_;
  int n_steps_;
  std::vector<double> values_;
};

/// Fills `path` with a fresh bridge: Gaussian increments of variance
/// 1/n_steps, cumulative sums b(k/n), then alpha(s) = b(s) - s b(1).
void resample(BridgePath& path, Engine& rng);

BridgePath sample_bridge(int dim, int n_steps, Engine& rng);

/// E(alpha_i(s) alpha_i(u)) = min(s,u) (1 - max(s,u)).
double bridge_covariance(double s, double u);

/// A real value or an explicit "the expectation is infinite" marker.
class MaybeDivergent {
 public:
  static MaybeDivergent finite(double value) { return MaybeDivergent(value, false); }
  static MaybeDivergent divergent() { return MaybeDivergent(0.0, true); }

  bool is_divergent() const { return divergent_; }
  /// Throws std::logic_error when divergent.
  double value() const;
  /// The value, or +inf when divergent.
  double value_or_infinity() const;

 private:
  MaybeDivergent(double v, bool d) : value_(v), divergent_(d) {}
  double value_;
  bool divergent_;
};

/// E(exp(eps X^2)) for X ~ N(0, variance): (1 - 2 eps variance)^{-1/2} while
/// eps * variance < 1/2, divergent otherwise.
MaybeDivergent gaussian_exp_moment(double eps, double variance);

}  // namespace fk
