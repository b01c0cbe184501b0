#include "fk/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fk/errors.hpp"
#include "fk/feynman_kac.hpp"

namespace fk {

double SpectralDecomposition::reconstruction_error(const Eigen::MatrixXd& h) const {
  const Eigen::MatrixXd rebuilt = eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  return (h - rebuilt).norm() / h.norm();
}

double SpectralDecomposition::orthogonality_error() const {
  const auto n = eigenvectors.cols();
  return (eigenvectors.transpose() * eigenvectors - Eigen::MatrixXd::Identity(n, n)).norm();
}

Eigen::VectorXd SpectralDecomposition::apply(const std::function<double(double)>& f,
                                             const Eigen::VectorXd& v) const {
  Eigen::VectorXd coeff = eigenvectors.transpose() * v;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff[k] *= f(eigenvalues[k]);
  return eigenvectors * coeff;
}

Eigen::MatrixXd SpectralDecomposition::function_of(const std::function<double(double)>& f) const {
  Eigen::VectorXd fl(eigenvalues.size());
  for (Eigen::Index k = 0; k < fl.size(); ++k) fl[k] = f(eigenvalues[k]);
  return eigenvectors * fl.asDiagonal() * eigenvectors.transpose();
}

SpectralDecomposition decompose(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0) {
    throw std::invalid_argument("decompose: matrix must be square and non-empty");
  }
  const double asym = (symmetric - symmetric.transpose()).norm();
  if (asym > 1e-12 * std::max(1.0, symmetric.norm())) {
    throw std::invalid_argument("decompose: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) throw NumericalError("decompose: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXd GridOperator::dense() const {
  const int n = n_points();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = diagonal_[i];
    if (i + 1 < n) {
      m(i, i + 1) = off_diagonal_;
      m(i + 1, i) = off_diagonal_;
    }
  }
  return m;
}

Eigen::MatrixXd GridOperator::semigroup(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup: t must be >= 0");
  return spectrum_.function_of([t](double lambda) { return std::exp(-t * lambda); });
}

double GridOperator::kernel(double x, double y, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("kernel: t must be > 0");
  const int n = n_points();
  const auto& u = spectrum_.eigenvectors;
  const auto& lambda = spectrum_.eigenvalues;

  // Node i sits at -L + (i + 1) h; index -1 and n are the walls.
  auto bracket = [&](double z, int& lo, double& frac) {
    const double s = (z + half_width_) / h_ - 1.0;
    lo = static_cast<int>(std::floor(s));
    frac = s - lo;
    if (lo < -1 || lo > n || (lo == n && frac > 0.0)) {
      throw std::invalid_argument("kernel: point outside [-L, L]");
    }
  };
  int ix = 0, iy = 0;
  double fx = 0.0, fy = 0.0;
  bracket(x, ix, fx);
  bracket(y, iy, fy);

  auto entry = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= n || j >= n) return 0.0;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += std::exp(-t * lambda[k]) * u(i, k) * u(j, k);
    return s / h_;
  };
  return (1 - fx) * (1 - fy) * entry(ix, iy) + fx * (1 - fy) * entry(ix + 1, iy) +
         (1 - fx) * fy * entry(ix, iy + 1) + fx * fy * entry(ix + 1, iy + 1);
}

GridOperator build_grid_operator(const Potential& v, double half_width, int n_points) {
  if (v.dim() != 1) throw std::invalid_argument("build_grid_operator: only dimension 1 is supported");
  if (n_points < 3) throw std::invalid_argument("build_grid_operator: n_points must be >= 3");
  if (!(half_width > 0.0)) throw std::invalid_argument("build_grid_operator: L must be > 0");

  GridOperator op;
  op.half_width_ = half_width;
  op.h_ = 2.0 * half_width / (n_points + 1);
  op.off_diagonal_ = -0.5 / (op.h_ * op.h_);
  op.nodes_.resize(n_points);
  op.diagonal_.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double x = -half_width + (i + 1) * op.h_;
    op.nodes_[i] = x;
    op.diagonal_[i] = 1.0 / (op.h_ * op.h_) + v(std::span<const double>(&x, 1));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  const Eigen::VectorXd sub = Eigen::VectorXd::Constant(n_points - 1, op.off_diagonal_);
  solver.computeFromTridiagonal(op.diagonal_, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("grid operator eigensolver failed");
  op.spectrum_ = {solver.eigenvalues(), solver.eigenvectors()};
  return op;
}

double semigroup_matrix_element(const GridOperator& op, const Wavefunction& phi,
                                const Wavefunction& psi, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup_matrix_element: t must be >= 0");
  if (phi.dim() != 1 || psi.dim() != 1) {
    throw std::invalid_argument("semigroup_matrix_element: wavefunctions must be one-dimensional");
  }
  const double l = op.half_width();
  for (const Wavefunction* w : {&phi, &psi}) {
    if (w->lower()[0] < -l || w->upper()[0] > l) {
      throw std::invalid_argument("semigroup_matrix_element: support exceeds the grid domain");
    }
  }
  const int n = op.n_points();
  Eigen::VectorXd p(n), q(n);
  for (int i = 0; i < n; ++i) {
    const double x = op.nodes()[i];
    p[i] = phi(std::span<const double>(&x, 1));
    q[i] = psi(std::span<const double>(&x, 1));
  }
  const auto& spec = op.spectrum();
  const Eigen::VectorXd cp = spec.eigenvectors.transpose() * p;
  const Eigen::VectorXd cq = spec.eigenvectors.transpose() * q;
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += std::exp(-t * spec.eigenvalues[k]) * cp[k] * cq[k];
  return op.spacing() * total;
}

double stark_kernel(double x, double y, double field, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("stark_kernel: t must be > 0");
  const double free = free_kernel(std::span<const double>(&x, 1), std::span<const double>(&y, 1), t);
  return free * std::exp(-t * field * (x + y) / 2.0 + field * field * t * t * t / 24.0);
}

double mehler_kernel(double x, double y, double omega, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("mehler_kernel: t must be > 0");
  if (!(omega > 0.0)) throw std::invalid_argument("mehler_kernel: omega must be > 0");
  const double s = std::sinh(omega * t);
  const double c = std::cosh(omega * t);
  return std::sqrt(omega / (2.0 * std::numbers::pi * s)) *
         std::exp(-omega * ((x * x + y * y) * c - 2.0 * x * y) / (2.0 * s));
}

}  // namespace fk
