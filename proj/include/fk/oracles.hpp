// Independent ground truth for exp(-tH): closed-form kernels and a dense
// finite-difference spectral solver on [-L, L] with Dirichlet walls.
#pragma once

#include <Eigen/Dense>
#include <functional>

#include "fk/potentials.hpp"
#include "fk/wavefunction.hpp"

namespace fk {

/// H = U diag(eigenvalues) U^T with eigenvalues ascending.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  /// ||H - U L U^T||_F / ||H||_F.
  double reconstruction_error(const Eigen::MatrixXd& h) const;
  /// ||U^T U - I||_F.
  double orthogonality_error() const;

  /// f(H) v through the functional calculus.
  Eigen::VectorXd apply(const std::function<double(double)>& f, const Eigen::VectorXd& v) const;
  Eigen::MatrixXd function_of(const std::function<double(double)>& f) const;
};

/// Throws std::invalid_argument for non-square or non-symmetric input.
SpectralDecomposition decompose(const Eigen::MatrixXd& symmetric);

/// Three-point stencil for -1/2 d^2/dx^2 + V on n interior nodes of [-L, L].
class GridOperator {
 public:
  double half_width() const { return half_width_; }
  int n_points() const { return static_cast<int>(nodes_.size()); }
  double spacing() const { return h_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& diagonal() const { return diagonal_; }
  double off_diagonal() const { return off_diagonal_; }
  const SpectralDecomposition& spectrum() const { return spectrum_; }

  Eigen::MatrixXd dense() const;

  /// exp(-tH) as a matrix acting on nodal values.
  Eigen::MatrixXd semigroup(double t) const;

  /// Integral kernel exp(-tH)(x, y) ~ [exp(-tH)]_ij / h, bilinearly interpolated
  /// between nodes and vanishing on the walls.
  double kernel(double x, double y, double t) const;

 private:
  friend GridOperator build_grid_operator(const Potential& v, double half_width, int n_points);

  double half_width_ = 0.0;
  double h_ = 0.0;
  double off_diagonal_ = 0.0;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd diagonal_;
  SpectralDecomposition spectrum_;
};

/// One-dimensional only; n_points >= 3.
GridOperator build_grid_operator(const Potential& v, double half_width, int n_points);

/// h sum_k exp(-t lambda_k) <phi, u_k> <u_k, psi> with nodal inner products.
/// t = 0 is allowed. Supports must lie inside [-L, L].
double semigroup_matrix_element(const GridOperator& op, const Wavefunction& phi,
                                const Wavefunction& psi, double t);

/// Kernel of exp(-t(-Delta/2 + F x)) in one dimension:
///   K_0(x, y; t) exp(-t F (x + y) / 2 + F^2 t^3 / 24).
double stark_kernel(double x, double y, double field, double t);

/// Mehler kernel of exp(-t(-Delta/2 + omega^2 x^2 / 2)).
double mehler_kernel(double x, double y, double omega, double t);

}  // namespace fk
