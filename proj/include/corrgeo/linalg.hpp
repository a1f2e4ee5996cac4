#pragma once

#include <Eigen/Dense>

namespace corrgeo::linalg {

/// Spectral decomposition A = V diag(eigenvalues) V^T, eigenvalues ascending.
struct EigResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Thin SVD M = U diag(singular_values) V^T with singular values descending
/// and clamped to >= 0. U is n x k, V is k x k (requires k <= n).
struct ThinSvd {
  Eigen::MatrixXd U;
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd V;
};

/// Eigendecomposition of a symmetric matrix. Throws InvalidInput on
/// non-finite entries.
EigResult sym_eig(const Eigen::MatrixXd& A);

/// Matrix logarithm of a symmetric positive-definite matrix, computed from
/// the spectral decomposition. Throws NotPositiveDefinite when the computed
/// smallest eigenvalue is <= 0. Near-singular inputs are the caller's
/// responsibility (validate_or_shrink gates external matrices).
Eigen::MatrixXd sym_logm(const Eigen::MatrixXd& A);

/// Matrix exponential of a symmetric matrix (always SPD).
Eigen::MatrixXd sym_expm(const Eigen::MatrixXd& S);

/// Lower Cholesky factor with strictly positive diagonal.
/// Throws NotPositiveDefinite on a failed pivot.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& A);

/// Logarithm of a unit-diagonal lower-triangular matrix L = I + N via the
/// finite nilpotent series log(I+N) = sum_{k=1}^{n-1} (-1)^{k+1} N^k / k.
/// The result is strictly lower triangular.
Eigen::MatrixXd tri_unit_log(const Eigen::MatrixXd& L);

/// Exponential of a strictly lower-triangular matrix via the finite series
/// exp(N) = sum_{k=0}^{n-1} N^k / k!. The result has unit diagonal.
Eigen::MatrixXd tri_unit_exp(const Eigen::MatrixXd& N);

/// Thin SVD of an n x k matrix, k <= n.
ThinSvd svd_thin(const Eigen::MatrixXd& M);

}  // namespace corrgeo::linalg
