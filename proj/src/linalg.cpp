#include "corrgeo/linalg.hpp"

#include <cmath>

#include "corrgeo/errors.hpp"

namespace corrgeo::linalg {

namespace {

void require_square(const Eigen::MatrixXd& A, const char* who) {
  if (A.rows() != A.cols())
    throw InvalidInput(std::string(who) + ": matrix must be square");
}

void require_finite(const Eigen::MatrixXd& A, const char* who) {
  if (!A.allFinite())
    throw InvalidInput(std::string(who) + ": non-finite entries");
}

}  // namespace

EigResult sym_eig(const Eigen::MatrixXd& A) {
  require_square(A, "sym_eig");
  require_finite(A, "sym_eig");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  if (solver.info() != Eigen::Success)
    throw InvalidInput("sym_eig: eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXd sym_logm(const Eigen::MatrixXd& A) {
  const EigResult eig = sym_eig(A);
  // Only a provably nonpositive bottom eigenvalue is rejected: valid
  // exponentials of strongly coupled hollow matrices reach eigenvalue
  // ratios of 1e-13 and below, which a relative clamp would misclassify.
  // Guarding against near-singular *input* matrices is the job of
  // validate_or_shrink, not of this kernel.
  if (eig.eigenvalues[0] <= 0.0)
    throw NotPositiveDefinite("sym_logm: matrix is not positive definite");
  const Eigen::VectorXd log_vals = eig.eigenvalues.array().log();
  return eig.eigenvectors * log_vals.asDiagonal() *
         eig.eigenvectors.transpose();
}

Eigen::MatrixXd sym_expm(const Eigen::MatrixXd& S) {
  const EigResult eig = sym_eig(S);
  const Eigen::VectorXd exp_vals = eig.eigenvalues.array().exp();
  return eig.eigenvectors * exp_vals.asDiagonal() *
         eig.eigenvectors.transpose();
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& A) {
  require_square(A, "cholesky");
  require_finite(A, "cholesky");
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("cholesky: matrix is not positive definite");
  return llt.matrixL();
}

Eigen::MatrixXd tri_unit_log(const Eigen::MatrixXd& L) {
  require_square(L, "tri_unit_log");
  require_finite(L, "tri_unit_log");
  const int n = static_cast<int>(L.rows());
  const Eigen::MatrixXd N = L - Eigen::MatrixXd::Identity(n, n);
  // N is nilpotent of order n, so the series has exactly n-1 terms.
  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  double sign = 1.0;
  for (int k = 1; k <= n - 1; ++k) {
    power = power * N;
    result += (sign / k) * power;
    sign = -sign;
  }
  return result;
}

Eigen::MatrixXd tri_unit_exp(const Eigen::MatrixXd& N) {
  require_square(N, "tri_unit_exp");
  require_finite(N, "tri_unit_exp");
  const int n = static_cast<int>(N.rows());
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  double factorial = 1.0;
  for (int k = 1; k <= n - 1; ++k) {
    power = power * N;
    factorial *= k;
    result += power / factorial;
  }
  return result;
}

ThinSvd svd_thin(const Eigen::MatrixXd& M) {
  require_finite(M, "svd_thin");
  if (M.cols() > M.rows())
    throw InvalidInput("svd_thin: requires cols <= rows");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  out.singular_values = out.singular_values.cwiseMax(0.0);
  return out;
}

}  // namespace corrgeo::linalg
