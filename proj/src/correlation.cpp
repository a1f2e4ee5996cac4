#include "corrgeo/correlation.hpp"

#include <cmath>
#include <utility>

#include "corrgeo/errors.hpp"
#include "corrgeo/linalg.hpp"
#include "corrgeo/triangular.hpp"

namespace corrgeo {

namespace {

// Mirrors the strict upper triangle onto the lower one.
Eigen::MatrixXd mirror_upper(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd out = A;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out(j, i) = out(i, j);
  return out;
}

double max_asymmetry(const Eigen::MatrixXd& A) {
  return (A - A.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

HollowSymmetricMatrix::HollowSymmetricMatrix(Eigen::MatrixXd entries,
                                             Raw) noexcept
    : entries_(std::move(entries)) {}

HollowSymmetricMatrix::HollowSymmetricMatrix(const Eigen::MatrixXd& A,
                                             double tol) {
  if (A.rows() != A.cols())
    throw InvalidInput("HollowSymmetricMatrix: matrix must be square");
  if (!A.allFinite())
    throw InvalidInput("HollowSymmetricMatrix: non-finite entries");
  if (max_asymmetry(A) > tol)
    throw InvalidInput("HollowSymmetricMatrix: matrix is not symmetric");
  entries_ = mirror_upper(A);
  entries_.diagonal().setZero();
}

HollowSymmetricMatrix HollowSymmetricMatrix::from_packed(
    int n, const Eigen::VectorXd& v) {
  if (v.size() != pair_count(n))
    throw DimensionMismatch("HollowSymmetricMatrix: packed length mismatch");
  return HollowSymmetricMatrix(hollow_from_packed(n, v), Raw{});
}

HollowSymmetricMatrix HollowSymmetricMatrix::zero(int n) {
  return HollowSymmetricMatrix(Eigen::MatrixXd::Zero(n, n), Raw{});
}

Eigen::VectorXd HollowSymmetricMatrix::packed_upper() const {
  return pack_strict_upper(entries_);
}

HollowSymmetricMatrix HollowSymmetricMatrix::operator+(
    const HollowSymmetricMatrix& o) const {
  if (dim() != o.dim())
    throw DimensionMismatch("HollowSymmetricMatrix: dimension mismatch");
  return HollowSymmetricMatrix(entries_ + o.entries_, Raw{});
}

HollowSymmetricMatrix HollowSymmetricMatrix::operator-(
    const HollowSymmetricMatrix& o) const {
  if (dim() != o.dim())
    throw DimensionMismatch("HollowSymmetricMatrix: dimension mismatch");
  return HollowSymmetricMatrix(entries_ - o.entries_, Raw{});
}

HollowSymmetricMatrix HollowSymmetricMatrix::operator*(double s) const {
  return HollowSymmetricMatrix(entries_ * s, Raw{});
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd entries, Raw) noexcept
    : entries_(std::move(entries)) {}

CorrelationMatrix::CorrelationMatrix(const Eigen::MatrixXd& A) {
  ValidationOutcome out = validate_or_shrink(A, /*shrink_allowed=*/false);
  entries_ = std::move(out.matrix.entries_);
}

CorrelationMatrix CorrelationMatrix::unchecked(Eigen::MatrixXd entries) {
  return CorrelationMatrix(std::move(entries), Raw{});
}

ValidationOutcome validate_or_shrink(const Eigen::MatrixXd& A,
                                     bool shrink_allowed) {
  if (A.rows() != A.cols())
    throw InvalidInput("validate_or_shrink: matrix must be square");
  if (!A.allFinite())
    throw InvalidInput("validate_or_shrink: non-finite entries");
  if (max_asymmetry(A) > 1e-8)
    throw InvalidInput("validate_or_shrink: asymmetry exceeds 1e-8");

  Eigen::MatrixXd C = 0.5 * (A + A.transpose());

  const Eigen::VectorXd diag = C.diagonal();
  // Cushion of a few ulps so decimal inputs like 0.999999 stay inside the
  // documented 1e-6 tolerance.
  if ((diag.array() - 1.0).abs().maxCoeff() > 1e-6 * (1.0 + 1e-9))
    throw DiagonalNotUnit(
        "validate_or_shrink: diagonal deviates from 1 by more than 1e-6");
  // Renormalize: D^{-1/2} C D^{-1/2} has an exactly unit diagonal and
  // preserves positive definiteness.
  const Eigen::VectorXd inv_sqrt = diag.array().rsqrt();
  C = (inv_sqrt.asDiagonal() * C * inv_sqrt.asDiagonal()).eval();
  C = mirror_upper(C);
  C.diagonal().setOnes();

  const auto lambda_min = [](const Eigen::MatrixXd& M) {
    return linalg::sym_eig(M).eigenvalues[0];
  };

  double lmin = lambda_min(C);
  if (lmin > 1e-10)
    return {CorrelationMatrix::unchecked(std::move(C)), 0.0};

  if (!shrink_allowed)
    throw NotPositiveDefinite(
        "validate_or_shrink: smallest eigenvalue <= 1e-10 and shrinkage "
        "is disallowed");

  const int n = static_cast<int>(C.rows());
  for (double gamma = 1e-6; gamma <= 1e-1 * (1.0 + 1e-12); gamma *= 10.0) {
    Eigen::MatrixXd shrunk =
        (1.0 - gamma) * C + gamma * Eigen::MatrixXd::Identity(n, n);
    shrunk.diagonal().setOnes();
    if (lambda_min(shrunk) >= 1e-8)
      return {CorrelationMatrix::unchecked(std::move(shrunk)), gamma};
  }
  throw NotPositiveDefinite(
      "validate_or_shrink: shrinkage grid exhausted without reaching a "
      "positive definite matrix");
}

}  // namespace corrgeo
