#pragma once

#include <Eigen/Dense>
#include <vector>

namespace corrgeo {

/// Symmetric matrix with zero diagonal (the Off-log coordinate space).
/// Construction mirrors the strict upper triangle and zeroes the diagonal,
/// so stored entries are exactly symmetric and exactly hollow.
class HollowSymmetricMatrix {
 public:
  /// From a full matrix: symmetry within `tol` is required, then the strict
  /// upper triangle is mirrored and the diagonal discarded.
  explicit HollowSymmetricMatrix(const Eigen::MatrixXd& A, double tol = 1e-8);

  /// From packed strict-upper values in canonical pair order.
  static HollowSymmetricMatrix from_packed(int n, const Eigen::VectorXd& v);

  static HollowSymmetricMatrix zero(int n);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  Eigen::VectorXd packed_upper() const;

  /// Frobenius norm of the full matrix (both triangles counted).
  double frobenius_norm() const { return entries_.norm(); }

  HollowSymmetricMatrix operator+(const HollowSymmetricMatrix& o) const;
  HollowSymmetricMatrix operator-(const HollowSymmetricMatrix& o) const;
  HollowSymmetricMatrix operator*(double s) const;
  HollowSymmetricMatrix operator-() const { return *this * -1.0; }

 private:
  struct Raw {};
  HollowSymmetricMatrix(Eigen::MatrixXd entries, Raw) noexcept;
  Eigen::MatrixXd entries_;
};

/// Full-rank correlation matrix: symmetric positive definite with unit
/// diagonal. The diagonal is stored as exactly 1 and the off-diagonal part
/// is exactly symmetric.
class CorrelationMatrix {
 public:
  /// Validates strictly: symmetry within 1e-8, diagonal within 1e-6 of one
  /// (then renormalized), smallest eigenvalue > 1e-10. Throws InvalidInput,
  /// DiagonalNotUnit or NotPositiveDefinite.
  explicit CorrelationMatrix(const Eigen::MatrixXd& A);

  /// No validation; caller guarantees the invariants hold. Used by
  /// construction paths that are valid by construction (Exp_off, Cholesky
  /// reconstruction).
  static CorrelationMatrix unchecked(Eigen::MatrixXd entries);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  struct Raw {};
  CorrelationMatrix(Eigen::MatrixXd entries, Raw) noexcept;
  Eigen::MatrixXd entries_;
};

/// Result of validate_or_shrink: the accepted matrix plus the shrinkage
/// weight that was applied (0 when none was needed).
struct ValidationOutcome {
  CorrelationMatrix matrix;
  double shrink_gamma;
};

/// Accepts a square matrix as a correlation matrix, applying shrinkage
/// toward the identity when it is rank deficient and shrinking is allowed.
/// The shrinkage weight is the smallest gamma on the grid
/// {1e-6, 1e-5, ..., 1e-1} for which (1-gamma) A + gamma I has smallest
/// eigenvalue >= 1e-8. Unit diagonal is preserved by the blend.
ValidationOutcome validate_or_shrink(const Eigen::MatrixXd& A,
                                     bool shrink_allowed);

}  // namespace corrgeo
