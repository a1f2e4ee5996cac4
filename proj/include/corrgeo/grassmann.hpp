#pragma once

#include <Eigen/Dense>
#include <vector>

#include "corrgeo/group_label.hpp"

namespace corrgeo {

/// A k-dimensional subspace of R^n represented by an orthonormal basis.
/// Everything computed from a GrassmannPoint depends only on the spanned
/// subspace, never on the particular basis.
class GrassmannPoint {
 public:
  /// Requires basis^T basis = I_k within 1e-10.
  explicit GrassmannPoint(const Eigen::MatrixXd& basis);

  /// Closest orthonormal basis (polar factor) of an arbitrary full-rank
  /// n x k matrix; the identity on already-orthonormal input.
  static GrassmannPoint orthonormalized(const Eigen::MatrixXd& M);

  int ambient_dim() const noexcept { return static_cast<int>(basis_.rows()); }
  int subspace_dim() const noexcept { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }

  /// Orthogonal projector basis basis^T (basis independent).
  Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

 private:
  struct Raw {};
  GrassmannPoint(Eigen::MatrixXd basis, Raw) noexcept;
  Eigen::MatrixXd basis_;
};

/// Principal angles between [U] and [V], ascending in [0, pi/2].
Eigen::VectorXd principal_angles(const GrassmannPoint& U,
                                 const GrassmannPoint& V);

/// Geodesic distance: root-sum-square of the principal angles.
double grassmann_dist(const GrassmannPoint& U, const GrassmannPoint& V);

/// Riemannian logarithm: the tangent matrix H (with X^T H = 0) such that
/// the geodesic from X with initial velocity H reaches [Y] at t=1.
/// Throws CutLocus when a principal angle reaches pi/2 (any singular value
/// of X^T Y at or below sigma_tol).
Eigen::MatrixXd grassmann_log(const GrassmannPoint& X, const GrassmannPoint& Y,
                              double sigma_tol = 1e-10);

/// Riemannian exponential: geodesic step from X along tangent H.
GrassmannPoint grassmann_exp(const GrassmannPoint& X, const Eigen::MatrixXd& H);

/// Karcher flow for the Frechet mean: C <- Exp_C(mean of Log_C(U_i)),
/// started at the first sample, until the mean tangent norm is <= tol.
GrassmannPoint karcher_mean(const std::vector<GrassmannPoint>& points,
                            double tol = 1e-9, int max_iter = 200);

/// Result of the subspace discriminant fit: optimized class centers, the
/// trace of the (minimized) objective J = -D_B / (D_W + epsilon), and
/// per-node importance scores.
struct DiscriminantModel {
  GrassmannPoint center_a;
  GrassmannPoint center_b;
  int k = 0;
  double epsilon = 1e-8;
  std::vector<double> objective_trace;
  Eigen::VectorXd region_scores;
  bool converged = true;
};

struct FisherFitOptions {
  double epsilon = 1e-8;
  double step = 0.1;
  int max_iter = 500;
  double rel_tol = 1e-8;
  int max_halvings = 30;
};

/// Fits class centers by Riemannian gradient ascent on the Fisher ratio
/// D_B / (D_W + epsilon), initialized at the per-class Karcher means.
/// Accepted steps never decrease the ratio; the ascent also stops cleanly
/// when a gradient term reaches the cut locus (maximal separation). On
/// hitting max_iter the best-so-far model is returned with
/// converged = false.
DiscriminantModel fisher_fit(const std::vector<GrassmannPoint>& group_a,
                             const std::vector<GrassmannPoint>& group_b,
                             const FisherFitOptions& options = {});

struct Classification {
  GroupLabel label;
  /// d^2(U, center_a) - d^2(U, center_b); positive values favor B.
  double score;
};

/// Nearest-center rule: A iff strictly closer to center_a, ties go to B.
Classification classify_nearest_center(const DiscriminantModel& model,
                                       const GrassmannPoint& U);

/// Per-node importance: row norms of the difference of the two center
/// projectors. Invariant to basis rotations and sign flips of either center.
Eigen::VectorXd region_importance(const DiscriminantModel& model);

}  // namespace corrgeo
