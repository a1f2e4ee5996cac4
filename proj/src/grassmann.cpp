#include "corrgeo/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "corrgeo/errors.hpp"
#include "corrgeo/linalg.hpp"

namespace corrgeo {

namespace {

void require_same_shape(const GrassmannPoint& U, const GrassmannPoint& V) {
  if (U.ambient_dim() != V.ambient_dim() ||
      U.subspace_dim() != V.subspace_dim())
    throw DimensionMismatch("grassmann: points live on different manifolds");
}

// Squared cosines of the principal angles, ascending. Computed from the
// eigenvalues of (X^T Y)(X^T Y)^T, which is bitwise invariant to column
// sign flips of either basis.
Eigen::VectorXd cos2_angles(const GrassmannPoint& X, const GrassmannPoint& Y) {
  const Eigen::MatrixXd M = X.basis().transpose() * Y.basis();
  const Eigen::MatrixXd G = M * M.transpose();
  Eigen::VectorXd lambda = linalg::sym_eig(G).eigenvalues;
  return lambda.cwiseMax(0.0).cwiseMin(1.0);
}

// cos^2 above which the arccos route cannot resolve an angle and the sine
// route takes over (angles below ~1e-3).
const double kSmallAngleCos2 = [] {
  const double c = std::cos(1e-3);
  return c * c;
}();

// Principal angles, ascending. Large angles come from the cosines; when all
// angles are tiny they come instead from the singular values of
// (I - X X^T) Y, which stay accurate near zero. Both routes use Gram
// matrices of the form A A^T, so the result is bitwise invariant to column
// sign flips of either basis.
Eigen::VectorXd angles_between(const GrassmannPoint& X,
                               const GrassmannPoint& Y) {
  // Gr(n, n) is a single point; angles vanish identically.
  if (X.subspace_dim() == X.ambient_dim())
    return Eigen::VectorXd::Zero(X.subspace_dim());
  const Eigen::VectorXd c2 = cos2_angles(X, Y);
  const int k = static_cast<int>(c2.size());
  Eigen::VectorXd angles(k);
  if (c2[0] > kSmallAngleCos2) {
    const Eigen::MatrixXd B =
        Y.basis() - X.basis() * (X.basis().transpose() * Y.basis());
    const Eigen::VectorXd mu = linalg::sym_eig(B * B.transpose())
                                   .eigenvalues.cwiseMax(0.0)
                                   .cwiseMin(1.0);
    const int n = static_cast<int>(mu.size());
    for (int i = 0; i < k; ++i)
      angles[i] = std::asin(std::sqrt(mu[n - k + i]));
  } else {
    // cos^2 ascending means angles descending; reverse for ascending.
    for (int i = 0; i < k; ++i)
      angles[i] = std::acos(std::sqrt(c2[k - 1 - i]));
  }
  return angles;
}

double squared_dist(const GrassmannPoint& U, const GrassmannPoint& V) {
  const Eigen::VectorXd angles = angles_between(U, V);
  return angles.squaredNorm();
}

// Karcher flow tolerance for the cut-locus guard: principal angles within
// 1e-6 of pi/2 are rejected rather than silently projected.
const double kKarcherSigmaTol = std::sin(1e-6);

}  // namespace

namespace {

// Canonical column signs: the largest-magnitude entry of every column is
// positive (first such entry on ties). Bases differing only by column sign
// flips therefore collapse to one bitwise-identical representative.
void canonicalize_signs(Eigen::MatrixXd& basis) {
  for (int j = 0; j < basis.cols(); ++j) {
    int arg = 0;
    basis.col(j).cwiseAbs().maxCoeff(&arg);
    if (basis(arg, j) < 0.0) basis.col(j) = -basis.col(j);
  }
}

}  // namespace

GrassmannPoint::GrassmannPoint(Eigen::MatrixXd basis, Raw) noexcept
    : basis_(std::move(basis)) {}

GrassmannPoint::GrassmannPoint(const Eigen::MatrixXd& basis) {
  if (basis.rows() < basis.cols() || basis.cols() < 1)
    throw InvalidInput("GrassmannPoint: need n >= k >= 1");
  if (!basis.allFinite())
    throw InvalidInput("GrassmannPoint: non-finite entries");
  const int k = static_cast<int>(basis.cols());
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  if ((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidInput("GrassmannPoint: columns are not orthonormal");
  basis_ = basis;
  canonicalize_signs(basis_);
}

GrassmannPoint GrassmannPoint::orthonormalized(const Eigen::MatrixXd& M) {
  if (M.rows() < M.cols() || M.cols() < 1)
    throw InvalidInput("GrassmannPoint: need n >= k >= 1");
  const linalg::ThinSvd svd = linalg::svd_thin(M);
  if (svd.singular_values[svd.singular_values.size() - 1] <= 1e-12)
    throw InvalidInput("GrassmannPoint: rank-deficient basis matrix");
  Eigen::MatrixXd basis = svd.U * svd.V.transpose();
  canonicalize_signs(basis);
  return GrassmannPoint(std::move(basis), Raw{});
}

Eigen::VectorXd principal_angles(const GrassmannPoint& U,
                                 const GrassmannPoint& V) {
  require_same_shape(U, V);
  return angles_between(U, V);
}

double grassmann_dist(const GrassmannPoint& U, const GrassmannPoint& V) {
  require_same_shape(U, V);
  return std::sqrt(squared_dist(U, V));
}

Eigen::MatrixXd grassmann_log(const GrassmannPoint& X, const GrassmannPoint& Y,
                              double sigma_tol) {
  require_same_shape(X, Y);
  const Eigen::MatrixXd M = X.basis().transpose() * Y.basis();
  const Eigen::MatrixXd G = M * M.transpose();
  const Eigen::VectorXd lambda = linalg::sym_eig(G).eigenvalues;
  if (lambda[0] <= sigma_tol * sigma_tol)
    throw CutLocus(
        "grassmann_log: subspaces contain orthogonal directions (principal "
        "angle at pi/2)");
  // B = (I - X X^T) Y, then H0 = B M^{-1}; solved as M^T H0^T = B^T.
  const Eigen::MatrixXd B =
      Y.basis() - X.basis() * (X.basis().transpose() * Y.basis());
  const Eigen::MatrixXd H0 = M.transpose()
                                 .partialPivLu()
                                 .solve(B.transpose())
                                 .transpose();
  const linalg::ThinSvd svd = linalg::svd_thin(H0);
  const Eigen::VectorXd theta =
      svd.singular_values.array().atan().matrix();
  return svd.U * theta.asDiagonal() * svd.V.transpose();
}

GrassmannPoint grassmann_exp(const GrassmannPoint& X,
                             const Eigen::MatrixXd& H) {
  if (H.rows() != X.ambient_dim() || H.cols() != X.subspace_dim())
    throw DimensionMismatch("grassmann_exp: tangent has wrong shape");
  if (H.norm() == 0.0) return X;
  const linalg::ThinSvd svd = linalg::svd_thin(H);
  const Eigen::VectorXd cos_s = svd.singular_values.array().cos().matrix();
  const Eigen::VectorXd sin_s = svd.singular_values.array().sin().matrix();
  const Eigen::MatrixXd moved =
      X.basis() * svd.V * cos_s.asDiagonal() * svd.V.transpose() +
      svd.U * sin_s.asDiagonal() * svd.V.transpose();
  return GrassmannPoint::orthonormalized(moved);
}

GrassmannPoint karcher_mean(const std::vector<GrassmannPoint>& points,
                            double tol, int max_iter) {
  if (points.empty()) throw EmptyInput("karcher_mean: empty list");
  for (const auto& p : points) require_same_shape(points.front(), p);

  GrassmannPoint center = points.front();
  const double m = static_cast<double>(points.size());
  double grad_norm = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::MatrixXd mean_tangent = Eigen::MatrixXd::Zero(
        center.ambient_dim(), center.subspace_dim());
    for (const auto& p : points)
      mean_tangent += grassmann_log(center, p, kKarcherSigmaTol);
    mean_tangent /= m;
    grad_norm = mean_tangent.norm();
    if (grad_norm <= tol) return center;
    center = grassmann_exp(center, mean_tangent);
  }
  throw NoConvergence("karcher_mean: flow did not converge", grad_norm);
}

namespace {

double within_dispersion(const std::vector<GrassmannPoint>& group_a,
                         const std::vector<GrassmannPoint>& group_b,
                         const GrassmannPoint& center_a,
                         const GrassmannPoint& center_b) {
  double acc = 0.0;
  for (const auto& u : group_a) acc += squared_dist(u, center_a);
  for (const auto& u : group_b) acc += squared_dist(u, center_b);
  return acc;
}

double fisher_ratio(const std::vector<GrassmannPoint>& group_a,
                    const std::vector<GrassmannPoint>& group_b,
                    const GrassmannPoint& center_a,
                    const GrassmannPoint& center_b, double epsilon) {
  const double dw = within_dispersion(group_a, group_b, center_a, center_b);
  const double db = squared_dist(center_a, center_b);
  return db / (dw + epsilon);
}

}  // namespace

DiscriminantModel fisher_fit(const std::vector<GrassmannPoint>& group_a,
                             const std::vector<GrassmannPoint>& group_b,
                             const FisherFitOptions& options) {
  if (group_a.empty() || group_b.empty())
    throw EmptyInput("fisher_fit: both groups must be nonempty");
  for (const auto& p : group_a) require_same_shape(group_a.front(), p);
  for (const auto& p : group_b) require_same_shape(group_a.front(), p);

  GrassmannPoint center_a = karcher_mean(group_a);
  GrassmannPoint center_b = karcher_mean(group_b);

  double ratio =
      fisher_ratio(group_a, group_b, center_a, center_b, options.epsilon);
  std::vector<double> trace{-ratio};
  bool converged = false;

  for (int iter = 0; iter < options.max_iter; ++iter) {
    // Riemannian gradients of the ratio R = D_B / (D_W + eps) per center;
    // grad of d^2(U, C) with respect to C is -2 Log_C(U).
    const double dw =
        within_dispersion(group_a, group_b, center_a, center_b);
    const double denom = dw + options.epsilon;
    const double db = squared_dist(center_a, center_b);

    Eigen::MatrixXd sum_log_a = Eigen::MatrixXd::Zero(
        center_a.ambient_dim(), center_a.subspace_dim());
    Eigen::MatrixXd sum_log_b = Eigen::MatrixXd::Zero(
        center_b.ambient_dim(), center_b.subspace_dim());
    Eigen::MatrixXd grad_db_a = sum_log_a;
    Eigen::MatrixXd grad_db_b = sum_log_b;
    try {
      for (const auto& u : group_a) sum_log_a += grassmann_log(center_a, u);
      for (const auto& u : group_b) sum_log_b += grassmann_log(center_b, u);
      grad_db_a = -2.0 * grassmann_log(center_a, center_b);
      grad_db_b = -2.0 * grassmann_log(center_b, center_a);
    } catch (const CutLocus&) {
      // A gradient term is undefined at maximal separation; the iterate on
      // the boundary is kept as the result.
      converged = true;
      break;
    }
    const Eigen::MatrixXd grad_dw_a = -2.0 * sum_log_a;
    const Eigen::MatrixXd grad_dw_b = -2.0 * sum_log_b;

    // Quotient rule; ascent direction is +grad R.
    const Eigen::MatrixXd ga =
        (grad_db_a * denom - db * grad_dw_a) / (denom * denom);
    const Eigen::MatrixXd gb =
        (grad_db_b * denom - db * grad_dw_b) / (denom * denom);

    const double grad_norm =
        std::sqrt(ga.squaredNorm() + gb.squaredNorm());
    if (grad_norm == 0.0) {
      converged = true;
      break;
    }

    double t = options.step / std::max(1.0, grad_norm);
    bool accepted = false;
    double new_ratio = ratio;
    GrassmannPoint cand_a = center_a;
    GrassmannPoint cand_b = center_b;
    for (int h = 0; h <= options.max_halvings; ++h) {
      cand_a = grassmann_exp(center_a, t * ga);
      cand_b = grassmann_exp(center_b, t * gb);
      new_ratio =
          fisher_ratio(group_a, group_b, cand_a, cand_b, options.epsilon);
      if (new_ratio >= ratio) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      converged = true;  // no ascent direction at this scale
      break;
    }
    const double rel_change =
        (new_ratio - ratio) / std::max(std::abs(ratio), 1e-300);
    center_a = std::move(cand_a);
    center_b = std::move(cand_b);
    ratio = new_ratio;
    trace.push_back(-ratio);
    if (rel_change <= options.rel_tol) {
      converged = true;
      break;
    }
  }

  DiscriminantModel model{std::move(center_a),
                          std::move(center_b),
                          group_a.front().subspace_dim(),
                          options.epsilon,
                          std::move(trace),
                          Eigen::VectorXd(),
                          converged};
  model.region_scores = region_importance(model);
  return model;
}

Classification classify_nearest_center(const DiscriminantModel& model,
                                       const GrassmannPoint& U) {
  require_same_shape(model.center_a, U);
  const double da = squared_dist(U, model.center_a);
  const double db = squared_dist(U, model.center_b);
  const GroupLabel label = da < db ? GroupLabel::A : GroupLabel::B;
  return {label, da - db};
}

Eigen::VectorXd region_importance(const DiscriminantModel& model) {
  const Eigen::MatrixXd diff =
      model.center_a.projector() - model.center_b.projector();
  return diff.rowwise().norm();
}

}  // namespace corrgeo
