#include "corrgeo/manifold.hpp"

#include <cmath>

#include "corrgeo/errors.hpp"
#include "corrgeo/linalg.hpp"
#include "corrgeo/triangular.hpp"

namespace corrgeo {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

void require_same_dim(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("correlation matrices have different dimensions");
}

// Unit-diagonal representative of the Cholesky factor: rows of chol(C)
// divided by their diagonal entry.
Eigen::MatrixXd unit_diag_cholesky(const CorrelationMatrix& C) {
  Eigen::MatrixXd L = linalg::cholesky_lower(C.matrix());
  const Eigen::VectorXd d = L.diagonal();
  return d.array().inverse().matrix().asDiagonal() * L;
}

// Rescales rows of a unit-diagonal lower-triangular matrix to unit norm and
// assembles C = L L^T. Unit diagonal and positive definiteness hold by
// construction.
CorrelationMatrix correlation_from_unit_lower(const Eigen::MatrixXd& Lu) {
  const int n = static_cast<int>(Lu.rows());
  Eigen::MatrixXd L = Lu;
  for (int i = 0; i < n; ++i) L.row(i) /= L.row(i).norm();
  Eigen::MatrixXd C = L * L.transpose();
  C = (0.5 * (C + C.transpose())).eval();
  C.diagonal().setOnes();
  return CorrelationMatrix::unchecked(std::move(C));
}

}  // namespace

std::string to_string(Metric m) {
  switch (m) {
    case Metric::Euclidean: return "euclidean";
    case Metric::OffLog: return "offlog";
    case Metric::ECM: return "ecm";
    case Metric::LEC: return "lec";
  }
  return "unknown";
}

Metric parse_metric(const std::string& name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "offlog") return Metric::OffLog;
  if (name == "ecm") return Metric::ECM;
  if (name == "lec") return Metric::LEC;
  throw InvalidInput("unknown metric '" + name +
                     "' (expected euclidean|offlog|ecm|lec)");
}

HollowSymmetricMatrix log_off(const CorrelationMatrix& C) {
  Eigen::MatrixXd S = linalg::sym_logm(C.matrix());
  return HollowSymmetricMatrix::from_packed(C.dim(), pack_strict_upper(S));
}

Eigen::VectorXd solve_diag_correction(const HollowSymmetricMatrix& S,
                                      double tol, int max_iter) {
  const int n = S.dim();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  double residual = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::MatrixXd arg = S.matrix();
    arg.diagonal() = d;
    const Eigen::VectorXd diag = linalg::sym_expm(arg).diagonal();
    residual = (diag.array() - 1.0).abs().maxCoeff();
    if (residual <= tol) return d;
    d -= diag.array().log().matrix();
  }
  throw NoConvergence(
      "solve_diag_correction: fixed point not reached in " +
          std::to_string(max_iter) + " iterations",
      residual);
}

CorrelationMatrix exp_off(const HollowSymmetricMatrix& S) {
  const Eigen::VectorXd d = solve_diag_correction(S);
  Eigen::MatrixXd arg = S.matrix();
  arg.diagonal() = d;
  Eigen::MatrixXd C = linalg::sym_expm(arg);
  // diag(C) = 1 within the solver tolerance; renormalize so the stored
  // diagonal is exactly one.
  const Eigen::VectorXd inv_sqrt = C.diagonal().array().rsqrt();
  C = (inv_sqrt.asDiagonal() * C * inv_sqrt.asDiagonal()).eval();
  C = (0.5 * (C + C.transpose())).eval();
  C.diagonal().setOnes();
  return CorrelationMatrix::unchecked(std::move(C));
}

FlatCoords embed(const CorrelationMatrix& C, Metric m) {
  switch (m) {
    case Metric::OffLog:
      return {m, C.dim(), log_off(C).packed_upper()};
    case Metric::ECM:
      return {m, C.dim(), pack_strict_lower(unit_diag_cholesky(C))};
    case Metric::LEC:
      return {m, C.dim(),
              pack_strict_lower(linalg::tri_unit_log(unit_diag_cholesky(C)))};
    case Metric::Euclidean:
      return {m, C.dim(), pack_strict_upper(C.matrix())};
  }
  throw InvalidInput("embed: unknown metric");
}

CorrelationMatrix unembed(const FlatCoords& x, bool shrink_allowed) {
  if (!x.values.allFinite()) throw InvalidInput("unembed: non-finite values");
  if (x.values.size() != pair_count(x.n))
    throw DimensionMismatch("unembed: coordinate length does not match n");
  switch (x.metric) {
    case Metric::OffLog:
      return exp_off(HollowSymmetricMatrix::from_packed(x.n, x.values));
    case Metric::ECM:
      return correlation_from_unit_lower(
          unit_lower_from_packed(x.n, x.values));
    case Metric::LEC:
      return correlation_from_unit_lower(linalg::tri_unit_exp(
          unit_lower_from_packed(x.n, x.values) -
          Eigen::MatrixXd::Identity(x.n, x.n)));
    case Metric::Euclidean:
      return validate_or_shrink(unit_diag_from_packed(x.n, x.values),
                                shrink_allowed)
          .matrix;
  }
  throw InvalidInput("unembed: unknown metric");
}

double dist(const CorrelationMatrix& C1, const CorrelationMatrix& C2,
            Metric m) {
  require_same_dim(C1, C2);
  const double coord = (embed(C1, m).values - embed(C2, m).values).norm();
  // Hollow-symmetric charts count both triangles of the full matrix.
  const bool symmetric_chart = (m == Metric::OffLog || m == Metric::Euclidean);
  return symmetric_chart ? kSqrt2 * coord : coord;
}

CorrelationMatrix geodesic(const CorrelationMatrix& C1,
                           const CorrelationMatrix& C2, double t, Metric m) {
  require_same_dim(C1, C2);
  if (m == Metric::Euclidean)
    throw InvalidInput("geodesic: not defined for the Euclidean baseline");
  const FlatCoords a = embed(C1, m);
  const FlatCoords b = embed(C2, m);
  return unembed({m, a.n, (1.0 - t) * a.values + t * b.values});
}

CorrelationMatrix frechet_mean(const std::vector<CorrelationMatrix>& Cs,
                               Metric m) {
  if (Cs.empty()) throw EmptyInput("frechet_mean: empty list");
  if (m == Metric::Euclidean)
    throw InvalidInput(
        "frechet_mean: use euclidean_mean for the Euclidean baseline");
  const int n = Cs.front().dim();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(pair_count(n));
  for (const auto& C : Cs) {
    if (C.dim() != n)
      throw DimensionMismatch("frechet_mean: mixed dimensions");
    acc += embed(C, m).values;
  }
  acc /= static_cast<double>(Cs.size());
  return unembed({m, n, acc});
}

CorrelationMatrix euclidean_mean(const std::vector<CorrelationMatrix>& Cs) {
  if (Cs.empty()) throw EmptyInput("euclidean_mean: empty list");
  const int n = Cs.front().dim();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (const auto& C : Cs) {
    if (C.dim() != n)
      throw DimensionMismatch("euclidean_mean: mixed dimensions");
    acc += C.matrix();
  }
  acc /= static_cast<double>(Cs.size());
  // A convex combination of correlation matrices is again one.
  acc.diagonal().setOnes();
  return CorrelationMatrix::unchecked(std::move(acc));
}

CorrelationMatrix star_product(const CorrelationMatrix& C1,
                               const CorrelationMatrix& C2) {
  require_same_dim(C1, C2);
  return exp_off(log_off(C1) + log_off(C2));
}

CorrelationMatrix star_inverse(const CorrelationMatrix& C) {
  return exp_off(-log_off(C));
}

FlatCoords tangent_at_identity(const CorrelationMatrix& C, Metric m) {
  return embed(C, m);
}

}  // namespace corrgeo
