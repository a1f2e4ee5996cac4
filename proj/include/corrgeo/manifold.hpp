#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "corrgeo/correlation.hpp"

namespace corrgeo {

/// The geometries available on the space of full-rank correlation matrices.
/// Euclidean is the raw-matrix baseline (Frobenius on full matrices); the
/// other three are flat pullback geometries with global charts.
enum class Metric { Euclidean, OffLog, ECM, LEC };

std::string to_string(Metric m);
Metric parse_metric(const std::string& name);

/// Flat coordinates of a correlation matrix under a metric's global chart.
/// Length is always n(n-1)/2 in the canonical pair order.
struct FlatCoords {
  Metric metric;
  int n;
  Eigen::VectorXd values;
};

/// S = Off(log C): the matrix logarithm with its diagonal removed.
HollowSymmetricMatrix log_off(const CorrelationMatrix& C);

/// Solves for the diagonal vector d with diag(exp(S + Diag(d))) = 1 by the
/// fixed-point iteration d <- d - log(diag(exp(S + Diag(d)))), d0 = 0.
/// Convergence is linear with a rate that degrades for strongly coupled
/// inputs (entries near +-2 at n ~ 50 need a few hundred iterations), hence
/// the generous default cap. Throws NoConvergence (carrying the residual)
/// past max_iter.
Eigen::VectorXd solve_diag_correction(const HollowSymmetricMatrix& S,
                                      double tol = 1e-12,
                                      int max_iter = 1000);

/// Exp_off(S) = exp(S + D(S)), the inverse of log_off.
CorrelationMatrix exp_off(const HollowSymmetricMatrix& S);

/// Chart coordinates of C under metric m:
///   OffLog    - strict upper triangle of Off(log C)
///   ECM       - strict lower triangle of the unit-diagonal Cholesky factor
///   LEC       - strict lower triangle of its triangular logarithm
///   Euclidean - strict upper triangle of C itself
FlatCoords embed(const CorrelationMatrix& C, Metric m);

/// Inverse of embed. For the Euclidean chart the reconstructed matrix may be
/// indefinite; it is passed through validate_or_shrink and throws
/// NotPositiveDefinite when shrinking is disallowed.
CorrelationMatrix unembed(const FlatCoords& x, bool shrink_allowed = false);

/// Geodesic distance under metric m. Hollow-symmetric charts count both
/// triangles (factor sqrt(2) on packed coordinates); triangular charts count
/// each coordinate once.
double dist(const CorrelationMatrix& C1, const CorrelationMatrix& C2,
            Metric m);

/// Geodesic from C1 (t=0) to C2 (t=1); straight line in chart coordinates.
/// Not defined for the Euclidean baseline.
CorrelationMatrix geodesic(const CorrelationMatrix& C1,
                           const CorrelationMatrix& C2, double t, Metric m);

/// Frechet mean: chart-coordinate arithmetic mean mapped back to the
/// manifold (exact minimizer of the sum of squared distances, the geometry
/// being flat in coordinates). Not defined for the Euclidean baseline.
CorrelationMatrix frechet_mean(const std::vector<CorrelationMatrix>& Cs,
                               Metric m);

/// Elementwise average, the Euclidean baseline mean.
CorrelationMatrix euclidean_mean(const std::vector<CorrelationMatrix>& Cs);

/// Abelian group operation pulled back from addition of Off-log coordinates:
/// C1 * C2 = Exp_off(Log_off(C1) + Log_off(C2)). Identity element is I.
CorrelationMatrix star_product(const CorrelationMatrix& C1,
                               const CorrelationMatrix& C2);

/// Group inverse: Exp_off(-Log_off(C)).
CorrelationMatrix star_inverse(const CorrelationMatrix& C);

/// Tangent coordinates at the identity; identical to embed(C, m) since every
/// chart here is global.
FlatCoords tangent_at_identity(const CorrelationMatrix& C, Metric m);

}  // namespace corrgeo
