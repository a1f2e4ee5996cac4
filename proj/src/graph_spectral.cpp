#include "corrgeo/graph_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "corrgeo/errors.hpp"
#include "corrgeo/linalg.hpp"
#include "corrgeo/triangular.hpp"

namespace corrgeo {

WeightedGraph::WeightedGraph(const Eigen::MatrixXd& weights, double tol) {
  if (weights.rows() != weights.cols())
    throw InvalidInput("WeightedGraph: matrix must be square");
  if (!weights.allFinite())
    throw InvalidInput("WeightedGraph: non-finite weights");
  if ((weights - weights.transpose()).cwiseAbs().maxCoeff() > tol)
    throw InvalidInput("WeightedGraph: weights are not symmetric");
  if (weights.minCoeff() < -tol)
    throw InvalidInput("WeightedGraph: negative weights");
  if (weights.diagonal().cwiseAbs().maxCoeff() > tol)
    throw InvalidInput("WeightedGraph: nonzero diagonal");
  weights_ = 0.5 * (weights + weights.transpose());
  weights_ = weights_.cwiseMax(0.0);
  weights_.diagonal().setZero();
}

WeightedGraph adjacency_from_correlation(const CorrelationMatrix& C,
                                         double density) {
  if (!(density > 0.0 && density <= 1.0))
    throw InvalidInput("adjacency_from_correlation: density must be in (0,1]");
  const int n = C.dim();
  Eigen::MatrixXd W = C.matrix().cwiseMax(0.0);
  W.diagonal().setZero();

  const int total = pair_count(n);
  const int keep = static_cast<int>(
      std::ceil(density * static_cast<double>(total)));
  if (keep < total) {
    std::vector<double> vals;
    vals.reserve(total);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) vals.push_back(W(i, j));
    std::nth_element(vals.begin(), vals.begin() + (keep - 1), vals.end(),
                     std::greater<double>());
    const double threshold = vals[keep - 1];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (W(i, j) < threshold) {
          W(i, j) = 0.0;
          W(j, i) = 0.0;
        }
  }
  return WeightedGraph(W);
}

Eigen::MatrixXd normalized_laplacian(const WeightedGraph& G) {
  const int n = G.size();
  const Eigen::VectorXd deg = G.degrees();
  Eigen::VectorXd inv_sqrt(n);
  for (int i = 0; i < n; ++i)
    inv_sqrt[i] = deg[i] > 0.0 ? 1.0 / std::sqrt(deg[i]) : 0.0;
  Eigen::MatrixXd L =
      -(inv_sqrt.asDiagonal() * G.weights() * inv_sqrt.asDiagonal());
  for (int i = 0; i < n; ++i) L(i, i) = deg[i] > 0.0 ? 1.0 : 0.0;
  L = (0.5 * (L + L.transpose())).eval();
  return L;
}

LaplacianSpectrum laplacian_spectrum(const WeightedGraph& G) {
  linalg::EigResult eig = linalg::sym_eig(normalized_laplacian(G));
  LaplacianSpectrum spec{std::move(eig.eigenvalues),
                         std::move(eig.eigenvectors)};
  spec.eigenvalues = spec.eigenvalues.cwiseMax(0.0).cwiseMin(2.0);
  return spec;
}

int gap_spectrum_select_k(const LaplacianSpectrum& spec, int j_max) {
  const int n = static_cast<int>(spec.eigenvalues.size());
  if (j_max < 1 || j_max > n - 1)
    throw InvalidInput("gap_spectrum_select_k: j_max must be in [1, n-1]");
  int best = 1;
  double best_gap = spec.eigenvalues[1] - spec.eigenvalues[0];
  for (int j = 2; j <= j_max; ++j) {
    const double gap = spec.eigenvalues[j] - spec.eigenvalues[j - 1];
    if (gap > best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  return best;
}

Eigen::MatrixXd low_frequency_subspace(const LaplacianSpectrum& spec, int k) {
  const int n = static_cast<int>(spec.eigenvalues.size());
  if (k < 1 || k > n)
    throw InvalidInput("low_frequency_subspace: k must be in [1, n]");
  return spec.eigenvectors.leftCols(k);
}

}  // namespace corrgeo
