#pragma once

#include <Eigen/Dense>

#include "corrgeo/correlation.hpp"

namespace corrgeo {

/// Nonnegative symmetric edge weights with zero diagonal.
class WeightedGraph {
 public:
  explicit WeightedGraph(const Eigen::MatrixXd& weights, double tol = 1e-10);

  int size() const noexcept { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  Eigen::VectorXd degrees() const { return weights_.rowwise().sum(); }

 private:
  Eigen::MatrixXd weights_;
};

/// Eigendecomposition of a normalized graph Laplacian. Eigenvalues are
/// ascending and clamped to [0, 2]; eigenvector columns are orthonormal.
struct LaplacianSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Builds a graph from a correlation matrix: negative entries are zeroed and
/// only the ceil(density * n(n-1)/2) largest remaining off-diagonal weights
/// are kept. Ties at the threshold are all kept.
WeightedGraph adjacency_from_correlation(const CorrelationMatrix& C,
                                         double density = 0.20);

/// Normalized Laplacian I - D^{-1/2} W D^{-1/2}. Rows and columns of
/// isolated nodes (zero degree) are all zero, including the diagonal.
Eigen::MatrixXd normalized_laplacian(const WeightedGraph& G);

/// Spectrum of the normalized Laplacian of G.
LaplacianSpectrum laplacian_spectrum(const WeightedGraph& G);

/// Gap-spectrum rule: k = argmax_{1 <= j <= j_max} (lambda_{j+1} - lambda_j),
/// smallest index on ties (1-based over the ascending eigenvalues).
int gap_spectrum_select_k(const LaplacianSpectrum& spec, int j_max);

/// The k eigenvectors of smallest eigenvalue, as an orthonormal n x k basis.
Eigen::MatrixXd low_frequency_subspace(const LaplacianSpectrum& spec, int k);

}  // namespace corrgeo
