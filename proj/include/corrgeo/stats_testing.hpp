#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "corrgeo/errors.hpp"
#include "corrgeo/parallel.hpp"

namespace corrgeo {

/// Symmetric nonnegative interpoint distances with zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(const Eigen::MatrixXd& d, double tol = 1e-12);

  int size() const noexcept { return static_cast<int>(d_.rows()); }
  double operator()(int i, int j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const noexcept { return d_; }

 private:
  Eigen::MatrixXd d_;
};

/// Computes all pairwise distances once (upper triangle mirrored).
/// `metric` must be symmetric and zero on identical inputs.
template <class T, class F>
DistanceMatrix pairwise_distances(const std::vector<T>& items, F&& metric,
                                  int threads = 1) {
  const int m = static_cast<int>(items.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  const std::size_t pairs = static_cast<std::size_t>(m) * (m - 1) / 2;
  std::vector<std::pair<int, int>> index(pairs);
  std::size_t p = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) index[p++] = {i, j};
  parallel_for(pairs, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      const auto [i, j] = index[q];
      const double v = metric(items[i], items[j]);
      d(i, j) = v;
      d(j, i) = v;
    }
  });
  return DistanceMatrix(d);
}

/// Interpoint-distance two-sample contrast:
/// T = mean between-group distance - (mean within-A + mean within-B) / 2.
/// Within-group means run over unordered distinct pairs; the between-group
/// mean over the full |A| x |B| grid. Both groups need >= 2 members.
double bg_statistic(const DistanceMatrix& D,
                    const std::vector<std::uint8_t>& labels);

struct PermutationTestResult {
  double statistic;
  double p_value;
  int n_permutations;
  std::vector<double> null_samples;
  std::uint64_t seed;
};

/// Label-permutation null for the interpoint-distance statistic. The
/// permuted label vectors are generated sequentially from the seed before
/// any (possibly parallel) evaluation, and the p-value uses the add-one
/// estimator p = (1 + #{T_perm >= T_obs}) / (1 + n_perm).
PermutationTestResult permutation_test(const DistanceMatrix& D,
                                       const std::vector<std::uint8_t>& labels,
                                       int n_perm = 1000,
                                       std::uint64_t seed = 42,
                                       int threads = 1);

}  // namespace corrgeo
