#include "corrgeo/stats_testing.hpp"

#include "corrgeo/random.hpp"

namespace corrgeo {

DistanceMatrix::DistanceMatrix(const Eigen::MatrixXd& d, double tol) {
  if (d.rows() != d.cols())
    throw InvalidInput("DistanceMatrix: matrix must be square");
  if (!d.allFinite()) throw InvalidInput("DistanceMatrix: non-finite entries");
  if ((d - d.transpose()).cwiseAbs().maxCoeff() > tol)
    throw InvalidInput("DistanceMatrix: not symmetric");
  if (d.diagonal().cwiseAbs().maxCoeff() > tol)
    throw InvalidInput("DistanceMatrix: nonzero diagonal");
  if (d.minCoeff() < -tol)
    throw InvalidInput("DistanceMatrix: negative distances");
  d_ = 0.5 * (d + d.transpose());
  d_ = d_.cwiseMax(0.0);
  d_.diagonal().setZero();
}

double bg_statistic(const DistanceMatrix& D,
                    const std::vector<std::uint8_t>& labels) {
  const int m = D.size();
  if (static_cast<int>(labels.size()) != m)
    throw DimensionMismatch("bg_statistic: labels do not match matrix size");
  double within_a = 0.0, within_b = 0.0, between = 0.0;
  long n_a = 0, n_b = 0;
  for (const auto l : labels) (l ? n_b : n_a) += 1;
  if (n_a < 2 || n_b < 2)
    throw DegenerateGroup("bg_statistic: each group needs >= 2 members");
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double d = D(i, j);
      if (labels[i] == labels[j]) {
        (labels[i] ? within_b : within_a) += d;
      } else {
        between += d;
      }
    }
  }
  const double mean_aa = within_a / (0.5 * n_a * (n_a - 1));
  const double mean_bb = within_b / (0.5 * n_b * (n_b - 1));
  const double mean_ab = between / (static_cast<double>(n_a) * n_b);
  return mean_ab - 0.5 * (mean_aa + mean_bb);
}

PermutationTestResult permutation_test(const DistanceMatrix& D,
                                       const std::vector<std::uint8_t>& labels,
                                       int n_perm, std::uint64_t seed,
                                       int threads) {
  if (n_perm < 1) throw InvalidInput("permutation_test: n_perm must be >= 1");
  const double observed = bg_statistic(D, labels);

  // Draw every permuted label vector up front so that the null sample is a
  // pure function of the seed, independent of evaluation order.
  std::vector<std::vector<std::uint8_t>> permuted(n_perm);
  Rng rng(seed);
  for (int p = 0; p < n_perm; ++p) {
    std::vector<std::uint8_t> shuffled = labels;
    rng.shuffle(shuffled);
    permuted[p] = std::move(shuffled);
  }

  std::vector<double> null_samples(n_perm);
  parallel_for(static_cast<std::size_t>(n_perm), threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t p = begin; p < end; ++p)
                   null_samples[p] = bg_statistic(D, permuted[p]);
               });

  long exceed = 0;
  for (const double t : null_samples)
    if (t >= observed) ++exceed;
  const double p_value = (1.0 + exceed) / (1.0 + n_perm);
  return {observed, p_value, n_perm, std::move(null_samples), seed};
}

}  // namespace corrgeo
