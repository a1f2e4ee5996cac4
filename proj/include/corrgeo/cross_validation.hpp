#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace corrgeo {

/// Nested cross-validation plan: outer test partitions plus, for each outer
/// fold, inner test partitions of that fold's training set. All index sets
/// are drawn deterministically from the seed.
struct CVPlan {
  std::vector<std::vector<int>> outer_test;
  std::vector<std::vector<std::vector<int>>> inner_test;
  bool stratified = true;
  std::uint64_t seed = 42;

  int n_outer() const noexcept { return static_cast<int>(outer_test.size()); }
  std::vector<int> outer_train(int fold, int m) const;
};

/// Stratified by class label; per-fold class counts stay within one of
/// proportional.
CVPlan make_classification_cv_plan(const std::vector<std::uint8_t>& labels,
                                   int k_outer = 5, int k_inner = 5,
                                   std::uint64_t seed = 42);

/// Stratified by age quintile bins.
CVPlan make_regression_cv_plan(const std::vector<double>& ages,
                               int k_outer = 5, int k_inner = 5,
                               std::uint64_t seed = 42);

/// Structural leakage guard: outer partitions disjoint and exhaustive over
/// [0, m); each inner partition disjoint and exhaustive over its outer
/// training set. Throws InvalidInput on any violation.
void validate_plan(const CVPlan& plan, int m);

/// Throws InvalidInput when train and apply index sets overlap. Every fitted
/// transform in the pipelines is guarded by this check.
void require_disjoint(const std::vector<int>& train,
                      const std::vector<int>& apply_to);

struct FoldMetrics {
  std::map<std::string, double> values;
  std::map<std::string, double> hyperparams;
};

/// Per-fold metrics plus their mean and (population) standard deviation
/// across outer folds.
struct CVReport {
  std::string representation;
  std::vector<FoldMetrics> folds;
  std::map<std::string, double> mean;
  std::map<std::string, double> sd;
  std::vector<std::string> warnings;

  /// Fills mean/sd from the folds.
  void aggregate();
};

}  // namespace corrgeo
