#pragma once

#include <Eigen/Dense>
#include <vector>

#include "corrgeo/cohort.hpp"
#include "corrgeo/cross_validation.hpp"
#include "corrgeo/grassmann.hpp"
#include "corrgeo/manifold.hpp"

namespace corrgeo {

/// Chart coordinates of every subject under the chosen metric, one row per
/// subject in cohort order.
Eigen::MatrixXd cohort_features(const CohortDataset& cohort, Metric m,
                                int threads = 1);

struct BrainAgeConfig {
  double variance_target = 0.8;
  /// Lambda grid; empty means the default 10 log-spaced values in
  /// [1e-3, 1e1].
  std::vector<double> lambdas;
  std::vector<double> l1_ratios = {0.1, 0.5, 0.9};
  int threads = 1;
};

/// Age regression: scaler + PCA + Elastic Net, with (lambda, l1_ratio)
/// chosen per outer fold by inner-CV MAE. Reports MAE and R^2 per fold.
/// Every transform is fitted on training rows only.
CVReport run_brainage(const CohortDataset& cohort, Metric representation,
                      const CVPlan& plan, const BrainAgeConfig& config = {});

struct ClassificationConfig {
  std::vector<double> svm_costs = {0.01, 0.1, 1.0, 10.0};
  std::vector<int> top_k_grid = {100, 500, 1000};
  int svm_epochs = 500;
  int threads = 1;
};

/// Diagnostic classification: ANOVA-F selection + scaler + linear SVM as a
/// single training-only pipeline; (C, top_k) chosen per outer fold by inner
/// AUC-ROC. Reports accuracy, AUC, sensitivity and specificity per fold.
CVReport run_classification(const CohortDataset& cohort, Metric representation,
                            const CVPlan& plan,
                            const ClassificationConfig& config = {});

struct GrassmannPipelineConfig {
  double density = 0.2;
  int j_max = 30;
  /// 0 selects k per fold via the gap spectrum; a positive value overrides
  /// it (k = n degenerates to a single point and is flagged).
  int forced_k = 0;
  FisherFitOptions fisher;
  double lda_shrinkage = 0.1;
  int threads = 1;
};

struct GrassmannPipelineResult {
  CVReport report;  // grassmann and lda_* metrics side by side
  std::vector<DiscriminantModel> fold_models;
  std::vector<int> fold_k;
  /// Fraction of outer folds in which each node reached the top decile of
  /// the discriminant region scores.
  Eigen::VectorXd region_selection_frequency;
};

/// Subspace discriminant pipeline: per-fold gap-spectrum choice of k from
/// the group-average training Laplacians (max over the two groups), Fisher
/// subspace fit on training subjects, nearest-center classification of test
/// subjects, and an LDA baseline on the flattened eigenvector bases.
GrassmannPipelineResult run_grassmann_pipeline(
    const CohortDataset& cohort, const CVPlan& plan,
    const GrassmannPipelineConfig& config = {});

}  // namespace corrgeo
