#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace corrgeo {

/// Column z-scoring fitted on training rows only. Columns whose training
/// standard deviation is below 1e-12 map to zero.
class Scaler {
 public:
  static Scaler fit(const Eigen::MatrixXd& train);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd inv_sd_;  // 0 for (near-)constant columns
};

/// PCA projector fitted on training rows: keeps the smallest number of
/// components whose cumulative explained variance reaches the target,
/// capped at m_train - 1. Component signs follow the convention that the
/// largest-|loading| entry of each component is positive.
class Pca {
 public:
  static Pca fit(const Eigen::MatrixXd& train, double variance_target = 0.8);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
  int n_components() const noexcept {
    return static_cast<int>(components_.cols());
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd components_;  // p x c
};

struct ElasticNetModel {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  bool converged = true;
  int iterations = 0;
};

/// Coordinate-descent Elastic Net for
///   (1/2m)||y - b0 - X b||^2 + lambda (l1_ratio ||b||_1
///                                      + (1 - l1_ratio)/2 ||b||_2^2).
/// Converged when no coefficient (intercept included) moves more than tol
/// in a full sweep; otherwise returns the last iterate flagged.
ElasticNetModel elastic_net_fit(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& y, double lambda,
                                double l1_ratio, double tol = 1e-7,
                                int max_iter = 1000);

Eigen::VectorXd elastic_net_predict(const ElasticNetModel& model,
                                    const Eigen::MatrixXd& X);

struct AnovaSelection {
  std::vector<int> selected;  // top_k feature indices, best first
  Eigen::VectorXd f_scores;   // all p scores
};

/// Two-group ANOVA F score per feature; selects the top_k largest with
/// deterministic lower-index tie-breaking. Features that are constant
/// overall score 0; zero within-group variance with nonzero separation
/// scores +inf.
AnovaSelection anova_f_select(const Eigen::MatrixXd& X,
                              const std::vector<std::uint8_t>& labels,
                              int top_k);

struct LinearSvmModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
};

/// L1-loss linear SVM trained by dual coordinate descent with a fixed
/// per-epoch sample order drawn from the seed. Labels must be -1/+1.
LinearSvmModel linear_svm_fit(const Eigen::MatrixXd& X,
                              const std::vector<int>& labels, double C,
                              int epochs = 500, std::uint64_t seed = 0);

Eigen::VectorXd linear_svm_decision(const LinearSvmModel& model,
                                    const Eigen::MatrixXd& X);

struct LdaModel {
  Eigen::VectorXd direction;
  double threshold = 0.0;
};

/// Two-class LDA with trace-scaled ridge shrinkage of the pooled covariance:
/// Sigma_reg = (1-s) Sigma + s (tr Sigma / p) I. Threshold at the midpoint
/// of the projected class means.
LdaModel lda_fit(const Eigen::MatrixXd& X,
                 const std::vector<std::uint8_t>& labels,
                 double shrinkage = 0.1);

Eigen::VectorXd lda_decision(const LdaModel& model, const Eigen::MatrixXd& X);

std::vector<std::uint8_t> lda_predict(const LdaModel& model,
                                      const Eigen::MatrixXd& X);

struct BinaryMetrics {
  double accuracy;
  double auc;          // Mann-Whitney with ties counted 1/2
  double sensitivity;  // recall of the positive (disease) class
  double specificity;  // recall of the negative (control) class
};

/// All four classification metrics. Throws SingleClass unless both classes
/// appear in `truth`.
BinaryMetrics binary_metrics(const std::vector<double>& scores,
                             const std::vector<std::uint8_t>& predictions,
                             const std::vector<std::uint8_t>& truth);

}  // namespace corrgeo
