#include "corrgeo/ml_primitives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "corrgeo/errors.hpp"
#include "corrgeo/linalg.hpp"
#include "corrgeo/random.hpp"

namespace corrgeo {

Scaler Scaler::fit(const Eigen::MatrixXd& train) {
  const auto m = static_cast<double>(train.rows());
  Scaler s;
  s.mean_ = train.colwise().mean();
  Eigen::MatrixXd centered = train.rowwise() - s.mean_.transpose();
  const Eigen::VectorXd sd =
      (centered.array().square().colwise().sum() / m).sqrt();
  s.inv_sd_.resize(sd.size());
  for (int j = 0; j < sd.size(); ++j)
    s.inv_sd_[j] = sd[j] > 1e-12 ? 1.0 / sd[j] : 0.0;
  return s;
}

Eigen::MatrixXd Scaler::apply(const Eigen::MatrixXd& X) const {
  if (X.cols() != mean_.size())
    throw DimensionMismatch("Scaler: feature count mismatch");
  Eigen::MatrixXd out = X.rowwise() - mean_.transpose();
  out = out.array().rowwise() * inv_sd_.transpose().array();
  return out;
}

Pca Pca::fit(const Eigen::MatrixXd& train, double variance_target) {
  const int m = static_cast<int>(train.rows());
  const int p = static_cast<int>(train.cols());
  Pca pca;
  pca.mean_ = train.colwise().mean();
  Eigen::MatrixXd centered = train.rowwise() - pca.mean_.transpose();

  // Thin SVD of the (possibly wide) centered matrix via its transpose when
  // p > m, so the kernel sees a tall input either way.
  Eigen::MatrixXd U, V;
  Eigen::VectorXd sv;
  if (p >= m) {
    const linalg::ThinSvd svd = linalg::svd_thin(centered.transpose());
    V = svd.U;
    sv = svd.singular_values;
  } else {
    const linalg::ThinSvd svd = linalg::svd_thin(centered);
    V = svd.V;
    sv = svd.singular_values;
  }

  const Eigen::VectorXd var = sv.array().square();
  const double total = var.sum();
  const int max_components =
      std::min<int>(static_cast<int>(sv.size()), std::max(1, m - 1));
  int c = 1;
  if (total > 0.0) {
    double cum = 0.0;
    for (c = 0; c < max_components;) {
      cum += var[c];
      ++c;
      if (cum / total >= variance_target) break;
    }
  }
  pca.components_ = V.leftCols(c);

  // Deterministic sign: largest-|loading| entry of each component positive.
  for (int j = 0; j < c; ++j) {
    int arg = 0;
    pca.components_.col(j).cwiseAbs().maxCoeff(&arg);
    if (pca.components_(arg, j) < 0.0) pca.components_.col(j) *= -1.0;
  }
  return pca;
}

Eigen::MatrixXd Pca::apply(const Eigen::MatrixXd& X) const {
  if (X.cols() != mean_.size())
    throw DimensionMismatch("Pca: feature count mismatch");
  return (X.rowwise() - mean_.transpose()) * components_;
}

namespace {

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

}  // namespace

ElasticNetModel elastic_net_fit(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& y, double lambda,
                                double l1_ratio, double tol, int max_iter) {
  if (X.rows() != y.size())
    throw DimensionMismatch("elastic_net_fit: X rows must match y");
  if (lambda < 0.0 || l1_ratio < 0.0 || l1_ratio > 1.0)
    throw InvalidInput("elastic_net_fit: bad regularization parameters");
  const int m = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  const double inv_m = 1.0 / static_cast<double>(m);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double intercept = y.mean();
  Eigen::VectorXd residual = y.array() - intercept;  // y - b0 - X beta

  const Eigen::VectorXd col_sq = X.array().square().colwise().sum() * inv_m;
  const double l1_penalty = lambda * l1_ratio;
  const double l2_penalty = lambda * (1.0 - l1_ratio);

  ElasticNetModel model;
  for (int iter = 0; iter < max_iter; ++iter) {
    double max_change = 0.0;
    for (int j = 0; j < p; ++j) {
      const double old = beta[j];
      const double z = inv_m * X.col(j).dot(residual) + col_sq[j] * old;
      const double denom = col_sq[j] + l2_penalty;
      const double updated =
          denom > 0.0 ? soft_threshold(z, l1_penalty) / denom : 0.0;
      if (updated != old) {
        residual -= (updated - old) * X.col(j);
        beta[j] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    const double new_intercept = intercept + residual.mean();
    max_change = std::max(max_change, std::abs(new_intercept - intercept));
    residual.array() -= new_intercept - intercept;
    intercept = new_intercept;
    if (max_change <= tol) {
      model.converged = true;
      model.iterations = iter + 1;
      model.coefficients = std::move(beta);
      model.intercept = intercept;
      return model;
    }
  }
  model.converged = false;
  model.iterations = max_iter;
  model.coefficients = std::move(beta);
  model.intercept = intercept;
  return model;
}

Eigen::VectorXd elastic_net_predict(const ElasticNetModel& model,
                                    const Eigen::MatrixXd& X) {
  return (X * model.coefficients).array() + model.intercept;
}

AnovaSelection anova_f_select(const Eigen::MatrixXd& X,
                              const std::vector<std::uint8_t>& labels,
                              int top_k) {
  const int m = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (static_cast<int>(labels.size()) != m)
    throw DimensionMismatch("anova_f_select: labels do not match X");
  long n0 = 0, n1 = 0;
  for (const auto l : labels) (l ? n1 : n0) += 1;
  if (n0 == 0 || n1 == 0)
    throw DegenerateGroup("anova_f_select: both classes must be nonempty");
  if (top_k < 1) throw InvalidInput("anova_f_select: top_k must be >= 1");
  top_k = std::min(top_k, p);

  AnovaSelection out;
  out.f_scores.resize(p);
  for (int j = 0; j < p; ++j) {
    double s0 = 0.0, s1 = 0.0;
    for (int i = 0; i < m; ++i) (labels[i] ? s1 : s0) += X(i, j);
    const double mu0 = s0 / n0, mu1 = s1 / n1;
    const double grand = (s0 + s1) / m;
    double within = 0.0;
    for (int i = 0; i < m; ++i) {
      const double d = X(i, j) - (labels[i] ? mu1 : mu0);
      within += d * d;
    }
    const double between =
        n0 * (mu0 - grand) * (mu0 - grand) + n1 * (mu1 - grand) * (mu1 - grand);
    const double ms_within = within / (m - 2);
    if (between == 0.0) {
      out.f_scores[j] = 0.0;
    } else if (ms_within == 0.0) {
      out.f_scores[j] = std::numeric_limits<double>::infinity();
    } else {
      out.f_scores[j] = between / ms_within;  // df_between = 1
    }
  }

  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return out.f_scores[a] > out.f_scores[b];
  });
  out.selected.assign(order.begin(), order.begin() + top_k);
  return out;
}

LinearSvmModel linear_svm_fit(const Eigen::MatrixXd& X,
                              const std::vector<int>& labels, double C,
                              int epochs, std::uint64_t seed) {
  const int m = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (static_cast<int>(labels.size()) != m)
    throw DimensionMismatch("linear_svm_fit: labels do not match X");
  for (const int l : labels)
    if (l != -1 && l != 1)
      throw InvalidInput("linear_svm_fit: labels must be -1 or +1");
  if (C <= 0.0) throw InvalidInput("linear_svm_fit: C must be positive");

  // Bias handled as an appended constant feature (regularized, as in dual
  // coordinate descent solvers).
  Eigen::VectorXd w = Eigen::VectorXd::Zero(p + 1);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd q_diag(m);
  for (int i = 0; i < m; ++i) q_diag[i] = X.row(i).squaredNorm() + 1.0;

  Rng rng(seed);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    double max_step = 0.0;
    for (const int i : order) {
      const double yi = static_cast<double>(labels[i]);
      const double margin = X.row(i).dot(w.head(p)) + w[p];
      const double grad = yi * margin - 1.0;
      const double old = alpha[i];
      const double updated =
          std::clamp(old - grad / q_diag[i], 0.0, C);
      if (updated != old) {
        const double delta = (updated - old) * yi;
        w.head(p) += delta * X.row(i).transpose();
        w[p] += delta;
        alpha[i] = updated;
        max_step = std::max(max_step, std::abs(updated - old));
      }
    }
    if (max_step <= 1e-12) break;
  }
  LinearSvmModel model;
  model.weights = w.head(p);
  model.bias = w[p];
  return model;
}

Eigen::VectorXd linear_svm_decision(const LinearSvmModel& model,
                                    const Eigen::MatrixXd& X) {
  if (X.cols() != model.weights.size())
    throw DimensionMismatch("linear_svm_decision: feature count mismatch");
  return (X * model.weights).array() + model.bias;
}

LdaModel lda_fit(const Eigen::MatrixXd& X,
                 const std::vector<std::uint8_t>& labels, double shrinkage) {
  const int m = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (static_cast<int>(labels.size()) != m)
    throw DimensionMismatch("lda_fit: labels do not match X");
  if (shrinkage < 0.0 || shrinkage > 1.0)
    throw InvalidInput("lda_fit: shrinkage must be in [0, 1]");
  long n0 = 0, n1 = 0;
  for (const auto l : labels) (l ? n1 : n0) += 1;
  if (n0 == 0 || n1 == 0)
    throw DegenerateGroup("lda_fit: both classes must be nonempty");

  Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd mu1 = Eigen::VectorXd::Zero(p);
  for (int i = 0; i < m; ++i)
    (labels[i] ? mu1 : mu0) += X.row(i).transpose();
  mu0 /= static_cast<double>(n0);
  mu1 /= static_cast<double>(n1);

  Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd d =
        X.row(i).transpose() - (labels[i] ? mu1 : mu0);
    pooled.noalias() += d * d.transpose();
  }
  pooled /= std::max<long>(m - 2, 1);

  Eigen::MatrixXd reg = (1.0 - shrinkage) * pooled;
  reg.diagonal().array() += shrinkage * pooled.trace() / p;

  Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success)
    throw SingularCovariance(
        "lda_fit: pooled covariance is singular (shrinkage needed)");

  LdaModel model;
  model.direction = llt.solve(mu1 - mu0);
  model.threshold =
      0.5 * (model.direction.dot(mu0) + model.direction.dot(mu1));
  return model;
}

Eigen::VectorXd lda_decision(const LdaModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.direction.size())
    throw DimensionMismatch("lda_decision: feature count mismatch");
  return (X * model.direction).array() - model.threshold;
}

std::vector<std::uint8_t> lda_predict(const LdaModel& model,
                                      const Eigen::MatrixXd& X) {
  const Eigen::VectorXd scores = lda_decision(model, X);
  std::vector<std::uint8_t> out(scores.size());
  for (int i = 0; i < scores.size(); ++i) out[i] = scores[i] > 0.0 ? 1 : 0;
  return out;
}

BinaryMetrics binary_metrics(const std::vector<double>& scores,
                             const std::vector<std::uint8_t>& predictions,
                             const std::vector<std::uint8_t>& truth) {
  const std::size_t m = truth.size();
  if (m == 0) throw EmptyInput("binary_metrics: empty input");
  if (scores.size() != m || predictions.size() != m)
    throw DimensionMismatch("binary_metrics: length mismatch");
  std::size_t pos = 0;
  for (const auto t : truth) pos += t ? 1 : 0;
  const std::size_t neg = m - pos;
  if (pos == 0 || neg == 0)
    throw SingleClass("binary_metrics: both classes must be present");

  std::size_t correct = 0, tp = 0, tn = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (predictions[i] == truth[i]) {
      ++correct;
      (truth[i] ? tp : tn) += 1;
    }
  }

  // Mann-Whitney AUC via midranks; ties contribute 1/2 per pair.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] < scores[b]; });
  std::vector<double> rank(m);
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) +
                                  static_cast<double>(j + 1));
    for (std::size_t q = i; q <= j; ++q) rank[order[q]] = midrank;
    i = j + 1;
  }
  double rank_sum_pos = 0.0;
  for (std::size_t q = 0; q < m; ++q)
    if (truth[q]) rank_sum_pos += rank[q];
  const double auc =
      (rank_sum_pos - 0.5 * pos * (pos + 1)) /
      (static_cast<double>(pos) * static_cast<double>(neg));

  return {static_cast<double>(correct) / m, auc,
          static_cast<double>(tp) / pos, static_cast<double>(tn) / neg};
}

}  // namespace corrgeo
