#include "corrgeo/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "corrgeo/errors.hpp"
#include "corrgeo/graph_spectral.hpp"
#include "corrgeo/ml_primitives.hpp"
#include "corrgeo/parallel.hpp"
#include "corrgeo/random.hpp"
#include "corrgeo/triangular.hpp"

namespace corrgeo {

namespace {

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = base;
  for (const auto v : path) s = Rng::splitmix64(s ^ Rng::splitmix64(v));
  return s;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& X,
                            const std::vector<int>& rows) {
  Eigen::MatrixXd out(rows.size(), X.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(r) = X.row(rows[r]);
  return out;
}

Eigen::VectorXd select_entries(const Eigen::VectorXd& v,
                               const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) out[r] = v[idx[r]];
  return out;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X,
                               const std::vector<int>& cols) {
  Eigen::MatrixXd out(X.rows(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(c) = X.col(cols[c]);
  return out;
}

std::vector<double> default_lambdas() {
  // 10 log-spaced values in [1e-3, 1e1].
  std::vector<double> out;
  for (int i = 0; i < 10; ++i)
    out.push_back(std::pow(10.0, -3.0 + 4.0 * i / 9.0));
  return out;
}

double r_squared(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred) {
  const double mean = truth.mean();
  const double ss_tot = (truth.array() - mean).square().sum();
  const double ss_res = (truth - pred).squaredNorm();
  if (ss_tot <= 0.0) return ss_res <= 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace

Eigen::MatrixXd cohort_features(const CohortDataset& cohort, Metric m,
                                int threads) {
  cohort.validate();
  const int n = cohort.matrix_dim();
  const int p = pair_count(n);
  Eigen::MatrixXd X(cohort.size(), p);
  parallel_for(cohort.subjects.size(), threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i)
                   X.row(i) = embed(cohort.subjects[i].matrix, m)
                                  .values.transpose();
               });
  return X;
}

CVReport run_brainage(const CohortDataset& cohort, Metric representation,
                      const CVPlan& plan, const BrainAgeConfig& config) {
  const std::vector<double> ages_v = cohort.ages();
  const Eigen::VectorXd ages =
      Eigen::Map<const Eigen::VectorXd>(ages_v.data(), ages_v.size());
  const int m = cohort.size();
  validate_plan(plan, m);
  const Eigen::MatrixXd X =
      cohort_features(cohort, representation, config.threads);

  const std::vector<double> lambdas =
      config.lambdas.empty() ? default_lambdas() : config.lambdas;
  struct GridPoint {
    double lambda;
    double l1_ratio;
  };
  std::vector<GridPoint> grid;
  for (const double l : lambdas)
    for (const double r : config.l1_ratios) grid.push_back({l, r});

  CVReport report;
  report.representation = to_string(representation);

  for (int f = 0; f < plan.n_outer(); ++f) {
    const std::vector<int> train = plan.outer_train(f, m);
    const std::vector<int>& test = plan.outer_test[f];
    require_disjoint(train, test);

    // Inner model selection by mean validation MAE.
    std::vector<double> grid_mae(grid.size(), 0.0);
    parallel_for(grid.size(), config.threads, [&](std::size_t gb,
                                                  std::size_t ge) {
      for (std::size_t g = gb; g < ge; ++g) {
        double acc = 0.0;
        for (const auto& val_idx : plan.inner_test[f]) {
          std::vector<int> fit_idx;
          const std::set<int> val_set(val_idx.begin(), val_idx.end());
          for (const int i : train)
            if (!val_set.count(i)) fit_idx.push_back(i);
          require_disjoint(fit_idx, val_idx);

          const Eigen::MatrixXd X_fit = select_rows(X, fit_idx);
          const Scaler scaler = Scaler::fit(X_fit);
          const Pca pca =
              Pca::fit(scaler.apply(X_fit), config.variance_target);
          const Eigen::MatrixXd Z_fit = pca.apply(scaler.apply(X_fit));
          const ElasticNetModel en = elastic_net_fit(
              Z_fit, select_entries(ages, fit_idx), grid[g].lambda,
              grid[g].l1_ratio);
          const Eigen::MatrixXd Z_val =
              pca.apply(scaler.apply(select_rows(X, val_idx)));
          const Eigen::VectorXd pred = elastic_net_predict(en, Z_val);
          acc += (pred - select_entries(ages, val_idx))
                     .cwiseAbs()
                     .mean();
        }
        grid_mae[g] = acc / plan.inner_test[f].size();
      }
    });
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g)
      if (grid_mae[g] < grid_mae[best]) best = g;

    // Refit on the full outer training set.
    const Eigen::MatrixXd X_train = select_rows(X, train);
    const Scaler scaler = Scaler::fit(X_train);
    const Pca pca = Pca::fit(scaler.apply(X_train), config.variance_target);
    const ElasticNetModel en = elastic_net_fit(
        pca.apply(scaler.apply(X_train)), select_entries(ages, train),
        grid[best].lambda, grid[best].l1_ratio);
    if (!en.converged)
      report.warnings.push_back("elastic net did not converge in fold " +
                                std::to_string(f));
    const Eigen::VectorXd pred = elastic_net_predict(
        en, pca.apply(scaler.apply(select_rows(X, test))));
    const Eigen::VectorXd truth = select_entries(ages, test);

    FoldMetrics fm;
    fm.values["mae"] = (pred - truth).cwiseAbs().mean();
    fm.values["r2"] = r_squared(truth, pred);
    fm.hyperparams["lambda"] = grid[best].lambda;
    fm.hyperparams["l1_ratio"] = grid[best].l1_ratio;
    fm.hyperparams["pca_components"] = pca.n_components();
    report.folds.push_back(std::move(fm));
  }
  report.aggregate();
  return report;
}

namespace {

struct SvmPipeline {
  std::vector<int> features;
  Scaler scaler;
  LinearSvmModel svm;
};

SvmPipeline fit_svm_pipeline(const Eigen::MatrixXd& X_train,
                             const std::vector<std::uint8_t>& y_train,
                             int top_k, double cost, int epochs,
                             std::uint64_t seed) {
  SvmPipeline pipe;
  pipe.features = anova_f_select(X_train, y_train, top_k).selected;
  const Eigen::MatrixXd sel = select_columns(X_train, pipe.features);
  pipe.scaler = Scaler::fit(sel);
  std::vector<int> pm(y_train.size());
  for (std::size_t i = 0; i < y_train.size(); ++i)
    pm[i] = y_train[i] ? 1 : -1;
  pipe.svm = linear_svm_fit(pipe.scaler.apply(sel), pm, cost, epochs, seed);
  return pipe;
}

Eigen::VectorXd svm_pipeline_decision(const SvmPipeline& pipe,
                                      const Eigen::MatrixXd& X) {
  return linear_svm_decision(
      pipe.svm, pipe.scaler.apply(select_columns(X, pipe.features)));
}

std::vector<std::uint8_t> subset_labels(const std::vector<std::uint8_t>& y,
                                        const std::vector<int>& idx) {
  std::vector<std::uint8_t> out;
  out.reserve(idx.size());
  for (const int i : idx) out.push_back(y[i]);
  return out;
}

}  // namespace

CVReport run_classification(const CohortDataset& cohort,
                            Metric representation, const CVPlan& plan,
                            const ClassificationConfig& config) {
  const std::vector<std::uint8_t> y = cohort.binary_labels();
  const int m = cohort.size();
  validate_plan(plan, m);
  const Eigen::MatrixXd X =
      cohort_features(cohort, representation, config.threads);
  const int p = static_cast<int>(X.cols());

  std::vector<int> top_ks;
  for (const int k : config.top_k_grid)
    if (k <= p) top_ks.push_back(k);
  if (top_ks.empty()) top_ks.push_back(p);

  struct GridPoint {
    double cost;
    int top_k;
  };
  std::vector<GridPoint> grid;
  for (const double c : config.svm_costs)
    for (const int k : top_ks) grid.push_back({c, k});

  CVReport report;
  report.representation = to_string(representation);

  for (int f = 0; f < plan.n_outer(); ++f) {
    const std::vector<int> train = plan.outer_train(f, m);
    const std::vector<int>& test = plan.outer_test[f];
    require_disjoint(train, test);

    std::vector<double> grid_auc(grid.size(), 0.0);
    parallel_for(grid.size(), config.threads, [&](std::size_t gb,
                                                  std::size_t ge) {
      for (std::size_t g = gb; g < ge; ++g) {
        double acc = 0.0;
        for (std::size_t v = 0; v < plan.inner_test[f].size(); ++v) {
          const std::vector<int>& val_idx = plan.inner_test[f][v];
          std::vector<int> fit_idx;
          const std::set<int> val_set(val_idx.begin(), val_idx.end());
          for (const int i : train)
            if (!val_set.count(i)) fit_idx.push_back(i);
          require_disjoint(fit_idx, val_idx);

          const SvmPipeline pipe = fit_svm_pipeline(
              select_rows(X, fit_idx), subset_labels(y, fit_idx),
              grid[g].top_k, grid[g].cost, config.svm_epochs,
              derive_seed(plan.seed, {static_cast<std::uint64_t>(f),
                                      static_cast<std::uint64_t>(v)}));
          const Eigen::VectorXd scores =
              svm_pipeline_decision(pipe, select_rows(X, val_idx));
          const std::vector<std::uint8_t> val_y = subset_labels(y, val_idx);
          std::vector<double> score_v(scores.data(),
                                      scores.data() + scores.size());
          std::vector<std::uint8_t> pred(val_y.size());
          for (std::size_t i = 0; i < pred.size(); ++i)
            pred[i] = scores[i] > 0.0 ? 1 : 0;
          acc += binary_metrics(score_v, pred, val_y).auc;
        }
        grid_auc[g] = acc / plan.inner_test[f].size();
      }
    });
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g)
      if (grid_auc[g] > grid_auc[best]) best = g;

    const SvmPipeline pipe = fit_svm_pipeline(
        select_rows(X, train), subset_labels(y, train), grid[best].top_k,
        grid[best].cost, config.svm_epochs,
        derive_seed(plan.seed, {static_cast<std::uint64_t>(f), 777}));
    const Eigen::VectorXd scores =
        svm_pipeline_decision(pipe, select_rows(X, test));
    const std::vector<std::uint8_t> test_y = subset_labels(y, test);
    std::vector<double> score_v(scores.data(), scores.data() + scores.size());
    std::vector<std::uint8_t> pred(test_y.size());
    for (std::size_t i = 0; i < pred.size(); ++i)
      pred[i] = scores[i] > 0.0 ? 1 : 0;
    const BinaryMetrics bm = binary_metrics(score_v, pred, test_y);

    FoldMetrics fm;
    fm.values["accuracy"] = bm.accuracy;
    fm.values["auc"] = bm.auc;
    fm.values["sensitivity"] = bm.sensitivity;
    fm.values["specificity"] = bm.specificity;
    fm.hyperparams["C"] = grid[best].cost;
    fm.hyperparams["top_k"] = grid[best].top_k;
    report.folds.push_back(std::move(fm));
  }
  report.aggregate();
  return report;
}

GrassmannPipelineResult run_grassmann_pipeline(
    const CohortDataset& cohort, const CVPlan& plan,
    const GrassmannPipelineConfig& config) {
  const std::vector<std::uint8_t> y = cohort.binary_labels();
  const int m = cohort.size();
  const int n = cohort.matrix_dim();
  validate_plan(plan, m);

  // Per-subject graphs and Laplacian spectra; purely subject-local, so safe
  // to compute once for all folds.
  std::vector<Eigen::MatrixXd> adjacency(m, Eigen::MatrixXd());
  std::vector<LaplacianSpectrum> spectra(m);
  std::vector<std::uint8_t> has_isolated(m, 0);
  parallel_for(static_cast<std::size_t>(m), config.threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   const WeightedGraph g = adjacency_from_correlation(
                       cohort.subjects[i].matrix, config.density);
                   adjacency[i] = g.weights();
                   spectra[i] = laplacian_spectrum(g);
                   has_isolated[i] = (g.degrees().array() == 0.0).any();
                 }
               });

  GrassmannPipelineResult result;
  result.report.representation = "grassmann";
  const long isolated_subjects =
      std::count(has_isolated.begin(), has_isolated.end(), std::uint8_t{1});
  if (isolated_subjects > 0)
    result.report.warnings.push_back(
        std::to_string(isolated_subjects) +
        " subject graph(s) contain isolated nodes (zero row/column "
        "convention)");
  Eigen::VectorXd selection_counts = Eigen::VectorXd::Zero(n);

  for (int f = 0; f < plan.n_outer(); ++f) {
    const std::vector<int> train = plan.outer_train(f, m);
    const std::vector<int>& test = plan.outer_test[f];
    require_disjoint(train, test);

    // Group-average Laplacian gap spectra on training subjects only; the
    // shared k is the max over the two groups.
    const int j_max = std::min(config.j_max, n - 1);
    int k = 1;
    if (config.forced_k > 0) {
      if (config.forced_k > n)
        throw InvalidInput("run_grassmann_pipeline: forced_k exceeds n");
      k = config.forced_k;
    } else {
      for (const std::uint8_t group : {std::uint8_t{0}, std::uint8_t{1}}) {
        Eigen::MatrixXd mean_w = Eigen::MatrixXd::Zero(n, n);
        int count = 0;
        for (const int i : train)
          if (y[i] == group) {
            mean_w += adjacency[i];
            ++count;
          }
        if (count == 0)
          throw DegenerateGroup(
              "run_grassmann_pipeline: a training group is empty");
        mean_w /= static_cast<double>(count);
        const LaplacianSpectrum spec =
            laplacian_spectrum(WeightedGraph(mean_w));
        k = std::max(k, gap_spectrum_select_k(spec, j_max));
      }
    }
    if (k == n)
      result.report.warnings.push_back(
          "fold " + std::to_string(f) +
          ": k equals the ambient dimension; all subspace distances vanish");

    std::vector<GrassmannPoint> points;
    points.reserve(m);
    for (int i = 0; i < m; ++i)
      points.emplace_back(low_frequency_subspace(spectra[i], k));

    std::vector<GrassmannPoint> train_a, train_b;
    for (const int i : train)
      (y[i] ? train_b : train_a).push_back(points[i]);

    DiscriminantModel model = fisher_fit(train_a, train_b, config.fisher);
    if (!model.converged)
      result.report.warnings.push_back(
          "fold " + std::to_string(f) + ": fisher fit hit max iterations");

    std::vector<double> scores;
    std::vector<std::uint8_t> pred;
    for (const int i : test) {
      const Classification c = classify_nearest_center(model, points[i]);
      scores.push_back(c.score);
      pred.push_back(c.label == GroupLabel::B ? 1 : 0);
    }
    const std::vector<std::uint8_t> test_y = subset_labels(y, test);
    const BinaryMetrics bm = binary_metrics(scores, pred, test_y);

    // LDA baseline on the flattened eigenvector matrices exactly as the
    // eigensolver produced them (sign conventions and all), identical folds.
    Eigen::MatrixXd flat(m, n * k);
    for (int i = 0; i < m; ++i) {
      const Eigen::MatrixXd raw = spectra[i].eigenvectors.leftCols(k);
      flat.row(i) =
          Eigen::Map<const Eigen::VectorXd>(raw.data(), n * k).transpose();
    }
    const LdaModel lda = lda_fit(select_rows(flat, train),
                                 subset_labels(y, train),
                                 config.lda_shrinkage);
    const Eigen::MatrixXd flat_test = select_rows(flat, test);
    const Eigen::VectorXd lda_scores_v = lda_decision(lda, flat_test);
    std::vector<double> lda_scores(lda_scores_v.data(),
                                   lda_scores_v.data() + lda_scores_v.size());
    const std::vector<std::uint8_t> lda_pred = lda_predict(lda, flat_test);
    const BinaryMetrics lm = binary_metrics(lda_scores, lda_pred, test_y);

    // Top-decile regions by discriminant score.
    const int top = std::max(1, (n + 9) / 10);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return model.region_scores[a] > model.region_scores[b];
    });
    for (int r = 0; r < top; ++r) selection_counts[order[r]] += 1.0;

    FoldMetrics fm;
    fm.values["accuracy"] = bm.accuracy;
    fm.values["auc"] = bm.auc;
    fm.values["sensitivity"] = bm.sensitivity;
    fm.values["specificity"] = bm.specificity;
    fm.values["lda_accuracy"] = lm.accuracy;
    fm.values["lda_auc"] = lm.auc;
    fm.values["lda_sensitivity"] = lm.sensitivity;
    fm.values["lda_specificity"] = lm.specificity;
    fm.hyperparams["k"] = k;
    result.report.folds.push_back(std::move(fm));
    result.fold_models.push_back(std::move(model));
    result.fold_k.push_back(k);
  }
  result.report.aggregate();
  result.region_selection_frequency =
      selection_counts / static_cast<double>(plan.n_outer());
  return result;
}

}  // namespace corrgeo
