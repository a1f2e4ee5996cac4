#include "corrgeo/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "corrgeo/triangular.hpp"

#include "corrgeo/cohort.hpp"
#include "corrgeo/cross_validation.hpp"
#include "corrgeo/errors.hpp"
#include "corrgeo/graph_spectral.hpp"
#include "corrgeo/io.hpp"
#include "corrgeo/manifold.hpp"
#include "corrgeo/pipelines.hpp"
#include "corrgeo/stats_testing.hpp"
#include "corrgeo/synth.hpp"
#include "corrgeo/version.hpp"

namespace corrgeo {

namespace {

using nlohmann::json;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw MissingFile("cannot write '" + out_path + "'");
  out << text;
}

json report_shell(const std::string& command, json config, json results,
                  const std::vector<std::string>& warnings) {
  return json{{"command", command},
              {"config", std::move(config)},
              {"results", std::move(results)},
              {"warnings", warnings},
              {"library_version", kVersion}};
}

json cv_report_to_json(const CVReport& r) {
  json folds = json::array();
  for (const auto& f : r.folds)
    folds.push_back(json{{"metrics", f.values}, {"hyperparams", f.hyperparams}});
  return json{{"representation", r.representation},
              {"folds", std::move(folds)},
              {"mean", r.mean},
              {"sd", r.sd}};
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

struct CommonOpts {
  std::uint64_t seed = 42;
  int threads = 1;
  bool shrink = false;
  std::string metric = "offlog";
  std::string output;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_metric = true) {
  cmd->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", opts.threads, "Worker threads")
      ->envname("CORRGEO_THREADS")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  cmd->add_flag("--shrink", opts.shrink,
                "Allow shrinkage of rank-deficient input matrices");
  if (with_metric)
    cmd->add_option("--metric", opts.metric,
                    "Geometry: euclidean|offlog|ecm|lec")
        ->check(CLI::IsMember({"euclidean", "offlog", "ecm", "lec"}))
        ->capture_default_str();
  cmd->add_option("-o,--output", opts.output,
                  "Output file (default: stdout)");
}

// Echoes the flags that determine the result. Execution details (thread
// count, output destination) are excluded so reports are byte-identical
// across --threads settings and output paths.
json common_config(const CommonOpts& opts, bool with_metric = true) {
  json c{{"seed", opts.seed}, {"shrink", opts.shrink}};
  if (with_metric) c["metric"] = opts.metric;
  return c;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Geometry-aware statistics for correlation matrices and "
               "Laplacian eigenvector subspaces"};
  app.require_subcommand(1);

  // --- dist ---------------------------------------------------------------
  auto* dist_cmd = app.add_subcommand(
      "dist", "Geodesic distance between two correlation matrices");
  CommonOpts dist_opts;
  std::string dist_a, dist_b;
  dist_cmd->add_option("A", dist_a, "First matrix CSV")->required();
  dist_cmd->add_option("B", dist_b, "Second matrix CSV")->required();
  add_common(dist_cmd, dist_opts);

  // --- mean ---------------------------------------------------------------
  auto* mean_cmd =
      app.add_subcommand("mean", "Frechet mean of a cohort of matrices");
  CommonOpts mean_opts;
  std::string mean_manifest;
  mean_cmd->add_option("manifest", mean_manifest, "Cohort manifest CSV")
      ->required();
  add_common(mean_cmd, mean_opts);

  // --- tangent ------------------------------------------------------------
  auto* tangent_cmd = app.add_subcommand(
      "tangent", "Tangent-space coordinates of every subject");
  CommonOpts tangent_opts;
  std::string tangent_manifest;
  tangent_cmd->add_option("manifest", tangent_manifest, "Cohort manifest CSV")
      ->required();
  add_common(tangent_cmd, tangent_opts);

  // --- bgtest -------------------------------------------------------------
  auto* bg_cmd = app.add_subcommand(
      "bgtest", "Interpoint-distance two-sample permutation test");
  CommonOpts bg_opts;
  std::string bg_manifest;
  int bg_nperm = 1000;
  bg_cmd->add_option("manifest", bg_manifest, "Cohort manifest CSV")
      ->required();
  bg_cmd->add_option("--n-perm", bg_nperm, "Number of label permutations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(bg_cmd, bg_opts);

  // --- brainage -----------------------------------------------------------
  auto* ba_cmd = app.add_subcommand(
      "brainage", "Age regression with scaler + PCA + elastic net");
  CommonOpts ba_opts;
  std::string ba_manifest;
  double ba_variance_target = 0.8;
  ba_cmd->add_option("manifest", ba_manifest, "Cohort manifest CSV")
      ->required();
  ba_cmd->add_option("--variance-target", ba_variance_target,
                     "PCA explained-variance target")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  add_common(ba_cmd, ba_opts);

  // --- classify -----------------------------------------------------------
  auto* cl_cmd = app.add_subcommand(
      "classify", "Diagnostic classification with ANOVA-F + scaler + SVM");
  CommonOpts cl_opts;
  std::string cl_manifest;
  cl_cmd->add_option("manifest", cl_manifest, "Cohort manifest CSV")
      ->required();
  add_common(cl_cmd, cl_opts);

  // --- grassmann ----------------------------------------------------------
  auto* gr_cmd = app.add_subcommand(
      "grassmann", "Subspace discriminant pipeline with LDA baseline");
  CommonOpts gr_opts;
  std::string gr_manifest;
  double gr_density = 0.2;
  int gr_jmax = 30;
  gr_cmd->add_option("manifest", gr_manifest, "Cohort manifest CSV")
      ->required();
  gr_cmd->add_option("--density", gr_density, "Graph edge density")
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();
  gr_cmd->add_option("--j-max", gr_jmax, "Largest gap index considered")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(gr_cmd, gr_opts, /*with_metric=*/false);

  // --- laplacian ----------------------------------------------------------
  auto* la_cmd = app.add_subcommand(
      "laplacian", "Laplacian spectrum, gap spectrum and selected k");
  CommonOpts la_opts;
  std::string la_matrix;
  double la_density = 0.2;
  int la_jmax = 30;
  la_cmd->add_option("A", la_matrix, "Matrix CSV")->required();
  la_cmd->add_option("--density", la_density, "Graph edge density")
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();
  la_cmd->add_option("--j-max", la_jmax, "Largest gap index considered")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(la_cmd, la_opts, /*with_metric=*/false);

  // --- synth --------------------------------------------------------------
  auto* sy_cmd =
      app.add_subcommand("synth", "Write a synthetic cohort to a directory");
  CommonOpts sy_opts;
  std::string sy_preset = "group-effect";
  int sy_n = 20, sy_m = 15, sy_support = 5;
  double sy_effect = 1.0, sy_noise = 0.5, sy_slope = 8.0, sy_age_noise = 2.0;
  sy_cmd->add_option("--preset", sy_preset, "Cohort preset")
      ->check(CLI::IsMember({"group-effect", "age-trend", "subspace"}))
      ->capture_default_str();
  sy_cmd->add_option("--n", sy_n, "Matrix dimension")
      ->check(CLI::Range(2, 1000))
      ->capture_default_str();
  sy_cmd->add_option("--m-per-group", sy_m, "Subjects per group")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sy_cmd->add_option("--effect-size", sy_effect, "Planted effect size")
      ->capture_default_str();
  sy_cmd->add_option("--noise", sy_noise, "Coordinate noise scale")
      ->capture_default_str();
  sy_cmd->add_option("--support-size", sy_support,
                     "Pairs carrying the planted effect")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sy_cmd->add_option("--slope", sy_slope, "Age slope (age-trend preset)")
      ->capture_default_str();
  sy_cmd->add_option("--age-noise", sy_age_noise,
                     "Age noise sd (age-trend preset)")
      ->capture_default_str();
  add_common(sy_cmd, sy_opts, /*with_metric=*/false);
  sy_cmd->get_option("--output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage errors are validation errors
  }

  if (dist_cmd->parsed()) {
    const Metric m = parse_metric(dist_opts.metric);
    LoadedMatrix a = read_matrix(dist_a, dist_opts.shrink);
    LoadedMatrix b = read_matrix(dist_b, dist_opts.shrink);
    const double d = dist(a.matrix, b.matrix, m);
    if (dist_opts.output.empty()) {
      // Bare invocation prints just the value; -o writes the full report.
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g\n", d);
      std::cout << buf;
      return 0;
    }
    json config = common_config(dist_opts);
    config["A"] = dist_a;
    config["B"] = dist_b;
    std::vector<std::string> warnings = a.warnings;
    warnings.insert(warnings.end(), b.warnings.begin(), b.warnings.end());
    emit(dump_json_17(report_shell("dist", config, json{{"distance", d}},
                                   warnings)),
         dist_opts.output);
    return 0;
  }

  if (mean_cmd->parsed()) {
    const Metric m = parse_metric(mean_opts.metric);
    LoadedCohort loaded = read_manifest(mean_manifest, mean_opts.shrink);
    std::vector<CorrelationMatrix> matrices;
    for (const auto& s : loaded.cohort.subjects) matrices.push_back(s.matrix);
    const CorrelationMatrix mean = m == Metric::Euclidean
                                       ? euclidean_mean(matrices)
                                       : frechet_mean(matrices, m);
    if (mean_opts.output.empty())
      throw InvalidInput("mean: -o output path is required");
    write_matrix_csv(mean.matrix(), mean_opts.output);
    return 0;
  }

  if (tangent_cmd->parsed()) {
    const Metric m = parse_metric(tangent_opts.metric);
    LoadedCohort loaded = read_manifest(tangent_manifest, tangent_opts.shrink);
    const Eigen::MatrixXd X =
        cohort_features(loaded.cohort, m, tangent_opts.threads);
    std::string text = "subject_id";
    for (int j = 0; j < X.cols(); ++j)
      text += ",c" + std::to_string(j + 1);
    text += '\n';
    for (int i = 0; i < X.rows(); ++i) {
      text += loaded.cohort.subjects[i].id;
      for (int j = 0; j < X.cols(); ++j) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), ",%.17g", X(i, j));
        text += buf;
      }
      text += '\n';
    }
    emit(text, tangent_opts.output);
    return 0;
  }

  if (bg_cmd->parsed()) {
    const Metric m = parse_metric(bg_opts.metric);
    LoadedCohort loaded = read_manifest(bg_manifest, bg_opts.shrink);
    loaded.cohort.validate();
    const std::vector<std::uint8_t> labels = loaded.cohort.binary_labels();
    std::vector<CorrelationMatrix> matrices;
    for (const auto& s : loaded.cohort.subjects) matrices.push_back(s.matrix);
    const DistanceMatrix D = pairwise_distances(
        matrices,
        [m](const CorrelationMatrix& x, const CorrelationMatrix& y) {
          return dist(x, y, m);
        },
        bg_opts.threads);
    const PermutationTestResult res =
        permutation_test(D, labels, bg_nperm, bg_opts.seed, bg_opts.threads);
    json config = common_config(bg_opts);
    config["manifest"] = bg_manifest;
    config["n_perm"] = bg_nperm;
    json null_samples = json::array();
    for (const double t : res.null_samples) null_samples.push_back(t);
    json results{{"statistic", res.statistic},
                 {"p_value", res.p_value},
                 {"n_permutations", res.n_permutations},
                 {"null_samples", std::move(null_samples)}};
    emit(dump_json_17(report_shell("bgtest", config, results,
                                   loaded.warnings)),
         bg_opts.output);
    return 0;
  }

  if (ba_cmd->parsed()) {
    const Metric m = parse_metric(ba_opts.metric);
    LoadedCohort loaded = read_manifest(ba_manifest, ba_opts.shrink);
    const CVPlan plan =
        make_regression_cv_plan(loaded.cohort.ages(), 5, 5, ba_opts.seed);
    BrainAgeConfig config;
    config.variance_target = ba_variance_target;
    config.threads = ba_opts.threads;
    const CVReport report = run_brainage(loaded.cohort, m, plan, config);
    json cfg = common_config(ba_opts);
    cfg["manifest"] = ba_manifest;
    cfg["variance_target"] = ba_variance_target;
    std::vector<std::string> warnings = loaded.warnings;
    warnings.insert(warnings.end(), report.warnings.begin(),
                    report.warnings.end());
    emit(dump_json_17(report_shell("brainage", cfg, cv_report_to_json(report),
                                   warnings)),
         ba_opts.output);
    return 0;
  }

  if (cl_cmd->parsed()) {
    const Metric m = parse_metric(cl_opts.metric);
    LoadedCohort loaded = read_manifest(cl_manifest, cl_opts.shrink);
    const CVPlan plan = make_classification_cv_plan(
        loaded.cohort.binary_labels(), 5, 5, cl_opts.seed);
    ClassificationConfig config;
    config.threads = cl_opts.threads;
    const CVReport report = run_classification(loaded.cohort, m, plan, config);
    json cfg = common_config(cl_opts);
    cfg["manifest"] = cl_manifest;
    std::vector<std::string> warnings = loaded.warnings;
    warnings.insert(warnings.end(), report.warnings.begin(),
                    report.warnings.end());
    emit(dump_json_17(report_shell("classify", cfg, cv_report_to_json(report),
                                   warnings)),
         cl_opts.output);
    return 0;
  }

  if (gr_cmd->parsed()) {
    LoadedCohort loaded = read_manifest(gr_manifest, gr_opts.shrink);
    const CVPlan plan = make_classification_cv_plan(
        loaded.cohort.binary_labels(), 5, 5, gr_opts.seed);
    GrassmannPipelineConfig config;
    config.density = gr_density;
    config.j_max = gr_jmax;
    config.threads = gr_opts.threads;
    const GrassmannPipelineResult result =
        run_grassmann_pipeline(loaded.cohort, plan, config);
    json cfg = common_config(gr_opts, /*with_metric=*/false);
    cfg["manifest"] = gr_manifest;
    cfg["density"] = gr_density;
    cfg["j_max"] = gr_jmax;
    json results = cv_report_to_json(result.report);
    results["fold_k"] = result.fold_k;
    results["region_selection_frequency"] =
        vector_to_json(result.region_selection_frequency);
    std::vector<std::string> warnings = loaded.warnings;
    warnings.insert(warnings.end(), result.report.warnings.begin(),
                    result.report.warnings.end());
    emit(dump_json_17(report_shell("grassmann", cfg, results, warnings)),
         gr_opts.output);
    return 0;
  }

  if (la_cmd->parsed()) {
    LoadedMatrix a = read_matrix(la_matrix, la_opts.shrink);
    const WeightedGraph g = adjacency_from_correlation(a.matrix, la_density);
    const LaplacianSpectrum spec = laplacian_spectrum(g);
    const int n = g.size();
    const int isolated =
        static_cast<int>((g.degrees().array() == 0.0).count());
    if (isolated > 0)
      a.warnings.push_back(
          std::to_string(isolated) +
          " isolated node(s): zero row/column convention applied");
    const int j_max = std::min(la_jmax, n - 1);
    const int k = gap_spectrum_select_k(spec, j_max);
    json gaps = json::array();
    for (int j = 1; j < n; ++j)
      gaps.push_back(spec.eigenvalues[j] - spec.eigenvalues[j - 1]);
    json cfg = common_config(la_opts, /*with_metric=*/false);
    cfg["A"] = la_matrix;
    cfg["density"] = la_density;
    cfg["j_max"] = la_jmax;
    json results{{"eigenvalues", vector_to_json(spec.eigenvalues)},
                 {"gap_spectrum", std::move(gaps)},
                 {"selected_k", k}};
    emit(dump_json_17(report_shell("laplacian", cfg, results, a.warnings)),
         la_opts.output);
    return 0;
  }

  if (sy_cmd->parsed()) {
    SynthSpec spec;
    spec.n = sy_n;
    spec.m_per_group = sy_m;
    spec.effect_size = sy_effect;
    spec.noise_scale = sy_noise;
    spec.seed = sy_opts.seed;
    for (int i = 0; i < std::min(sy_support, pair_count(sy_n)); ++i)
      spec.effect_support.push_back(i);

    CohortDataset cohort;
    if (sy_preset == "group-effect") {
      cohort = inject_group_effect(spec);
    } else if (sy_preset == "age-trend") {
      cohort = inject_age_trend(spec, sy_slope, sy_age_noise);
    } else {
      // Blocks sized so the default 20% graph density keeps them connected.
      const int communities = std::max(2, sy_n / 7);
      const double noise =
          sy_cmd->get_option("--noise")->count() ? sy_noise : 0.08;
      cohort = community_cohort(sy_n, communities, sy_m,
                                std::max(2, sy_n / 8), 0.5, noise,
                                sy_opts.seed);
    }
    write_cohort(cohort, sy_opts.output);
    return 0;
  }

  return 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  try {
    return run(argc, argv);
  } catch (const NotPositiveDefinite& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CutLocus& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateGroup& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SingleClass& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SingularCovariance& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace corrgeo
