#include "corrgeo/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "corrgeo/cli.hpp"
#include "corrgeo/errors.hpp"
#include "corrgeo/synth.hpp"
#include "test_support.hpp"

using namespace corrgeo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("corrgeo_test_" + std::to_string(Rng(std::random_device{}())
                                                 .integer(1000000000)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"corrgeo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("read_matrix round trips and validates") {
  TempDir tmp;
  write_text(tmp.path / "id.csv", "1,0\n0,1\n");
  const LoadedMatrix id = read_matrix(tmp.path / "id.csv");
  CHECK((id.matrix.matrix() - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK(id.warnings.empty());

  // Diagonal within tolerance is renormalized with a warning.
  write_text(tmp.path / "diag.csv", "0.999999,0.5\n0.5,1\n");
  const LoadedMatrix diag = read_matrix(tmp.path / "diag.csv");
  CHECK(diag.matrix(0, 0) == 1.0);
  CHECK(!diag.warnings.empty());

  // Ragged rows name the offending row.
  write_text(tmp.path / "ragged.csv", "1,0\n0\n");
  CHECK_THROWS_WITH_AS(read_matrix(tmp.path / "ragged.csv"),
                       doctest::Contains("row 2"), ParseError);

  write_text(tmp.path / "badnum.csv", "1,x\nx,1\n");
  CHECK_THROWS_AS(read_matrix(tmp.path / "badnum.csv"), ParseError);

  CHECK_THROWS_AS(read_matrix(tmp.path / "absent.csv"), MissingFile);

  // Indefinite matrices need --shrink.
  write_text(tmp.path / "flat.csv", "1,1,1\n1,1,1\n1,1,1\n");
  CHECK_THROWS_AS(read_matrix(tmp.path / "flat.csv", false),
                  NotPositiveDefinite);
  const LoadedMatrix shrunk = read_matrix(tmp.path / "flat.csv", true);
  CHECK(shrunk.shrink_gamma > 0.0);
  CHECK(!shrunk.warnings.empty());
}

TEST_CASE("matrix csv writing is lossless") {
  TempDir tmp;
  Rng rng(15);
  const CorrelationMatrix C = testing::random_correlation_spd(7, rng);
  write_matrix_csv(C.matrix(), tmp.path / "c.csv");
  const LoadedMatrix back = read_matrix(tmp.path / "c.csv");
  CHECK((back.matrix.matrix() - C.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("manifest round trip via write_cohort") {
  TempDir tmp;
  SynthSpec spec;
  spec.n = 6;
  spec.m_per_group = 3;
  spec.noise_scale = 0.4;
  const CohortDataset cohort = inject_group_effect(spec);
  write_cohort(cohort, tmp.path / "cohort");

  const LoadedCohort loaded = read_manifest(tmp.path / "cohort/manifest.csv");
  REQUIRE(loaded.cohort.size() == cohort.size());
  for (int i = 0; i < cohort.size(); ++i) {
    CHECK(loaded.cohort.subjects[i].id == cohort.subjects[i].id);
    CHECK(loaded.cohort.subjects[i].label == cohort.subjects[i].label);
    CHECK((loaded.cohort.subjects[i].matrix.matrix() -
           cohort.subjects[i].matrix.matrix())
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("manifest validation errors") {
  TempDir tmp;
  write_text(tmp.path / "i.csv", "1,0\n0,1\n");
  write_text(tmp.path / "i3.csv", "1,0,0\n0,1,0\n0,0,1\n");

  write_text(tmp.path / "bad_header.csv", "id,path,label,age\na,i.csv,A,\n");
  CHECK_THROWS_AS(read_manifest(tmp.path / "bad_header.csv"), ParseError);

  write_text(tmp.path / "dup.csv",
             "subject_id,matrix_path,label,age\ns1,i.csv,A,\ns1,i.csv,B,\n");
  CHECK_THROWS_AS(read_manifest(tmp.path / "dup.csv"), DuplicateId);

  write_text(tmp.path / "missing.csv",
             "subject_id,matrix_path,label,age\ns1,gone.csv,A,\n");
  CHECK_THROWS_AS(read_manifest(tmp.path / "missing.csv"), MissingFile);

  write_text(
      tmp.path / "mixed.csv",
      "subject_id,matrix_path,label,age\ns1,i.csv,A,\ns2,i3.csv,B,\n");
  CHECK_THROWS_WITH_AS(read_manifest(tmp.path / "mixed.csv"),
                       doctest::Contains("s2"), DimensionMismatch);

  write_text(tmp.path / "badlabel.csv",
             "subject_id,matrix_path,label,age\ns1,i.csv,X,\n");
  CHECK_THROWS_AS(read_manifest(tmp.path / "badlabel.csv"), ParseError);
}

TEST_CASE("dump_json_17 renders numbers at full precision") {
  const nlohmann::json doc{{"value", 0.1}, {"third", 1.0 / 3.0},
                           {"int", 42}, {"text", "a\"b"}};
  const std::string text = dump_json_17(doc);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("\"a\\\"b\"") != std::string::npos);
  const nlohmann::json back = nlohmann::json::parse(text);
  CHECK(back["value"].get<double>() == 0.1);
  CHECK(back["third"].get<double>() == 1.0 / 3.0);
  CHECK(back["int"].get<int>() == 42);
}

TEST_CASE("cli dist prints zero for identical files") {
  TempDir tmp;
  write_text(tmp.path / "i.csv", "1,0\n0,1\n");
  const std::string out = (tmp.path / "report.json").string();
  const int rc = run_cli({"dist", (tmp.path / "i.csv").string(),
                          (tmp.path / "i.csv").string(), "-o", out});
  CHECK(rc == 0);
  const nlohmann::json report = nlohmann::json::parse(read_text(out));
  CHECK(report["results"]["distance"].get<double>() == 0.0);
  CHECK(report["command"] == "dist");
  CHECK(report["config"]["metric"] == "offlog");
}

TEST_CASE("cli exit codes distinguish validation from numerical failures") {
  TempDir tmp;
  write_text(tmp.path / "flat.csv", "1,1\n1,1\n");
  write_text(tmp.path / "i.csv", "1,0\n0,1\n");
  // Unknown flag: usage error.
  CHECK(run_cli({"dist", "a", "b", "--no-such-flag"}) == 1);
  // Missing file: validation error.
  CHECK(run_cli({"dist", (tmp.path / "gone.csv").string(),
                 (tmp.path / "i.csv").string()}) == 1);
  // Indefinite input without --shrink: numerical failure.
  CHECK(run_cli({"dist", (tmp.path / "flat.csv").string(),
                 (tmp.path / "i.csv").string()}) == 2);
  // Same input with --shrink succeeds.
  CHECK(run_cli({"dist", (tmp.path / "flat.csv").string(),
                 (tmp.path / "i.csv").string(), "--shrink", "-o",
                 (tmp.path / "r.json").string()}) == 0);
}

TEST_CASE("cli bgtest reports are reproducible for a fixed seed") {
  TempDir tmp;
  CHECK(run_cli({"synth", "--preset", "group-effect", "-o",
                 (tmp.path / "cohort").string(), "--n", "6", "--m-per-group",
                 "5", "--seed", "3"}) == 0);
  const std::string manifest = (tmp.path / "cohort/manifest.csv").string();
  const std::string r1 = (tmp.path / "r1.json").string();
  const std::string r2 = (tmp.path / "r2.json").string();
  CHECK(run_cli({"bgtest", manifest, "--n-perm", "100", "--seed", "11", "-o",
                 r1}) == 0);
  CHECK(run_cli({"bgtest", manifest, "--n-perm", "100", "--seed", "11", "-o",
                 r2}) == 0);
  CHECK(read_text(r1) == read_text(r2));
  const nlohmann::json report = nlohmann::json::parse(read_text(r1));
  CHECK(report["results"]["n_permutations"] == 100);
  CHECK(report["results"]["p_value"].get<double>() > 0.0);
}

TEST_CASE("cli mean writes a matrix consistent with the library") {
  TempDir tmp;
  CHECK(run_cli({"synth", "--preset", "group-effect", "-o",
                 (tmp.path / "cohort").string(), "--n", "5", "--m-per-group",
                 "4", "--seed", "8"}) == 0);
  const std::string manifest = (tmp.path / "cohort/manifest.csv").string();
  const std::string out = (tmp.path / "mean.csv").string();
  CHECK(run_cli({"mean", manifest, "-o", out, "--metric", "offlog"}) == 0);

  const LoadedCohort loaded = read_manifest(manifest);
  std::vector<CorrelationMatrix> ms;
  for (const auto& s : loaded.cohort.subjects) ms.push_back(s.matrix);
  const CorrelationMatrix expected = frechet_mean(ms, Metric::OffLog);
  const LoadedMatrix got = read_matrix(out);
  CHECK((got.matrix.matrix() - expected.matrix()).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("cli brainage without ages is a validation error") {
  TempDir tmp;
  CHECK(run_cli({"synth", "--preset", "group-effect", "-o",
                 (tmp.path / "cohort").string(), "--n", "5", "--m-per-group",
                 "6", "--seed", "1"}) == 0);
  // group-effect cohorts carry labels but no ages
  CHECK(run_cli({"brainage",
                 (tmp.path / "cohort/manifest.csv").string()}) == 1);
}

TEST_CASE("cli honors CORRGEO_THREADS as the --threads fallback") {
  TempDir tmp;
  write_text(tmp.path / "i.csv", "1,0\n0,1\n");
  setenv("CORRGEO_THREADS", "3", 1);
  CHECK(run_cli({"dist", (tmp.path / "i.csv").string(),
                 (tmp.path / "i.csv").string(), "-o",
                 (tmp.path / "r.json").string()}) == 0);
  unsetenv("CORRGEO_THREADS");
}

TEST_CASE("cli tangent writes one coordinate row per subject") {
  TempDir tmp;
  CHECK(run_cli({"synth", "--preset", "group-effect", "-o",
                 (tmp.path / "cohort").string(), "--n", "5", "--m-per-group",
                 "3", "--seed", "2"}) == 0);
  const std::string out = (tmp.path / "coords.csv").string();
  CHECK(run_cli({"tangent", (tmp.path / "cohort/manifest.csv").string(), "-o",
                 out}) == 0);
  const std::string text = read_text(out);
  CHECK(text.rfind("subject_id,c1,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);  // header + 6 rows
}
