#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrgeo/cohort.hpp"
#include "corrgeo/correlation.hpp"

namespace corrgeo {

struct LoadedMatrix {
  CorrelationMatrix matrix;
  double shrink_gamma = 0.0;
  std::vector<std::string> warnings;
};

/// Reads an n x n headerless CSV of decimal values as a correlation matrix.
/// Asymmetry up to 1e-8 is symmetrized with a warning; shrinkage events are
/// reported in warnings. Throws ParseError (naming the row/column),
/// MissingFile, DiagonalNotUnit or NotPositiveDefinite.
LoadedMatrix read_matrix(const std::filesystem::path& path,
                         bool shrink_allowed = false);

/// Writes a matrix as CSV with 17 significant digits per value.
void write_matrix_csv(const Eigen::MatrixXd& matrix,
                      const std::filesystem::path& path);

struct LoadedCohort {
  CohortDataset cohort;
  std::vector<std::string> warnings;
};

/// Reads a cohort manifest: header `subject_id,matrix_path,label,age`, one
/// row per subject, matrix paths resolved relative to the manifest. Label
/// must be A, B or empty; age decimal or empty.
LoadedCohort read_manifest(const std::filesystem::path& path,
                           bool shrink_allowed = false);

/// Writes a cohort to `directory`: one CSV per subject plus manifest.csv.
void write_cohort(const CohortDataset& cohort,
                  const std::filesystem::path& directory);

/// Serializes a JSON document with every number rendered at 17 significant
/// digits, so written reports are lossless and byte-stable.
std::string dump_json_17(const nlohmann::json& doc);

}  // namespace corrgeo
