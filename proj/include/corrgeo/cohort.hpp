#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corrgeo/correlation.hpp"
#include "corrgeo/group_label.hpp"

namespace corrgeo {

struct Subject {
  std::string id;
  CorrelationMatrix matrix;
  std::optional<GroupLabel> label;
  std::optional<double> age;
};

/// Labeled collection of subject matrices; the unit of every pipeline.
/// Ids are unique and all matrices share one dimension.
struct CohortDataset {
  std::vector<Subject> subjects;

  int size() const noexcept { return static_cast<int>(subjects.size()); }
  int matrix_dim() const {
    return subjects.empty() ? 0 : subjects.front().matrix.dim();
  }

  /// Throws when an id repeats or dimensions are mixed.
  void validate() const;

  /// Labels as 0/1 (A=0, B=1); throws TooFewSamples if any label is missing.
  std::vector<std::uint8_t> binary_labels() const;

  /// Ages in subject order; throws TooFewSamples if any age is missing.
  std::vector<double> ages() const;
};

}  // namespace corrgeo
