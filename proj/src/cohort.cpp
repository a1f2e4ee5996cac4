#include "corrgeo/cohort.hpp"

#include <unordered_set>

#include "corrgeo/errors.hpp"

namespace corrgeo {

void CohortDataset::validate() const {
  std::unordered_set<std::string> seen;
  const int n = matrix_dim();
  for (const auto& s : subjects) {
    if (!seen.insert(s.id).second)
      throw DuplicateId("duplicate subject id '" + s.id + "'");
    if (s.matrix.dim() != n)
      throw DimensionMismatch("subject '" + s.id +
                              "' has matrix dimension " +
                              std::to_string(s.matrix.dim()) +
                              ", expected " + std::to_string(n));
  }
}

std::vector<std::uint8_t> CohortDataset::binary_labels() const {
  std::vector<std::uint8_t> out;
  out.reserve(subjects.size());
  for (const auto& s : subjects) {
    if (!s.label)
      throw TooFewSamples("subject '" + s.id + "' has no group label");
    out.push_back(*s.label == GroupLabel::B ? 1 : 0);
  }
  return out;
}

std::vector<double> CohortDataset::ages() const {
  std::vector<double> out;
  out.reserve(subjects.size());
  for (const auto& s : subjects) {
    if (!s.age) throw TooFewSamples("subject '" + s.id + "' has no age");
    out.push_back(*s.age);
  }
  return out;
}

}  // namespace corrgeo
