#include "corrgeo/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "corrgeo/errors.hpp"
#include "corrgeo/random.hpp"

namespace corrgeo {

namespace {

// Deals shuffled stratum members round-robin into k folds, carrying the
// fold cursor across strata so fold sizes stay balanced.
std::vector<std::vector<int>> stratified_partition(
    const std::vector<std::vector<int>>& strata, int k, Rng& rng) {
  std::vector<std::vector<int>> folds(k);
  int cursor = 0;
  for (auto stratum : strata) {
    rng.shuffle(stratum);
    for (const int idx : stratum) {
      folds[cursor % k].push_back(idx);
      ++cursor;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::vector<int>> label_strata(
    const std::vector<std::uint8_t>& labels, const std::vector<int>& subset) {
  std::vector<std::vector<int>> strata(2);
  for (const int i : subset) strata[labels[i] ? 1 : 0].push_back(i);
  return strata;
}

std::vector<std::vector<int>> quintile_strata(const std::vector<double>& ages,
                                              const std::vector<int>& subset) {
  std::vector<int> order = subset;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ages[a] < ages[b]; });
  const int bins = 5;
  const std::size_t m = order.size();
  std::vector<std::vector<int>> strata(bins);
  for (std::size_t r = 0; r < m; ++r)
    strata[r * bins / m].push_back(order[r]);
  return strata;
}

template <class StrataFn>
CVPlan make_plan(int m, int k_outer, int k_inner, std::uint64_t seed,
                 StrataFn&& strata_of) {
  if (m < k_outer)
    throw TooFewSamples("cv plan: fewer samples than outer folds");
  CVPlan plan;
  plan.seed = seed;
  Rng rng(seed);

  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 0);
  plan.outer_test = stratified_partition(strata_of(all), k_outer, rng);

  plan.inner_test.resize(k_outer);
  for (int f = 0; f < k_outer; ++f) {
    std::vector<int> train = plan.outer_train(f, m);
    if (static_cast<int>(train.size()) < k_inner)
      throw TooFewSamples("cv plan: outer training set smaller than k_inner");
    Rng inner_rng = rng.derive(static_cast<std::uint64_t>(f) + 1);
    plan.inner_test[f] =
        stratified_partition(strata_of(train), k_inner, inner_rng);
  }
  return plan;
}

}  // namespace

std::vector<int> CVPlan::outer_train(int fold, int m) const {
  std::vector<bool> is_test(m, false);
  for (const int i : outer_test.at(fold)) is_test[i] = true;
  std::vector<int> train;
  train.reserve(m - outer_test.at(fold).size());
  for (int i = 0; i < m; ++i)
    if (!is_test[i]) train.push_back(i);
  return train;
}

CVPlan make_classification_cv_plan(const std::vector<std::uint8_t>& labels,
                                   int k_outer, int k_inner,
                                   std::uint64_t seed) {
  CVPlan plan = make_plan(
      static_cast<int>(labels.size()), k_outer, k_inner, seed,
      [&](const std::vector<int>& subset) {
        return label_strata(labels, subset);
      });
  plan.stratified = true;
  return plan;
}

CVPlan make_regression_cv_plan(const std::vector<double>& ages, int k_outer,
                               int k_inner, std::uint64_t seed) {
  CVPlan plan = make_plan(
      static_cast<int>(ages.size()), k_outer, k_inner, seed,
      [&](const std::vector<int>& subset) {
        return quintile_strata(ages, subset);
      });
  plan.stratified = true;
  return plan;
}

void validate_plan(const CVPlan& plan, int m) {
  std::set<int> seen;
  std::size_t total = 0;
  for (const auto& fold : plan.outer_test) {
    total += fold.size();
    for (const int i : fold) {
      if (i < 0 || i >= m)
        throw InvalidInput("cv plan: index out of range");
      if (!seen.insert(i).second)
        throw InvalidInput("cv plan: outer folds overlap");
    }
  }
  if (total != static_cast<std::size_t>(m))
    throw InvalidInput("cv plan: outer folds are not exhaustive");
  if (plan.inner_test.size() != plan.outer_test.size())
    throw InvalidInput("cv plan: inner folds missing for some outer fold");

  for (int f = 0; f < plan.n_outer(); ++f) {
    const std::vector<int> train = plan.outer_train(f, m);
    const std::set<int> train_set(train.begin(), train.end());
    std::set<int> inner_seen;
    std::size_t inner_total = 0;
    for (const auto& fold : plan.inner_test[f]) {
      inner_total += fold.size();
      for (const int i : fold) {
        if (!train_set.count(i))
          throw InvalidInput(
              "cv plan: inner fold index leaks outside outer training set");
        if (!inner_seen.insert(i).second)
          throw InvalidInput("cv plan: inner folds overlap");
      }
    }
    if (inner_total != train.size())
      throw InvalidInput("cv plan: inner folds are not exhaustive");
  }
}

void require_disjoint(const std::vector<int>& train,
                      const std::vector<int>& apply_to) {
  const std::set<int> train_set(train.begin(), train.end());
  for (const int i : apply_to)
    if (train_set.count(i))
      throw InvalidInput(
          "leakage guard: train and evaluation indices overlap");
}

void CVReport::aggregate() {
  mean.clear();
  sd.clear();
  if (folds.empty()) return;
  for (const auto& [key, value] : folds.front().values) {
    (void)value;
    double acc = 0.0;
    for (const auto& f : folds) acc += f.values.at(key);
    const double mu = acc / folds.size();
    double var = 0.0;
    for (const auto& f : folds) {
      const double d = f.values.at(key) - mu;
      var += d * d;
    }
    mean[key] = mu;
    sd[key] = std::sqrt(var / folds.size());
  }
}

}  // namespace corrgeo
