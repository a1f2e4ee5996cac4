#include "corrgeo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "corrgeo/errors.hpp"
#include "corrgeo/random.hpp"
#include "corrgeo/triangular.hpp"

namespace corrgeo {

namespace {

Eigen::VectorXd random_packed_hollow(int n, double sd, Rng& rng) {
  Eigen::VectorXd v(pair_count(n));
  for (int i = 0; i < v.size(); ++i) v[i] = sd * rng.normal();
  return v;
}

std::string indexed_id(char prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%03d", prefix, i);
  return buf;
}

}  // namespace

CorrelationMatrix random_correlation(int n, double concentration,
                                     std::uint64_t seed) {
  if (n < 2) throw InvalidInput("random_correlation: n must be >= 2");
  if (concentration < 0.0)
    throw InvalidInput("random_correlation: concentration must be >= 0");
  Rng rng(seed);
  const Eigen::VectorXd v = random_packed_hollow(n, concentration, rng);
  return exp_off(HollowSymmetricMatrix::from_packed(n, v));
}

HollowSymmetricMatrix effect_direction(const SynthSpec& spec) {
  const int p = pair_count(spec.n);
  std::vector<int> support = spec.effect_support;
  if (support.empty()) {
    support.resize(p);
    for (int i = 0; i < p; ++i) support[i] = i;
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
  for (const int idx : support) {
    if (idx < 0 || idx >= p)
      throw InvalidInput("effect_direction: support index out of range");
    v[idx] = 1.0;
  }
  // Unit Frobenius norm over the full matrix (both triangles).
  v /= std::sqrt(2.0 * static_cast<double>(support.size()));
  return HollowSymmetricMatrix::from_packed(spec.n, v);
}

CohortDataset inject_group_effect(const SynthSpec& spec) {
  if (spec.effect_size < 0.0)
    throw InvalidInput("inject_group_effect: effect_size must be >= 0");
  const HollowSymmetricMatrix delta =
      effect_direction(spec) * spec.effect_size;
  const Rng base(spec.seed);

  CohortDataset cohort;
  for (int g = 0; g < 2; ++g) {
    for (int j = 0; j < spec.m_per_group; ++j) {
      Rng rng = base.derive(
          static_cast<std::uint64_t>(g) * spec.m_per_group + j);
      const HollowSymmetricMatrix noise = HollowSymmetricMatrix::from_packed(
          spec.n, random_packed_hollow(spec.n, spec.noise_scale, rng));
      const HollowSymmetricMatrix s = g == 0 ? noise : noise + delta;
      cohort.subjects.push_back({indexed_id(g == 0 ? 'a' : 'b', j),
                                 exp_off(s),
                                 g == 0 ? GroupLabel::A : GroupLabel::B,
                                 std::nullopt});
    }
  }
  return cohort;
}

CohortDataset inject_age_trend(const SynthSpec& spec, double slope,
                               double age_noise_sd) {
  const HollowSymmetricMatrix direction = effect_direction(spec);
  const Eigen::VectorXd u = direction.packed_upper();
  const Rng base(spec.seed);
  const int m = 2 * spec.m_per_group;

  CohortDataset cohort;
  for (int j = 0; j < m; ++j) {
    Rng rng = base.derive(static_cast<std::uint64_t>(j));
    Eigen::VectorXd v = random_packed_hollow(spec.n, spec.noise_scale, rng);
    const double signal = spec.effect_size * rng.normal();
    v += signal * u;
    const HollowSymmetricMatrix s =
        HollowSymmetricMatrix::from_packed(spec.n, v);
    // Frobenius inner product over the full hollow matrices counts both
    // triangles, hence the factor 2 on packed coordinates.
    const double coord = 2.0 * v.dot(u);
    double age = 50.0 + slope * coord;
    if (age_noise_sd > 0.0) age += age_noise_sd * rng.normal();
    age = std::clamp(age, 18.0, 90.0);
    cohort.subjects.push_back(
        {indexed_id('s', j), exp_off(s), std::nullopt, age});
  }
  return cohort;
}

SubspaceCohort inject_subspace_effect(int n, int k, int m_per_group,
                                      double angle, double noise,
                                      std::uint64_t seed,
                                      bool randomize_basis) {
  if (k < 1 || k >= n)
    throw InvalidInput("inject_subspace_effect: need 1 <= k < n");
  if (!(angle >= 0.0 && angle < 1.5707963267948966))
    throw InvalidInput("inject_subspace_effect: angle must be in [0, pi/2)");
  if (noise < 0.0)
    throw InvalidInput("inject_subspace_effect: noise must be >= 0");

  Eigen::MatrixXd basis_a = Eigen::MatrixXd::Zero(n, k);
  for (int j = 0; j < k; ++j) basis_a(j, j) = 1.0;
  Eigen::MatrixXd basis_b = basis_a;
  basis_b(0, 0) = std::cos(angle);
  basis_b(k, 0) = std::sin(angle);

  const GrassmannPoint center_a(basis_a);
  const GrassmannPoint center_b(basis_b);
  const Rng base(seed);

  const auto sample = [&](const GrassmannPoint& center, int index) {
    Rng rng = base.derive(static_cast<std::uint64_t>(index));
    Eigen::MatrixXd t(n, k);
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < n; ++r) t(r, c) = rng.normal();
    t -= center.basis() * (center.basis().transpose() * t);
    GrassmannPoint point = noise > 0.0
                               ? grassmann_exp(center, noise * t / t.norm())
                               : center;
    if (randomize_basis) {
      Eigen::MatrixXd g(k, k);
      for (int c = 0; c < k; ++c)
        for (int r = 0; r < k; ++r) g(r, c) = rng.normal();
      const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
      const Eigen::MatrixXd q = qr.householderQ();
      point = GrassmannPoint(point.basis() * q);
    }
    return point;
  };

  SubspaceCohort cohort{{}, {}, center_a, center_b};
  for (int j = 0; j < m_per_group; ++j)
    cohort.group_a.push_back(sample(center_a, j));
  for (int j = 0; j < m_per_group; ++j)
    cohort.group_b.push_back(sample(center_b, m_per_group + j));
  return cohort;
}

CohortDataset community_cohort(int n, int communities, int m_per_group,
                               int swapped_nodes, double within_strength,
                               double noise, std::uint64_t seed) {
  if (communities < 2 || communities > n)
    throw InvalidInput("community_cohort: need 2 <= communities <= n");
  if (swapped_nodes < 0 || swapped_nodes > n)
    throw InvalidInput("community_cohort: bad swapped_nodes");

  std::vector<int> assignment_a(n);
  for (int v = 0; v < n; ++v)
    assignment_a[v] = static_cast<int>(
        static_cast<long>(v) * communities / n);
  std::vector<int> assignment_b = assignment_a;
  for (int s = 0; s < swapped_nodes; ++s) {
    const int v = swapped_nodes > 0 ? s * n / swapped_nodes : 0;
    assignment_b[v] = (assignment_b[v] + 1) % communities;
  }

  const Rng base(seed);
  CohortDataset cohort;
  for (int g = 0; g < 2; ++g) {
    const std::vector<int>& asgn = g == 0 ? assignment_a : assignment_b;
    for (int j = 0; j < m_per_group; ++j) {
      Rng rng = base.derive(
          static_cast<std::uint64_t>(g) * m_per_group + j);
      Eigen::VectorXd v(pair_count(n));
      int p = 0;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          const double block = asgn[a] == asgn[b] ? within_strength : 0.0;
          v[p++] = block + noise * rng.normal();
        }
      cohort.subjects.push_back(
          {indexed_id(g == 0 ? 'a' : 'b', j),
           exp_off(HollowSymmetricMatrix::from_packed(n, v)),
           g == 0 ? GroupLabel::A : GroupLabel::B, std::nullopt});
    }
  }
  return cohort;
}

}  // namespace corrgeo
