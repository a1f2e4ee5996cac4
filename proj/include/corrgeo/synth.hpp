#pragma once

#include <cstdint>
#include <vector>

#include "corrgeo/cohort.hpp"
#include "corrgeo/grassmann.hpp"
#include "corrgeo/manifold.hpp"

namespace corrgeo {

/// Parameters of a planted-signal cohort. Everything downstream is a pure
/// function of the spec, with per-subject streams derived from (seed, index)
/// so generation order never matters.
struct SynthSpec {
  int n = 20;
  int m_per_group = 15;
  double effect_size = 1.0;
  /// Pair indices (canonical order) carrying the effect; empty means all.
  std::vector<int> effect_support;
  double noise_scale = 0.5;
  std::uint64_t seed = 42;
};

/// Random point of the correlation manifold: Exp_off of a hollow matrix
/// with independent Gaussian entries of the given standard deviation.
CorrelationMatrix random_correlation(int n, double concentration,
                                     std::uint64_t seed);

/// The unit-norm hollow direction carrying a spec's planted effect.
HollowSymmetricMatrix effect_direction(const SynthSpec& spec);

/// Two groups of subjects: group A is Exp_off(S_i); group B is
/// Exp_off(S_i + Delta) with Delta supported on effect_support and
/// ||Delta||_F = effect_size, i.e. group B is group A translated by a fixed
/// group element. Ids are a000..., b000...
CohortDataset inject_group_effect(const SynthSpec& spec);

/// Cohort with ages planted along the effect direction:
/// age = 50 + slope * <S_i, Delta/||Delta||> + N(0, age_noise_sd),
/// clipped to [18, 90]. The signal coordinate additionally receives a
/// standard normal component scaled by effect_size so that it carries more
/// variance than the nuisance coordinates.
CohortDataset inject_age_trend(const SynthSpec& spec, double slope,
                               double age_noise_sd = 0.0);

struct SubspaceCohort {
  std::vector<GrassmannPoint> group_a;
  std::vector<GrassmannPoint> group_b;
  GrassmannPoint center_a;
  GrassmannPoint center_b;
};

/// Two classes of subspaces whose centers sit at exactly one planted
/// principal angle in a coordinate plane. Samples are geodesic perturbations
/// of Frobenius norm `noise`; when `randomize_basis` is set each sample's
/// basis is right-multiplied by a random rotation.
SubspaceCohort inject_subspace_effect(int n, int k, int m_per_group,
                                      double angle, double noise,
                                      std::uint64_t seed,
                                      bool randomize_basis = true);

/// Correlation cohort with community block structure whose assignment
/// differs between groups (a few nodes swap communities). Backs the
/// subspace preset of the CLI and the full Grassmann pipeline at desk scale.
CohortDataset community_cohort(int n, int communities, int m_per_group,
                               int swapped_nodes, double within_strength,
                               double noise, std::uint64_t seed);

}  // namespace corrgeo
