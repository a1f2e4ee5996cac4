#include "corrgeo/manifold.hpp"

#include <doctest.h>

#include <cmath>

#include "corrgeo/errors.hpp"
#include "corrgeo/linalg.hpp"
#include "corrgeo/triangular.hpp"
#include "test_support.hpp"

using namespace corrgeo;

namespace {

// Stored 3x3 pair witnessing that the Cholesky-chart distances depend on the
// node ordering (swap of nodes 0 and 1), while the Off-log distance does not.
Eigen::MatrixXd witness_c1() {
  Eigen::MatrixXd C(3, 3);
  C << 1, -0.12549257634331795, 0.81375835848239464,
      -0.12549257634331795, 1, -0.46346330726394847,
      0.81375835848239464, -0.46346330726394847, 1;
  return C;
}

Eigen::MatrixXd witness_c2() {
  Eigen::MatrixXd C(3, 3);
  C << 1, 0.81490512191784803, 0.73988769237957597,
      0.81490512191784803, 1, 0.80332851351715862,
      0.73988769237957597, 0.80332851351715862, 1;
  return C;
}

Eigen::MatrixXd swap01_permutation() {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(3, 3);
  P(1, 0) = P(0, 1) = P(2, 2) = 1.0;
  return P;
}

CorrelationMatrix random_offlog_point(int n, Rng& rng, double scale) {
  Eigen::VectorXd v(pair_count(n));
  for (int i = 0; i < v.size(); ++i) v[i] = scale * rng.normal();
  return exp_off(HollowSymmetricMatrix::from_packed(n, v));
}

}  // namespace

TEST_CASE("log_off closed forms") {
  const CorrelationMatrix I(Eigen::MatrixXd::Identity(4, 4));
  CHECK(log_off(I).matrix().cwiseAbs().maxCoeff() <= 1e-14);

  CHECK(log_off(testing::corr2(0.5)).matrix()(0, 1) ==
        doctest::Approx(std::atanh(0.5)).epsilon(1e-12));
  CHECK(log_off(testing::corr2(-0.3)).matrix()(0, 1) ==
        doctest::Approx(std::atanh(-0.3)).epsilon(1e-12));
}

TEST_CASE("solve_diag_correction closed form and residual") {
  const auto zero = HollowSymmetricMatrix::zero(3);
  CHECK(solve_diag_correction(zero).cwiseAbs().maxCoeff() == 0.0);

  const double s = 0.549306;
  Eigen::VectorXd v(1);
  v << s;
  const auto S = HollowSymmetricMatrix::from_packed(2, v);
  const Eigen::VectorXd d = solve_diag_correction(S);
  CHECK(d[0] == doctest::Approx(-std::log(std::cosh(s))).epsilon(1e-10));
  CHECK(d[1] == doctest::Approx(-std::log(std::cosh(s))).epsilon(1e-10));

  Rng rng(17);
  Eigen::VectorXd w(pair_count(10));
  for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1.0, 1.0);
  const auto S10 = HollowSymmetricMatrix::from_packed(10, w);
  const Eigen::VectorXd d10 = solve_diag_correction(S10);
  Eigen::MatrixXd arg = S10.matrix();
  arg.diagonal() = d10;
  const Eigen::VectorXd diag = linalg::sym_expm(arg).diagonal();
  CHECK((diag.array() - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("exp_off closed form and round trips") {
  CHECK((exp_off(HollowSymmetricMatrix::zero(5)).matrix() -
         Eigen::MatrixXd::Identity(5, 5))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  Eigen::VectorXd v(1);
  v << 0.549306;
  CHECK(exp_off(HollowSymmetricMatrix::from_packed(2, v))(0, 1) ==
        doctest::Approx(std::tanh(0.549306)).epsilon(1e-10));

  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const CorrelationMatrix C = testing::random_correlation_spd(20, rng);
    const CorrelationMatrix back = exp_off(log_off(C));
    CHECK((back.matrix() - C.matrix()).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("exp_off output is a valid correlation matrix for large inputs") {
  Rng rng(31);
  for (const int n : {5, 20, 50}) {
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd v(pair_count(n));
      for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-2.0, 2.0);
      const auto S = HollowSymmetricMatrix::from_packed(n, v);
      const Eigen::VectorXd d = solve_diag_correction(S);
      Eigen::MatrixXd arg = S.matrix();
      arg.diagonal() = d;
      const Eigen::MatrixXd raw = linalg::sym_expm(arg);
      CHECK((raw.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-10);
      CHECK(linalg::sym_eig(exp_off(S).matrix()).eigenvalues[0] > 0.0);
    }
  }
}

TEST_CASE("embed closed forms per metric") {
  const CorrelationMatrix I(Eigen::MatrixXd::Identity(4, 4));
  for (const Metric m :
       {Metric::OffLog, Metric::ECM, Metric::LEC, Metric::Euclidean})
    CHECK(embed(I, m).values.cwiseAbs().maxCoeff() <= 1e-14);

  const CorrelationMatrix C = testing::corr2(0.6);
  CHECK(embed(C, Metric::ECM).values[0] ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(embed(C, Metric::LEC).values[0] ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(embed(C, Metric::Euclidean).values[0] == 0.6);
  CHECK(embed(C, Metric::OffLog).values[0] ==
        doctest::Approx(std::atanh(0.6)).epsilon(1e-12));
}

TEST_CASE("unembed inverts embed on random matrices for every metric") {
  FlatCoords zero{Metric::ECM, 3, Eigen::VectorXd::Zero(3)};
  CHECK((unembed(zero).matrix() - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  Eigen::VectorXd ecm_val(1);
  ecm_val << 0.75;
  CHECK(unembed({Metric::ECM, 2, ecm_val})(0, 1) ==
        doctest::Approx(0.6).epsilon(1e-12));

  Rng rng(41);
  for (const Metric m :
       {Metric::OffLog, Metric::ECM, Metric::LEC, Metric::Euclidean}) {
    for (int trial = 0; trial < 5; ++trial) {
      const CorrelationMatrix C = testing::random_correlation_spd(30, rng);
      const CorrelationMatrix back = unembed(embed(C, m));
      CHECK((back.matrix() - C.matrix()).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("unembed flags indefinite Euclidean coordinates") {
  // Coordinates of a symmetric unit-diagonal matrix that is not PD.
  Eigen::VectorXd bad(3);
  bad << 0.9, 0.9, -0.9;
  CHECK_THROWS_AS(unembed({Metric::Euclidean, 3, bad}), NotPositiveDefinite);
}

TEST_CASE("dist closed forms") {
  const CorrelationMatrix A = testing::corr2(0.6);
  const CorrelationMatrix B = testing::corr2(0.2);
  for (const Metric m :
       {Metric::OffLog, Metric::ECM, Metric::LEC, Metric::Euclidean})
    CHECK(dist(A, A, m) == 0.0);

  const double expected =
      std::sqrt(2.0) * std::abs(std::atanh(0.6) - std::atanh(0.2));
  CHECK(dist(A, B, Metric::OffLog) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(dist(A, B, Metric::OffLog) ==
        doctest::Approx(0.693551).epsilon(1e-6));

  const CorrelationMatrix Z = testing::corr2(0.0);
  CHECK(dist(A, Z, Metric::ECM) == doctest::Approx(0.75).epsilon(1e-12));

  // Euclidean distance equals the Frobenius norm of the difference.
  Rng rng(43);
  const CorrelationMatrix C1 = testing::random_correlation_spd(6, rng);
  const CorrelationMatrix C2 = testing::random_correlation_spd(6, rng);
  CHECK(dist(C1, C2, Metric::Euclidean) ==
        doctest::Approx((C1.matrix() - C2.matrix()).norm()).epsilon(1e-12));
}

TEST_CASE("metric axioms on random triples") {
  Rng rng(47);
  for (const Metric m :
       {Metric::OffLog, Metric::ECM, Metric::LEC, Metric::Euclidean}) {
    for (int trial = 0; trial < 20; ++trial) {
      const CorrelationMatrix A = testing::random_correlation_spd(8, rng);
      const CorrelationMatrix B = testing::random_correlation_spd(8, rng);
      const CorrelationMatrix C = testing::random_correlation_spd(8, rng);
      CHECK(dist(A, B, m) == dist(B, A, m));
      CHECK(dist(A, C, m) <= dist(A, B, m) + dist(B, C, m) + 1e-10);
      CHECK(dist(A, B, m) >= 0.0);
    }
  }
}

TEST_CASE("geodesic endpoints and midpoint") {
  const CorrelationMatrix A = testing::corr2(0.6);
  const CorrelationMatrix B = testing::corr2(0.2);
  for (const Metric m : {Metric::OffLog, Metric::ECM, Metric::LEC}) {
    CHECK((geodesic(A, B, 0.0, m).matrix() - A.matrix())
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
    CHECK((geodesic(A, B, 1.0, m).matrix() - B.matrix())
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
  }
  const double rho_mid =
      std::tanh(0.5 * (std::atanh(0.6) + std::atanh(0.2)));
  CHECK(rho_mid == doctest::Approx(0.4202041).epsilon(1e-6));
  CHECK(geodesic(A, B, 0.5, Metric::OffLog)(0, 1) ==
        doctest::Approx(rho_mid).epsilon(1e-10));
  CHECK_THROWS_AS(geodesic(A, B, 0.5, Metric::Euclidean), InvalidInput);
}

TEST_CASE("frechet_mean closed forms and optimality") {
  const CorrelationMatrix A = testing::corr2(0.6);
  const CorrelationMatrix B = testing::corr2(0.2);
  CHECK((frechet_mean({A}, Metric::OffLog).matrix() - A.matrix())
            .cwiseAbs()
            .maxCoeff() <= 1e-9);

  const CorrelationMatrix mean = frechet_mean({A, B}, Metric::OffLog);
  CHECK(mean(0, 1) == doctest::Approx(std::tanh(
                          0.5 * (std::atanh(0.6) + std::atanh(0.2))))
                          .epsilon(1e-10));

  // Mean of a matrix and its group inverse is the identity.
  Rng rng(53);
  const CorrelationMatrix C = random_offlog_point(6, rng, 0.4);
  const CorrelationMatrix m2 =
      frechet_mean({C, star_inverse(C)}, Metric::OffLog);
  CHECK((m2.matrix() - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <=
        1e-8);

  CHECK_THROWS_AS(frechet_mean({}, Metric::OffLog), EmptyInput);
  CHECK_THROWS_AS(frechet_mean({A, B}, Metric::Euclidean), InvalidInput);

  // Perturbation oracle: no nearby point improves the sum of squared
  // distances.
  for (const Metric m : {Metric::OffLog, Metric::ECM, Metric::LEC}) {
    std::vector<CorrelationMatrix> sample;
    for (int i = 0; i < 10; ++i)
      sample.push_back(testing::random_correlation_spd(15, rng));
    const CorrelationMatrix mu = frechet_mean(sample, m);
    double best = 0.0;
    for (const auto& s : sample) {
      const double d = dist(mu, s, m);
      best += d * d;
    }
    const FlatCoords mu_coords = embed(mu, m);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd delta(mu_coords.values.size());
      for (int i = 0; i < delta.size(); ++i) delta[i] = rng.normal();
      delta *= 0.1 * rng.uniform() / (std::sqrt(2.0) * delta.norm());
      const CorrelationMatrix perturbed =
          unembed({m, mu_coords.n, mu_coords.values + delta});
      double sum = 0.0;
      for (const auto& s : sample) {
        const double d = dist(perturbed, s, m);
        sum += d * d;
      }
      CHECK(sum >= best - 1e-9);
    }
  }
}

TEST_CASE("euclidean_mean is the elementwise average") {
  const CorrelationMatrix A = testing::corr2(0.6);
  const CorrelationMatrix B = testing::corr2(0.2);
  CHECK(euclidean_mean({A, B})(0, 1) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("star product and inverse") {
  Rng rng(59);
  const CorrelationMatrix C = random_offlog_point(7, rng, 0.5);
  const CorrelationMatrix I(Eigen::MatrixXd::Identity(7, 7));
  CHECK((star_product(C, I).matrix() - C.matrix()).cwiseAbs().maxCoeff() <=
        1e-9);
  CHECK((star_product(C, star_inverse(C)).matrix() - I.matrix())
            .cwiseAbs()
            .maxCoeff() <= 1e-8);
  CHECK((star_inverse(star_inverse(C)).matrix() - C.matrix())
            .cwiseAbs()
            .maxCoeff() <= 1e-10);

  // 2x2: ratios compose by the tanh addition law.
  const CorrelationMatrix H = testing::corr2(0.5);
  CHECK(star_product(H, H)(0, 1) == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(star_inverse(H)(0, 1) == doctest::Approx(-0.5).epsilon(1e-10));

  // Commutativity and associativity.
  for (int trial = 0; trial < 10; ++trial) {
    const CorrelationMatrix X = random_offlog_point(5, rng, 0.5);
    const CorrelationMatrix Y = random_offlog_point(5, rng, 0.5);
    const CorrelationMatrix Z = random_offlog_point(5, rng, 0.5);
    CHECK((star_product(X, Y).matrix() - star_product(Y, X).matrix())
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
    CHECK((star_product(star_product(X, Y), Z).matrix() -
           star_product(X, star_product(Y, Z)).matrix())
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
  }
}

TEST_CASE("tangent_at_identity equals embed") {
  Rng rng(61);
  CHECK(tangent_at_identity(testing::corr2(0.5), Metric::OffLog).values[0] ==
        doctest::Approx(std::atanh(0.5)).epsilon(1e-12));
  for (int trial = 0; trial < 100; ++trial) {
    const CorrelationMatrix C = testing::random_correlation_spd(5, rng);
    for (const Metric m :
         {Metric::OffLog, Metric::ECM, Metric::LEC, Metric::Euclidean}) {
      CHECK((tangent_at_identity(C, m).values - embed(C, m).values)
                .cwiseAbs()
                .maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("off-log distance is permutation invariant") {
  Rng rng(67);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 20;
    const CorrelationMatrix C = testing::random_correlation_spd(n, rng);
    const CorrelationMatrix D = testing::random_correlation_spd(n, rng);
    const Eigen::MatrixXd P = testing::random_permutation(n, rng);
    const CorrelationMatrix PC =
        CorrelationMatrix::unchecked(P * C.matrix() * P.transpose());
    const CorrelationMatrix PD =
        CorrelationMatrix::unchecked(P * D.matrix() * P.transpose());

    const Eigen::MatrixXd lhs = log_off(PC).matrix();
    const Eigen::MatrixXd rhs = P * log_off(C).matrix() * P.transpose();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);

    CHECK(std::abs(dist(PC, PD, Metric::OffLog) -
                   dist(C, D, Metric::OffLog)) <= 1e-10);
  }
}

TEST_CASE("cholesky-chart distances are not permutation invariant") {
  const CorrelationMatrix C1(witness_c1());
  const CorrelationMatrix C2(witness_c2());
  const Eigen::MatrixXd P = swap01_permutation();
  const CorrelationMatrix PC1(P * witness_c1() * P.transpose());
  const CorrelationMatrix PC2(P * witness_c2() * P.transpose());

  CHECK(std::abs(dist(PC1, PC2, Metric::ECM) - dist(C1, C2, Metric::ECM)) >
        1e-3);
  CHECK(std::abs(dist(PC1, PC2, Metric::LEC) - dist(C1, C2, Metric::LEC)) >
        1e-3);
  CHECK(std::abs(dist(PC1, PC2, Metric::OffLog) -
                 dist(C1, C2, Metric::OffLog)) <= 1e-10);
}

TEST_CASE("off-log distance is translation invariant") {
  Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const CorrelationMatrix A = random_offlog_point(10, rng, 0.5);
    const CorrelationMatrix C1 = random_offlog_point(10, rng, 0.5);
    const CorrelationMatrix C2 = random_offlog_point(10, rng, 0.5);
    const double base = dist(C1, C2, Metric::OffLog);
    const double translated =
        dist(star_product(A, C1), star_product(A, C2), Metric::OffLog);
    CHECK(std::abs(translated - base) <= 1e-10);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const CorrelationMatrix A = testing::corr2(0.3);
  const CorrelationMatrix I3(Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(dist(A, I3, Metric::OffLog), DimensionMismatch);
  CHECK_THROWS_AS(star_product(A, I3), DimensionMismatch);
  CHECK_THROWS_AS(geodesic(A, I3, 0.5, Metric::OffLog), DimensionMismatch);
}
