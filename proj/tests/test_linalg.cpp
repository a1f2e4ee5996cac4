#include "corrgeo/linalg.hpp"

#include <doctest.h>

#include <cmath>

#include "corrgeo/errors.hpp"
#include "test_support.hpp"

using namespace corrgeo;
using namespace corrgeo::linalg;

TEST_CASE("sym_eig identity and diagonal cases") {
  const EigResult id = sym_eig(Eigen::MatrixXd::Identity(2, 2));
  CHECK(id.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(id.eigenvalues[1] == doctest::Approx(1.0));

  Eigen::Vector3d d(3.0, 1.0, 2.0);
  const EigResult diag = sym_eig(d.asDiagonal().toDenseMatrix());
  CHECK(diag.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(diag.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(diag.eigenvalues[2] == doctest::Approx(3.0));
  // Permutation eigenvectors: one +-1 entry per column.
  for (int c = 0; c < 3; ++c)
    CHECK(diag.eigenvectors.col(c).cwiseAbs().maxCoeff() ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sym_eig closed-form 2x2 and reconstruction") {
  const double rho = 0.5;
  Eigen::MatrixXd A(2, 2);
  A << 1.0, rho, rho, 1.0;
  const EigResult eig = sym_eig(A);
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0 - rho).epsilon(1e-12));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0 + rho).epsilon(1e-12));

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.integer(40));
    const Eigen::MatrixXd S = testing::random_symmetric(n, rng);
    const EigResult e = sym_eig(S);
    const Eigen::MatrixXd rec = e.eigenvectors *
                                e.eigenvalues.asDiagonal() *
                                e.eigenvectors.transpose();
    CHECK((rec - S).norm() <= 1e-10 * std::max(1.0, S.norm()));
    const Eigen::MatrixXd vtv =
        e.eigenvectors.transpose() * e.eigenvectors;
    CHECK((vtv - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <=
          1e-10);
    for (int i = 1; i < n; ++i)
      CHECK(e.eigenvalues[i] >= e.eigenvalues[i - 1]);
  }
}

TEST_CASE("sym_eig rejects non-finite input") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 1) = A(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sym_eig(A), InvalidInput);
}

TEST_CASE("sym_logm closed forms") {
  CHECK(sym_logm(Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <=
        1e-14);

  const double rho = 0.5;
  Eigen::MatrixXd A(2, 2);
  A << 1.0, rho, rho, 1.0;
  const Eigen::MatrixXd L = sym_logm(A);
  const double a = 0.5 * std::log(1.0 - rho * rho);
  const double b = std::atanh(rho);
  CHECK(L(0, 0) == doctest::Approx(a).epsilon(1e-12));
  CHECK(L(1, 1) == doctest::Approx(a).epsilon(1e-12));
  CHECK(L(0, 1) == doctest::Approx(b).epsilon(1e-12));

  Eigen::Vector2d d(std::exp(1.0), std::exp(2.0));
  const Eigen::MatrixXd Ld = sym_logm(d.asDiagonal().toDenseMatrix());
  CHECK(Ld(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Ld(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(Ld(0, 1)) <= 1e-14);
}

TEST_CASE("sym_logm rejects indefinite input") {
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 2.0, 2.0, 1.0;  // eigenvalues -1, 3
  CHECK_THROWS_AS(sym_logm(A), NotPositiveDefinite);
  CHECK_THROWS_AS(sym_logm(Eigen::MatrixXd::Zero(3, 3)), NotPositiveDefinite);
}

TEST_CASE("sym_expm closed forms") {
  CHECK((sym_expm(Eigen::MatrixXd::Zero(3, 3)) -
         Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  Eigen::Vector2d d(1.0, 2.0);
  const Eigen::MatrixXd E = sym_expm(d.asDiagonal().toDenseMatrix());
  CHECK(E(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(E(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));

  const double s = 0.5;
  Eigen::MatrixXd S(2, 2);
  S << 0.0, s, s, 0.0;
  const Eigen::MatrixXd Es = sym_expm(S);
  CHECK(Es(0, 0) == doctest::Approx(std::cosh(s)).epsilon(1e-12));
  CHECK(Es(0, 1) == doctest::Approx(std::sinh(s)).epsilon(1e-12));
}

TEST_CASE("sym_expm / sym_logm round trip on random SPD") {
  Rng rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng.integer(49));
    const Eigen::MatrixXd A = testing::random_spd(n, rng, 0.05);
    const Eigen::MatrixXd back = sym_expm(sym_logm(A));
    CHECK((back - A).norm() <= 1e-8 * A.norm());

    const Eigen::MatrixXd S = testing::random_symmetric(n, rng, 0.7);
    const Eigen::MatrixXd back2 = sym_logm(sym_expm(S));
    CHECK((back2 - S).norm() <= 1e-8 * std::max(1.0, S.norm()));
  }
}

TEST_CASE("cholesky hand-computed examples") {
  CHECK((cholesky_lower(Eigen::MatrixXd::Identity(2, 2)) -
         Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-15);

  Eigen::MatrixXd A(2, 2);
  A << 1.0, 0.6, 0.6, 1.0;
  const Eigen::MatrixXd L = cholesky_lower(A);
  CHECK(L(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(L(1, 0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(L(1, 1) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::abs(L(0, 1)) == 0.0);

  Eigen::MatrixXd B(2, 2);
  B << 4.0, 2.0, 2.0, 2.0;
  const Eigen::MatrixXd LB = cholesky_lower(B);
  CHECK(LB(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(LB(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(LB(1, 1) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(cholesky_lower(bad), NotPositiveDefinite);
}

TEST_CASE("cholesky recovers the factor of L L^T") {
  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.integer(20));
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) L(i, j) = rng.normal();
      L(i, i) = 0.5 + rng.uniform();
      L.row(i) /= L.row(i).norm();  // unit-norm rows keep conditioning mild
    }
    const Eigen::MatrixXd back = cholesky_lower(L * L.transpose());
    CHECK((back - L).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("tri_unit_log series examples") {
  CHECK(tri_unit_log(Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);

  // 2x2: N^2 = 0 so log(I+N) = N.
  Eigen::MatrixXd L2 = Eigen::MatrixXd::Identity(2, 2);
  L2(1, 0) = 0.7;
  CHECK(tri_unit_log(L2)(1, 0) == doctest::Approx(0.7).epsilon(1e-15));

  // 3x3 with subdiagonal (a, b) and zero corner: corner of log is -ab/2.
  const double a = 0.3, b = -1.1;
  Eigen::MatrixXd L3 = Eigen::MatrixXd::Identity(3, 3);
  L3(1, 0) = a;
  L3(2, 1) = b;
  const Eigen::MatrixXd S3 = tri_unit_log(L3);
  CHECK(S3(1, 0) == doctest::Approx(a).epsilon(1e-14));
  CHECK(S3(2, 1) == doctest::Approx(b).epsilon(1e-14));
  CHECK(S3(2, 0) == doctest::Approx(-a * b / 2.0).epsilon(1e-14));
  CHECK(S3.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tri_unit_exp series examples and inversion") {
  CHECK((tri_unit_exp(Eigen::MatrixXd::Zero(3, 3)) -
         Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  const double a = 0.4, b = 0.9;
  Eigen::MatrixXd N3 = Eigen::MatrixXd::Zero(3, 3);
  N3(1, 0) = a;
  N3(2, 1) = b;
  const Eigen::MatrixXd E3 = tri_unit_exp(N3);
  CHECK(E3(2, 0) == doctest::Approx(a * b / 2.0).epsilon(1e-14));

  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.integer(15));
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) N(i, j) = rng.normal();
    const Eigen::MatrixXd back = tri_unit_log(tri_unit_exp(N));
    CHECK((back - N).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, N.norm()));
  }
}

TEST_CASE("svd_thin basics") {
  const ThinSvd id = svd_thin(Eigen::MatrixXd::Identity(4, 3));
  for (int i = 0; i < 3; ++i)
    CHECK(id.singular_values[i] == doctest::Approx(1.0).epsilon(1e-14));

  const ThinSvd zero = svd_thin(Eigen::MatrixXd::Zero(5, 2));
  CHECK(zero.singular_values.cwiseAbs().maxCoeff() == 0.0);

  const double alpha = 0.77;
  Eigen::MatrixXd col(2, 1);
  col << std::cos(alpha), std::sin(alpha);
  CHECK(svd_thin(col).singular_values[0] ==
        doctest::Approx(1.0).epsilon(1e-14));

  Rng rng(71);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 3 + static_cast<int>(rng.integer(20));
    const int k = 1 + static_cast<int>(rng.integer(n));
    Eigen::MatrixXd M(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) M(i, j) = rng.normal();
    const ThinSvd svd = svd_thin(M);
    const Eigen::MatrixXd rec =
        svd.U * svd.singular_values.asDiagonal() * svd.V.transpose();
    CHECK((rec - M).norm() <= 1e-10 * std::max(1.0, M.norm()));
    for (int i = 1; i < k; ++i)
      CHECK(svd.singular_values[i] <= svd.singular_values[i - 1]);
    CHECK(svd.singular_values[k - 1] >= 0.0);
  }
}
