#pragma once

#include <Eigen/Dense>

namespace corrgeo {

/// Number of unordered index pairs of an n x n matrix.
inline int pair_count(int n) { return n * (n - 1) / 2; }

/// Canonical pair order used by every packed triangle in this library:
/// (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).
inline int pair_index(int n, int i, int j) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// Strict upper triangle of A in canonical pair order.
inline Eigen::VectorXd pack_strict_upper(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::VectorXd v(pair_count(n));
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v[p++] = A(i, j);
  return v;
}

/// Strict lower triangle of A, entry (j,i) stored at the slot of pair (i,j)
/// so that lower-triangular coordinates align with the upper-triangle order.
inline Eigen::VectorXd pack_strict_lower(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::VectorXd v(pair_count(n));
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v[p++] = A(j, i);
  return v;
}

/// Symmetric matrix with zero diagonal from packed strict-upper values.
inline Eigen::MatrixXd hollow_from_packed(int n, const Eigen::VectorXd& v) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      A(i, j) = v[p];
      A(j, i) = v[p];
      ++p;
    }
  return A;
}

/// Unit-diagonal lower-triangular matrix from packed strict-lower values.
inline Eigen::MatrixXd unit_lower_from_packed(int n, const Eigen::VectorXd& v) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) A(j, i) = v[p++];
  return A;
}

/// Symmetric unit-diagonal matrix from packed strict-upper values.
inline Eigen::MatrixXd unit_diag_from_packed(int n, const Eigen::VectorXd& v) {
  Eigen::MatrixXd A = hollow_from_packed(n, v);
  A.diagonal().setOnes();
  return A;
}

}  // namespace corrgeo
