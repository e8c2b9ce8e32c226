#pragma once

// Reference computations that avoid the library's own routes: explicit index
// loops instead of Eigen products, Gaussian elimination instead of SVD.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "qeffects/linalg.hpp"

namespace oracle {

using qeffects::Complex;
using qeffects::Index;
using qeffects::Matrix;

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j) {
      Complex s = 0.0;
      for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline Matrix dagger(const Matrix& a) {
  Matrix c(a.cols(), a.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
  return c;
}

/// sum_a A_a B A_a* by explicit loops.
inline Matrix apply(const std::vector<Matrix>& ops, const Matrix& b) {
  Matrix out = Matrix::Zero(b.rows(), b.cols());
  for (const Matrix& a : ops) out += multiply(multiply(a, b), dagger(a));
  return out;
}

/// Column j of the superoperator is vec(Phi(E_j)) with E_j the j-th matrix
/// unit in column-stacking order.
inline Matrix superoperator(const std::vector<Matrix>& ops) {
  const Index d = ops.front().rows();
  Matrix s(d * d, d * d);
  for (Index col = 0; col < d; ++col)
    for (Index row = 0; row < d; ++row) {
      Matrix e = Matrix::Zero(d, d);
      e(row, col) = 1.0;
      const Matrix img = oracle::apply(ops, e);
      for (Index c2 = 0; c2 < d; ++c2)
        for (Index r2 = 0; r2 < d; ++r2) s(c2 * d + r2, col * d + row) = img(r2, c2);
    }
  return s;
}

/// Rank by Gaussian elimination with complete pivoting; pivots below
/// rel * max(largest entry, floor) count as zero.
inline Index rank(Matrix m, double rel = 1e-9, double floor = 0.0) {
  const Index rows = m.rows(), cols = m.cols();
  double top = 0.0;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) top = std::max(top, std::abs(m(i, j)));
  if (top == 0.0) return 0;
  top = std::max(top, floor);
  Index r = 0;
  for (; r < std::min(rows, cols); ++r) {
    Index pi = r, pj = r;
    double best = 0.0;
    for (Index i = r; i < rows; ++i)
      for (Index j = r; j < cols; ++j)
        if (std::abs(m(i, j)) > best) {
          best = std::abs(m(i, j));
          pi = i;
          pj = j;
        }
    if (best <= rel * top) break;
    m.row(r).swap(m.row(pi));
    m.col(r).swap(m.col(pj));
    for (Index i = r + 1; i < rows; ++i) {
      const Complex f = m(i, r) / m(r, r);
      for (Index j = r; j < cols; ++j) m(i, j) -= f * m(r, j);
    }
  }
  return r;
}

/// Linear system for X with XA = AX and XA* = A*X, written entry by entry;
/// unknown x_{pq} sits in column q * d + p.
inline Matrix commutant_system(const std::vector<Matrix>& ops) {
  const Index d = ops.front().rows();
  std::vector<Matrix> all;
  for (const Matrix& a : ops) {
    all.push_back(a);
    all.push_back(dagger(a));
  }
  Matrix sys = Matrix::Zero(static_cast<Index>(all.size()) * d * d, d * d);
  Index row = 0;
  for (const Matrix& a : all)
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j, ++row)
        for (Index k = 0; k < d; ++k) {
          sys(row, k * d + i) += a(k, j);  // (XA)_ij = sum_k x_ik a_kj
          sys(row, j * d + k) -= a(i, k);  // (AX)_ij = sum_k a_ik x_kj
        }
  return sys;
}

inline Index commutant_dim(const std::vector<Matrix>& ops, double rel = 1e-9) {
  const Index d = ops.front().rows();
  double scale = 0.0;
  for (const Matrix& a : ops) scale = std::max(scale, a.norm());
  return d * d - rank(commutant_system(ops), rel, scale);
}

inline Index fixed_dim(const std::vector<Matrix>& ops, double rel = 1e-9) {
  const Index d = ops.front().rows();
  Matrix l = superoperator(ops);
  for (Index i = 0; i < d * d; ++i) l(i, i) -= 1.0;
  return d * d - rank(l, rel, 1.0);
}

/// Eigenvalues of a 2x2 Hermitian matrix, ascending, by the quadratic formula.
inline std::pair<double, double> eig2(const Matrix& a) {
  const double p = a(0, 0).real(), q = a(1, 1).real();
  const double off = std::abs(a(0, 1));
  const double mid = 0.5 * (p + q);
  const double rad = std::sqrt(0.25 * (p - q) * (p - q) + off * off);
  return {mid - rad, mid + rad};
}

inline bool near(const Matrix& a, const Matrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).norm() <= tol;
}

inline Matrix diag(std::initializer_list<double> values) {
  const Index d = static_cast<Index>(values.size());
  Matrix m = Matrix::Zero(d, d);
  Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

inline Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Matrix sigma_x() { return mat2(0, 1, 1, 0); }
inline Matrix sigma_y() { return mat2(0, Complex(0, -1), Complex(0, 1), 0); }
inline Matrix sigma_z() { return mat2(1, 0, 0, -1); }

inline Matrix unit(Index d, Index i, Index j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

/// {I/sqrt2, sigma_z/sqrt2}
inline std::vector<Matrix> dephasing() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s * Matrix::Identity(2, 2), s * sigma_z()};
}

}  // namespace oracle
