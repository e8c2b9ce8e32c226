#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qeffects/error.hpp"

namespace qeffects {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thresholds governing every numerical rank, subspace and sharpness decision.
///
/// `rank` is relative to the largest singular/eigen value of the object being
/// ranked. `spec` bounds reconstruction and Hermiticity defects. `snap` is the
/// absolute distance within which an effect eigenvalue is treated as exactly 0
/// or exactly 1.
struct Tolerance {
  double rank = 1e-8;
  double spec = 1e-10;
  double snap = 1e-8;

  /// Maps the single CLI `--tol` knob onto all three fields.
  static Tolerance from_scale(double tol);

  void validate() const;
};

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // orthonormal columns, phase-normalized

  Matrix reconstruct() const;
};

/// A linear subspace of d x d matrices, given by a basis orthonormal under the
/// Hilbert-Schmidt inner product tr(X* Y).
struct OperatorSubspace {
  Index dim = 0;
  std::vector<Matrix> basis;

  Index size() const { return static_cast<Index>(basis.size()); }
  bool empty() const { return basis.empty(); }
};

struct RangeKernel {
  Matrix range;
  Matrix kernel;
  Index rank = 0;
};

struct SubspaceContainment {
  bool contained = true;
  double max_residual = 0.0;
};

// ---------------------------------------------------------------------------
// Small helpers

Matrix identity(Index d);
Matrix adjoint(const Matrix& a);
Matrix hermitian_part(const Matrix& a);
double frobenius(const Matrix& a);
double hermiticity_defect(const Matrix& a);
void require_square(const Matrix& a, const char* what);
void require_finite(const Matrix& a, const char* what);
void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

/// tr(X* Y)
Complex hs_inner(const Matrix& x, const Matrix& y);

/// Column-stacking vectorization; vec(A X B) = (B^T kron A) vec(X).
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Index d);
Matrix kron(const Matrix& a, const Matrix& b);

/// Eigenvalues of a Hermitian matrix in ascending order (no vectors).
RealVector hermitian_eigenvalues(const Matrix& a);
double lambda_max(const Matrix& hermitian);
double lambda_min(const Matrix& hermitian);
double spectral_norm(const Matrix& a);

// ---------------------------------------------------------------------------
// Core operations

SpectralDecomposition hermitian_spectral(const Matrix& a, const Tolerance& tol = {});

/// Hermitian PSD square root; eigenvalues in [-tol.rank, 0) and round-off
/// positives are clamped to 0.
Matrix psd_sqrt(const Matrix& a, const Tolerance& tol = {});

/// Range and kernel projections of a Hermitian PSD matrix. An eigenvalue counts
/// as nonzero iff it exceeds tol.rank times max(largest eigenvalue, scale_floor).
/// A positive floor keeps pure round-off from being ranked against itself.
RangeKernel range_kernel_projections(const Matrix& a, const Tolerance& tol = {},
                                     double scale_floor = 0.0);

/// Orthonormal basis (as columns) of the numerical nullspace of `l`, obtained
/// by thresholding singular values at tol.rank * max(sigma_max, scale_floor).
Matrix nullspace_basis(const Matrix& l, const Tolerance& tol = {}, double scale_floor = 0.0);

/// Hilbert-Schmidt orthonormal basis of span(elements); near-dependent
/// directions are dropped with the relative rank threshold.
OperatorSubspace orthonormalize(const std::vector<Matrix>& elements, Index dim,
                                const Tolerance& tol = {});

/// Residual of `x` after orthogonal projection onto span(v).
double projection_residual(const Matrix& x, const OperatorSubspace& v);

SubspaceContainment subspace_contained(const OperatorSubspace& u, const OperatorSubspace& v,
                                       const Tolerance& tol = {});

}  // namespace qeffects
