#include "qeffects/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace qeffects {

Tolerance Tolerance::from_scale(double tol) {
  Tolerance t;
  t.rank = tol;
  t.spec = tol * 1e-2;
  t.snap = tol;
  t.validate();
  return t;
}

void Tolerance::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(rank) || !ok(spec) || !ok(snap)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be finite and strictly positive");
  }
  if (spec > rank) {
    throw Error(ErrorCode::InvalidArgument, "spectral tolerance must not exceed rank tolerance");
  }
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Matrix identity(Index d) { return Matrix::Identity(d, d); }

Matrix adjoint(const Matrix& a) { return a.adjoint(); }

Matrix hermitian_part(const Matrix& a) {
  Matrix h = (a + a.adjoint()) * 0.5;
  return h;
}

double frobenius(const Matrix& a) { return a.norm(); }

double hermiticity_defect(const Matrix& a) { return (a - a.adjoint()).norm(); }

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be a nonempty square matrix, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": shapes " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()) + " differ");
  }
}

Complex hs_inner(const Matrix& x, const Matrix& y) {
  return (x.conjugate().cwiseProduct(y)).sum();
}

Vector vec(const Matrix& x) {
  // Eigen storage is column-major, so the raw buffer already is vec(x).
  return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvec(const Vector& v, Index d) {
  if (v.size() != d * d) {
    throw Error(ErrorCode::DimensionMismatch, "unvec: vector length is not d^2");
  }
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

RealVector hermitian_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::DidNotConverge, "Hermitian eigensolver failed");
  }
  return es.eigenvalues();
}

double lambda_max(const Matrix& hermitian) { return hermitian_eigenvalues(hermitian).maxCoeff(); }

double lambda_min(const Matrix& hermitian) { return hermitian_eigenvalues(hermitian).minCoeff(); }

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

namespace {

// Rotate each column so its dominant entry is real and positive. Makes
// eigenvectors reproducible across runs and matches the textbook sign choice.
void normalize_phases(Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    const double peak = v.col(j).cwiseAbs().maxCoeff();
    if (peak == 0.0) continue;
    Index pivot = 0;
    for (Index i = 0; i < v.rows(); ++i) {
      if (std::abs(v(i, j)) > peak * (1.0 - 1e-8)) {
        pivot = i;
        break;
      }
    }
    const Complex z = v(pivot, j);
    v.col(j) *= std::conj(z) / std::abs(z);
  }
}

}  // namespace

SpectralDecomposition hermitian_spectral(const Matrix& a, const Tolerance& tol) {
  require_square(a, "hermitian_spectral input");
  require_finite(a, "hermitian_spectral input");
  const double defect = hermiticity_defect(a);
  if (defect > tol.spec * std::max(1.0, a.norm())) {
    throw Error(ErrorCode::NotHermitian,
                "||A - A*||_F = " + std::to_string(defect) + " exceeds tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::DidNotConverge, "Hermitian eigensolver failed");
  }
  SpectralDecomposition out{es.eigenvalues(), es.eigenvectors()};
  normalize_phases(out.eigenvectors);
  return out;
}

Matrix psd_sqrt(const Matrix& a, const Tolerance& tol) {
  SpectralDecomposition sd = hermitian_spectral(a, tol);
  const double smallest = sd.eigenvalues.size() ? sd.eigenvalues.minCoeff() : 0.0;
  if (smallest < -tol.rank) {
    throw Error(ErrorCode::NotPSD, "minimum eigenvalue " + std::to_string(smallest) +
                                       " is below -tolerance");
  }
  // Eigenvalues at the solver's round-off level would turn into ~1e-8 roots.
  const double top = sd.eigenvalues.size() ? sd.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double noise = 8.0 * static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() * top;
  RealVector roots =
      sd.eigenvalues.unaryExpr([noise](double v) { return v <= noise ? 0.0 : std::sqrt(v); });
  Matrix s = sd.eigenvectors * roots.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
  return hermitian_part(s);
}

RangeKernel range_kernel_projections(const Matrix& a, const Tolerance& tol, double scale_floor) {
  SpectralDecomposition sd = hermitian_spectral(a, tol);
  const Index d = a.rows();
  const double top = std::max({sd.eigenvalues.maxCoeff(), scale_floor, 0.0});
  const double threshold = tol.rank * top;
  RangeKernel out;
  out.range = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    if (top > 0.0 && sd.eigenvalues(i) > threshold) {
      out.range += sd.eigenvectors.col(i) * sd.eigenvectors.col(i).adjoint();
      ++out.rank;
    }
  }
  out.range = hermitian_part(out.range);
  out.kernel = identity(d) - out.range;
  return out;
}

Matrix nullspace_basis(const Matrix& l, const Tolerance& tol, double scale_floor) {
  require_finite(l, "nullspace_basis input");
  const Index n = l.cols();
  if (n == 0) return Matrix(0, 0);
  if (l.rows() == 0) return identity(n);
  Eigen::JacobiSVD<Matrix> svd(l, Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const double top = std::max(sigma.size() ? sigma(0) : 0.0, scale_floor);
  const double threshold = tol.rank * top;
  Index nonzero = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > threshold) ++nonzero;
  }
  // Singular values are sorted descending, so the trailing columns of V span
  // the thresholded nullspace.
  return svd.matrixV().rightCols(n - nonzero);
}

OperatorSubspace orthonormalize(const std::vector<Matrix>& elements, Index dim,
                                const Tolerance& tol) {
  OperatorSubspace out;
  out.dim = dim;
  if (elements.empty()) return out;
  Matrix stacked(dim * dim, static_cast<Index>(elements.size()));
  for (std::size_t j = 0; j < elements.size(); ++j) {
    if (elements[j].rows() != dim || elements[j].cols() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "orthonormalize: element has wrong shape");
    }
    stacked.col(static_cast<Index>(j)) = vec(elements[j]);
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const RealVector& sigma = svd.singularValues();
  const double top = sigma.size() ? sigma(0) : 0.0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (top > 0.0 && sigma(i) > tol.rank * top) {
      out.basis.push_back(unvec(svd.matrixU().col(i), dim));
    }
  }
  return out;
}

double projection_residual(const Matrix& x, const OperatorSubspace& v) {
  Matrix r = x;
  for (const Matrix& b : v.basis) r -= hs_inner(b, x) * b;
  return r.norm();
}

SubspaceContainment subspace_contained(const OperatorSubspace& u, const OperatorSubspace& v,
                                       const Tolerance& tol) {
  if (u.dim != v.dim) {
    throw Error(ErrorCode::DimensionMismatch, "subspace_contained: ambient dimensions differ");
  }
  SubspaceContainment out;
  for (const Matrix& x : u.basis) {
    out.max_residual = std::max(out.max_residual, projection_residual(x, v));
  }
  out.contained = out.max_residual <= tol.rank;
  return out;
}

}  // namespace qeffects
