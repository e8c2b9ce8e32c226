#include "qeffects/channel.hpp"

#include <cmath>
#include <sstream>

namespace qeffects {

namespace {

Matrix sum_outer(const std::vector<Matrix>& ops) {
  Matrix s = Matrix::Zero(ops.front().rows(), ops.front().cols());
  for (const Matrix& a : ops) s.noalias() += a * a.adjoint();
  return hermitian_part(s);
}

Matrix sum_inner(const std::vector<Matrix>& ops) {
  Matrix s = Matrix::Zero(ops.front().rows(), ops.front().cols());
  for (const Matrix& a : ops) s.noalias() += a.adjoint() * a;
  return hermitian_part(s);
}

Index check_operators(const std::vector<Matrix>& ops) {
  if (ops.empty()) {
    throw Error(ErrorCode::InvalidFamily, "a family needs at least one operator");
  }
  const Index d = ops.front().rows();
  for (const Matrix& a : ops) {
    require_square(a, "operation element");
    require_finite(a, "operation element");
    if (a.rows() != d) {
      throw Error(ErrorCode::DimensionMismatch, "operation elements must share one dimension");
    }
  }
  return d;
}

}  // namespace

double family_bound_excess(const std::vector<Matrix>& operators) {
  check_operators(operators);
  const Matrix s = sum_outer(operators);
  return lambda_max(s - identity(s.rows()));
}

KrausFamily KrausFamily::create(std::vector<Matrix> operators, const Tolerance& tol) {
  const Index d = check_operators(operators);
  const double excess = family_bound_excess(operators);
  if (excess > tol.rank) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "sum A A* exceeds I by " << excess;
    throw Error(ErrorCode::InvalidFamily, msg.str());
  }
  return KrausFamily(d, std::move(operators));
}

KrausFamily KrausFamily::normalized(std::vector<Matrix> operators, const Tolerance& tol) {
  check_operators(operators);
  const double top = lambda_max(sum_outer(operators));
  if (top > 1.0) {
    const double scale = 1.0 / std::sqrt(top);
    for (Matrix& a : operators) a *= scale;
  }
  return create(std::move(operators), tol);
}

Matrix KrausFamily::apply(const Matrix& b) const {
  if (b.rows() != dim_ || b.cols() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "operand does not match family dimension");
  }
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const Matrix& a : operators_) out.noalias() += a * b * a.adjoint();
  return out;
}

Matrix KrausFamily::outer_sum() const { return sum_outer(operators_); }

Matrix KrausFamily::inner_sum() const { return sum_inner(operators_); }

Matrix DualMap::apply(const Matrix& b) const {
  Matrix out = Matrix::Zero(b.rows(), b.cols());
  for (const Matrix& a : operators_) {
    if (a.rows() != b.rows() || b.rows() != b.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "operand does not match dual map dimension");
    }
    out.noalias() += a.adjoint() * b * a;
  }
  return out;
}

Matrix apply(const KrausFamily& family, const Matrix& b) { return family.apply(b); }

ChannelClass classify(const KrausFamily& family, const Tolerance& tol) {
  const Index d = family.dim();
  const Matrix id = identity(d);
  const Matrix outer = family.outer_sum();
  const Matrix inner = family.inner_sum();

  ChannelClass c;
  c.unital = hermitian_eigenvalues(outer - id).cwiseAbs().maxCoeff() <= tol.rank;
  c.trace_preserving = hermitian_eigenvalues(inner - id).cwiseAbs().maxCoeff() <= tol.rank;
  c.trace_nonincreasing = lambda_max(inner - id) <= tol.rank;
  c.self_adjoint = true;
  for (const Matrix& a : family.operators()) {
    if (hermiticity_defect(a) > tol.rank) c.self_adjoint = false;
  }
  // Phi(B*B) = 0 iff B A_a* = 0 for all a, i.e. iff B vanishes on the span of
  // the ranges of the A_a*; that span is all of C^d iff sum A* A is invertible.
  c.faithful = range_kernel_projections(inner, tol).rank == d;
  return c;
}

Matrix superoperator(const KrausFamily& family) {
  const Index d = family.dim();
  Matrix s = Matrix::Zero(d * d, d * d);
  for (const Matrix& a : family.operators()) s += kron(a.conjugate(), a);
  return s;
}

DualMap dual(const KrausFamily& family) { return DualMap(family.operators()); }

double schwarz_gap(const KrausFamily& family, const Matrix& c) {
  const Matrix phi_c = family.apply(c);
  const Matrix lhs = family.apply(c.adjoint() * c);
  return lambda_min(hermitian_part(lhs - phi_c.adjoint() * phi_c));
}

}  // namespace qeffects
