#include "qeffects/fixedpoint.hpp"

#include <algorithm>
#include <cmath>

#include "qeffects/generators.hpp"
#include "qeffects/random.hpp"

namespace qeffects {

namespace {

OperatorSubspace from_columns(const Matrix& columns, Index d) {
  OperatorSubspace out;
  out.dim = d;
  for (Index j = 0; j < columns.cols(); ++j) out.basis.push_back(unvec(columns.col(j), d));
  return out;
}

double fixed_residual(const KrausFamily& family, const Matrix& x) {
  return (family.apply(x) - x).norm();
}

// Real-orthonormal basis of the real span of Hermitian matrices. Complex
// orthonormalization would mix in non-Hermitian combinations.
std::vector<Matrix> hermitian_basis(const std::vector<Matrix>& elements, Index d,
                                    const Tolerance& tol) {
  std::vector<Matrix> out;
  if (elements.empty()) return out;
  const Index n = d * d;
  Eigen::MatrixXd stacked(2 * n, static_cast<Index>(elements.size()));
  for (std::size_t j = 0; j < elements.size(); ++j) {
    const Vector v = vec(elements[j]);
    stacked.col(static_cast<Index>(j)) << v.real(), v.imag();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
  const RealVector& sigma = svd.singularValues();
  const double top = sigma.size() ? sigma(0) : 0.0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (top <= 0.0 || sigma(i) <= tol.rank * top) continue;
    const Eigen::VectorXd u = svd.matrixU().col(i);
    Vector v(n);
    for (Index k = 0; k < n; ++k) v(k) = Complex(u(k), u(n + k));
    out.push_back(hermitian_part(unvec(v, d)));
  }
  return out;
}

Index search_kraus_count(int trial) { return 1 + trial % 3; }

}  // namespace

OperatorSubspace fixed_point_space(const KrausFamily& family, const Tolerance& tol) {
  const Index d = family.dim();
  const Matrix l = superoperator(family) - identity(d * d);
  // Phi - id has scale 1 even when it is all round-off (Phi = id).
  return from_columns(nullspace_basis(l, tol, 1.0), d);
}

OperatorSubspace commutant(const KrausFamily& family, const Tolerance& tol) {
  const Index d = family.dim();
  const Index n = d * d;
  const Matrix id = identity(d);
  const auto& ops = family.operators();
  // vec(XA - AX) = (A^T kron I - I kron A) vec(X)
  Matrix system(2 * n * static_cast<Index>(ops.size()), n);
  Index row = 0;
  double scale = 0.0;
  for (const Matrix& a : ops) {
    scale = std::max(scale, a.norm());
    for (const Matrix& op : {a, Matrix(a.adjoint())}) {
      system.middleRows(row, n) = kron(op.transpose(), id) - kron(id, op);
      row += n;
    }
  }
  // Scalar multiples of I give a round-off system; rank it against the operators.
  return from_columns(nullspace_basis(system, tol, scale), d);
}

ContainmentReport check_containment(const KrausFamily& family, const Tolerance& tol) {
  const OperatorSubspace fix = fixed_point_space(family, tol);
  const OperatorSubspace comm = commutant(family, tol);
  const SubspaceContainment c = subspace_contained(fix, comm, tol);
  return {c.contained, c.max_residual, fix.size(), comm.size()};
}

FixedCommutationVerdict check_fixed_commutation(const KrausFamily& family, const Matrix& b,
                                                const Tolerance& tol) {
  if (b.rows() != family.dim() || b.cols() != family.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "candidate does not match the family dimension");
  }
  const double t = tol.rank;
  FixedCommutationVerdict v;
  v.r1 = fixed_residual(family, b);
  v.r2 = fixed_residual(family, b.adjoint() * b);
  v.r3 = fixed_residual(family, b * b.adjoint());
  for (const Matrix& a : family.operators()) {
    const double left = (b * a - a * b).norm();
    const double right = (b * a.adjoint() - a.adjoint() * b).norm();
    v.left_residual = std::max(v.left_residual, left);
    v.comm_residual = std::max({v.comm_residual, left, right});
  }
  v.premises = v.r1 <= t && v.r2 <= t && v.r3 <= t;
  v.half_premises = v.r1 <= t && v.r3 <= t;
  v.self_adjoint_family = classify(family, tol).self_adjoint;
  v.full_holds = !v.premises || v.comm_residual <= 10.0 * t;
  v.half_holds = !v.half_premises || v.left_residual <= 10.0 * t;
  v.self_adjoint_holds =
      !(v.self_adjoint_family && v.half_premises) || v.comm_residual <= 10.0 * t;
  return v;
}

EquivalenceVerdict check_equivalence(const KrausFamily& family, const Tolerance& tol) {
  const Index d = family.dim();
  const OperatorSubspace fix = fixed_point_space(family, tol);
  const OperatorSubspace comm = commutant(family, tol);
  EquivalenceVerdict v;
  const SubspaceContainment c = subspace_contained(fix, comm, tol);
  v.contained = c.contained;
  v.containment_residual = c.max_residual;

  // Condition on all B*C covers every B*B by polarization.
  for (const Matrix& b : fix.basis)
    for (const Matrix& c2 : fix.basis)
      v.product_residual = std::max(v.product_residual, fixed_residual(family, b.adjoint() * c2));

  std::vector<Matrix> parts;
  for (const Matrix& b : fix.basis) {
    parts.push_back(hermitian_part(b));
    parts.push_back(hermitian_part(Complex(0.0, -1.0) * b));
  }
  const std::vector<Matrix> herm = hermitian_basis(parts, d, tol);
  for (std::size_t i = 0; i < herm.size(); ++i)
    for (std::size_t j = i; j < herm.size(); ++j) {
      const Matrix s = herm[i] * herm[j] + herm[j] * herm[i];
      v.square_residual = std::max(v.square_residual, fixed_residual(family, s));
    }

  v.products_fixed = v.product_residual <= tol.rank;
  v.squares_fixed = v.square_residual <= tol.rank;
  return v;
}

KrausFamily search_trial_family(Index d, int trial, std::uint64_t seed, SearchMode mode,
                                const Tolerance& tol) {
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(trial)}));
  if (mode == SearchMode::TraceNonincreasing) {
    static constexpr KrausClass kCycle[] = {KrausClass::TracePreserving,
                                            KrausClass::TraceNonincreasing,
                                            KrausClass::SelfAdjoint, KrausClass::Commutative};
    const KrausClass cls = kCycle[trial % 4];
    return gen_kraus(d, search_kraus_count(trial / 4), rng, cls, tol);
  }
  // Structured candidates first on even trials, unstructured unital ones on odd.
  if (trial % 2 == 0) return gen_kraus(d, d, rng, KrausClass::MeasurePrepare, tol);
  return gen_kraus(d, 2 + (trial / 2) % 3, rng, KrausClass::UnitalNotTp, tol);
}

std::optional<Counterexample> counterexample_search(Index d, int budget, std::uint64_t seed,
                                                    const Tolerance& tol, SearchMode mode) {
  if (budget < 1) throw Error(ErrorCode::InvalidArgument, "search budget must be >= 1");
  if (d < 2) return std::nullopt;
  for (int trial = 0; trial < budget; ++trial) {
    KrausFamily family = search_trial_family(d, trial, seed, mode, tol);
    if (mode == SearchMode::TraceNonincreasing && !classify(family, tol).trace_nonincreasing) {
      continue;
    }
    const OperatorSubspace fix = fixed_point_space(family, tol);
    if (fix.empty()) continue;
    const OperatorSubspace comm = commutant(family, tol);
    for (const Matrix& b : fix.basis) {
      const double off = projection_residual(b, comm);
      if (off <= 100.0 * tol.rank) continue;
      const double fixed = fixed_residual(family, b);
      if (fixed > tol.spec) continue;
      return Counterexample{std::move(family), b, off, fixed, trial,
                            derive_seed(seed, {static_cast<std::uint64_t>(trial)})};
    }
  }
  return std::nullopt;
}

}  // namespace qeffects
