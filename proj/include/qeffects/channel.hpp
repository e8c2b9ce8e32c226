#pragma once

#include <vector>

#include "qeffects/linalg.hpp"

namespace qeffects {

struct ChannelClass {
  bool unital = false;
  bool trace_preserving = false;
  bool trace_nonincreasing = false;
  bool self_adjoint = false;
  bool faithful = false;
};

/// A finite family of operation elements {A_a} on C^d with sum A_a A_a* <= I.
/// Instances only exist in validated form.
class KrausFamily {
 public:
  /// Validates and wraps `operators`. Throws InvalidFamily when
  /// lambda_max(sum A A* - I) exceeds tol.rank.
  static KrausFamily create(std::vector<Matrix> operators, const Tolerance& tol = {});

  /// Rescales by 1/sqrt(lambda_max(sum A A*)) when that exceeds 1, then validates.
  static KrausFamily normalized(std::vector<Matrix> operators, const Tolerance& tol = {});

  Index dim() const { return dim_; }
  std::size_t size() const { return operators_.size(); }
  const std::vector<Matrix>& operators() const { return operators_; }

  /// B -> sum_a A_a B A_a*
  Matrix apply(const Matrix& b) const;

  /// sum_a A_a A_a*  (= Phi(I))
  Matrix outer_sum() const;
  /// sum_a A_a* A_a
  Matrix inner_sum() const;

 private:
  KrausFamily(Index dim, std::vector<Matrix> operators)
      : dim_(dim), operators_(std::move(operators)) {}

  Index dim_;
  std::vector<Matrix> operators_;
};

/// The adjoint map B -> sum_a A_a* B A_a. Unvalidated: the dual of a valid
/// family need not satisfy the family bound.
class DualMap {
 public:
  explicit DualMap(std::vector<Matrix> operators) : operators_(std::move(operators)) {}

  Matrix apply(const Matrix& b) const;
  const std::vector<Matrix>& operators() const { return operators_; }

 private:
  std::vector<Matrix> operators_;
};

/// Returns lambda_max(sum A A* - I); the family bound holds iff this is <= 0.
double family_bound_excess(const std::vector<Matrix>& operators);

Matrix apply(const KrausFamily& family, const Matrix& b);

ChannelClass classify(const KrausFamily& family, const Tolerance& tol = {});

/// d^2 x d^2 matrix of the map under column-stacking: sum conj(A) kron A.
Matrix superoperator(const KrausFamily& family);

DualMap dual(const KrausFamily& family);

/// lambda_min(Phi(C*C) - Phi(C)* Phi(C)). Nonnegative (up to round-off) for
/// every valid family.
double schwarz_gap(const KrausFamily& family, const Matrix& c);

}  // namespace qeffects
