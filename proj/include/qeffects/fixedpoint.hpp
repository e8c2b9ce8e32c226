#pragma once

#include <cstdint>
#include <optional>

#include "qeffects/channel.hpp"

namespace qeffects {

struct ContainmentReport {
  bool contained = true;
  double max_residual = 0.0;
  Index fix_dim = 0;
  Index comm_dim = 0;
};

/// Residuals for one candidate B. The full implication assumes B, B*B and BB*
/// are fixed; the half-version only B and BB* and concludes BA = AB.
struct FixedCommutationVerdict {
  double r1 = 0.0;  // ||Phi(B) - B||
  double r2 = 0.0;  // ||Phi(B*B) - B*B||
  double r3 = 0.0;  // ||Phi(BB*) - BB*||
  double comm_residual = 0.0;   // max over a of ||BA - AB||, ||BA* - A*B||
  double left_residual = 0.0;   // max over a of ||BA - AB||
  bool premises = false;        // r1, r2, r3 <= tol
  bool half_premises = false;   // r1, r3 <= tol
  bool self_adjoint_family = false;
  bool full_holds = true;
  bool half_holds = true;
  bool self_adjoint_holds = true;  // half premises give full membership

  bool holds() const { return full_holds && half_holds && self_adjoint_holds; }
};

/// The three conditions of the fixed-point / commutant equivalence.
struct EquivalenceVerdict {
  bool contained = false;       // fix is inside comm
  bool products_fixed = false;  // B*C fixed for all B, C in fix
  bool squares_fixed = false;   // HK + KH fixed for all self-adjoint H, K in fix
  double containment_residual = 0.0;
  double product_residual = 0.0;
  double square_residual = 0.0;

  bool agree() const { return contained == products_fixed && products_fixed == squares_fixed; }
};

enum class SearchMode {
  UnitalNotTp,         // families outside the trace-nonincreasing set
  TraceNonincreasing,  // control: a find here is a bug
};

struct Counterexample {
  KrausFamily family;
  Matrix b;                    // fixed, not in the commutant
  double comm_residual = 0.0;  // distance from span(comm), HS norm
  double fixed_residual = 0.0; // ||Phi(B) - B||_F
  int trial = 0;
  std::uint64_t trial_seed = 0;
};

/// HS-orthonormal basis of {B : Phi(B) = B}.
OperatorSubspace fixed_point_space(const KrausFamily& family, const Tolerance& tol = {});

/// HS-orthonormal basis of {B : BA = AB and BA* = A*B for every A}.
OperatorSubspace commutant(const KrausFamily& family, const Tolerance& tol = {});

ContainmentReport check_containment(const KrausFamily& family, const Tolerance& tol = {});

FixedCommutationVerdict check_fixed_commutation(const KrausFamily& family, const Matrix& b,
                                                const Tolerance& tol = {});

EquivalenceVerdict check_equivalence(const KrausFamily& family, const Tolerance& tol = {});

/// Returns the first verified (family, B) with B fixed and outside the
/// commutant, or nothing once `budget` trials are used. d < 2 returns nothing.
std::optional<Counterexample> counterexample_search(Index d, int budget, std::uint64_t seed,
                                                    const Tolerance& tol = {},
                                                    SearchMode mode = SearchMode::UnitalNotTp);

/// The family sampled for one search trial; exposed for reproduction.
KrausFamily search_trial_family(Index d, int trial, std::uint64_t seed, SearchMode mode,
                                const Tolerance& tol = {});

}  // namespace qeffects
