#pragma once

#include <cstdint>
#include <vector>

#include "qeffects/linalg.hpp"

namespace qeffects {

/// A Hermitian operator with spectrum in [0, 1], stored together with its
/// spectral decomposition.
///
/// Eigenvalues within tol.snap of 0 or 1 are snapped to exactly 0 or 1 when an
/// effect is built from a matrix; kernels and fixed spaces are read off the
/// snapped spectrum.
class Effect {
 public:
  /// Validates a matrix as an effect. Throws NotHermitian, or InvalidEffect
  /// when the spectrum leaves [-tol.snap, 1 + tol.snap].
  static Effect create(const Matrix& a, const Tolerance& tol = {});

  /// Builds an effect from exact spectral data (used by the functional
  /// calculus). Values are clamped into [0, 1] but interior values are not
  /// snapped. `vectors` must have orthonormal columns.
  static Effect from_spectrum(RealVector values, Matrix vectors, const Tolerance& tol = {});

  Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }

  /// I - A
  Effect negation() const;

 private:
  Effect(Matrix m, RealVector values, Matrix vectors)
      : matrix_(std::move(m)), eigenvalues_(std::move(values)), eigenvectors_(std::move(vectors)) {}

  Matrix matrix_;
  RealVector eigenvalues_;  // ascending, snapped
  Matrix eigenvectors_;
};

/// Finite direct sum of full matrix blocks M = M_{n1} + ... + M_{nk} acting on
/// C^(n1 + ... + nk). Murray-von Neumann comparison in M is per-block rank
/// comparison.
class BlockAlgebra {
 public:
  static BlockAlgebra full(Index d);
  static BlockAlgebra create(std::vector<Index> block_dims);

  Index dim() const { return dim_; }
  std::size_t blocks() const { return block_dims_.size(); }
  const std::vector<Index>& block_dims() const { return block_dims_; }
  Index offset(std::size_t b) const { return offsets_[b]; }

  Matrix block(const Matrix& x, std::size_t b) const;
  /// Frobenius norm of everything outside the diagonal blocks.
  double off_block_norm(const Matrix& x) const;
  /// Throws NotInAlgebra when the off-block part exceeds `tol`.
  void require_member(const Matrix& x, double tol, const char* what) const;
  /// Zeroes every entry outside the diagonal blocks.
  Matrix compress(const Matrix& x) const;

 private:
  std::vector<Index> block_dims_;
  std::vector<Index> offsets_;
  Index dim_ = 0;
};

struct EffectProjections {
  Matrix range;            // P_A
  Matrix kernel;           // N_A
  Matrix negation_kernel;  // N_{A'}
  Matrix fuzzy;            // P_{AA'} = I - N_A - N_{A'}
};

struct SharpnessReport {
  EffectProjections projections;
  std::vector<Index> range_ranks;
  std::vector<Index> kernel_ranks;
  std::vector<Index> negation_kernel_ranks;
  std::vector<Index> fuzzy_ranks;
  bool almost_sharp = false;
  bool nearly_sharp = false;
};

struct PqpWitness {
  Matrix p;
  Matrix q;
};

struct SequentialProjectionTests {
  bool product_is_projection = false;  // P o A is a projection
  bool trace_identity = false;         // tr(PA) = tr(PAPA)
  bool pa_is_projection = false;       // PA is a projection
  bool pa_idempotent = false;          // (PA)^2 = PA
  double trace_gap = 0.0;
  double commutator_norm = 0.0;        // ||AP - PA||_F
  bool commutes_when_projection = true;  // product_is_projection => AP = PA

  bool agree() const {
    return product_is_projection == trace_identity && trace_identity == pa_is_projection &&
           pa_is_projection == pa_idempotent;
  }
};

struct IntervalVerdict {
  bool subequivalent = false;  // P <= P' in the Murray-von Neumann order
  int samples_checked = 0;
  int samples_almost_sharp = 0;
  bool witness_almost_sharp = false;  // classification of P/2
  bool holds = false;
};

struct CommutingDecomposition {
  Matrix p1, q1, p2, q2;
  double residual = 0.0;  // ||P1 Q1 P1 + P2 Q2 P2 - A||_F
};

bool is_projection(const Matrix& x, double tol);
/// X <= Y for projections, tested as ||XY - X||_F <= tol.
bool projection_leq(const Matrix& x, const Matrix& y, double tol);

Effect sequential_product(const Effect& a, const Effect& b, const Tolerance& tol = {});

EffectProjections effect_projections(const Effect& a);

/// I - N_A - N_{A'}, cross-checked against the range projection of A(I - A).
/// Throws FormulaMismatch when the two routes disagree by more than 10 tol.rank.
Matrix fuzzy_projection(const Effect& a, const Tolerance& tol = {});

std::vector<Index> block_ranks(const Matrix& projection, const BlockAlgebra& m);

bool mvn_leq(const Matrix& p, const Matrix& q, const BlockAlgebra& m, const Tolerance& tol = {});
bool mvn_equivalent(const Matrix& p, const Matrix& q, const BlockAlgebra& m,
                    const Tolerance& tol = {});

SharpnessReport classify_sharpness(const Effect& a, const BlockAlgebra& m,
                                   const Tolerance& tol = {});

/// Constructs projections P, Q with PQP = A by pairing each fuzzy eigenvector
/// with a kernel eigenvector. Throws NotAlmostSharp when the kernel is too small.
PqpWitness pqp_decompose(const Effect& a, const Tolerance& tol = {});
/// Same, blockwise, so that P and Q lie in M.
PqpWitness pqp_decompose(const Effect& a, const BlockAlgebra& m, const Tolerance& tol = {});

SequentialProjectionTests seq_projection_tests(const Matrix& p, const Effect& a,
                                               const Tolerance& tol = {});

/// Samples effects in the order interval [0, P] (inside M).
std::vector<Effect> interval_sample(const Matrix& p, int count, std::uint64_t seed,
                                    const BlockAlgebra& m, const Tolerance& tol = {});
std::vector<Effect> interval_sample(const Matrix& p, int count, std::uint64_t seed,
                                    const Tolerance& tol = {});

IntervalVerdict interval_sharpness_check(const Matrix& p, const BlockAlgebra& m, int samples,
                                  std::uint64_t seed, const Tolerance& tol = {});

/// Splits an effect commuting with P into corner compressions and decomposes
/// each one. Requires P ~ P' in M.
CommutingDecomposition commuting_decomposition(const Effect& a, const Matrix& p,
                                               const BlockAlgebra& m, const Tolerance& tol = {});

}  // namespace qeffects
