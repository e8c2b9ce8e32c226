#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qeffects/channel.hpp"
#include "qeffects/effects.hpp"
#include "qeffects/random.hpp"

namespace qeffects {

enum class EffectProfile {
  Generic,        // spectrum uniform in [0, 1]
  WithKernel,     // at least one zero eigenvalue
  WithFixedPart,  // at least one unit eigenvalue
  NearBoundary,   // eigenvalues within 1e-3 of {0, 1}
  Margin,         // exact 0/1 eigenvalues mixed with interior ones at distance >= 1e-4
};

enum class KrausClass {
  General,             // rescaled Ginibre operators
  TracePreserving,     // mixture of unitaries sharing a random block structure
  Unital,              // adjoints of sliced isometries
  SelfAdjoint,         // Hermitian operators with sum A^2 <= I
  Commutative,         // simultaneously diagonal, coefficient vectors of norm <= 1
  UnitalNotTp,         // unital and not trace nonincreasing
  TraceNonincreasing,  // sliced isometries scaled into the family bound
  MeasurePrepare,      // A_i = e_i f_i*, unital with absorbing indices
};

const char* to_string(EffectProfile p);
const char* to_string(KrausClass c);
std::optional<KrausClass> parse_kraus_class(std::string_view name);
std::optional<EffectProfile> parse_effect_profile(std::string_view name);

/// Entries i.i.d. standard complex normal.
Matrix random_ginibre(Index rows, Index cols, Rng& rng);
/// Haar unitary (QR of a Ginibre matrix with the phase correction).
Matrix random_unitary(Index d, Rng& rng);
/// First `cols` columns of a Haar unitary on C^rows.
Matrix random_isometry(Index rows, Index cols, Rng& rng);
Matrix random_hermitian(Index d, Rng& rng);
Matrix random_projection(Index d, Index rank, Rng& rng);
/// Block-diagonal projection with the given rank in each block of m.
Matrix random_projection(const BlockAlgebra& m, const std::vector<Index>& ranks, Rng& rng);
/// Random composition of d into positive parts.
std::vector<Index> random_partition(Index d, Rng& rng);

/// U diag(values) U* with a Haar-random U, validated as an effect.
Effect effect_with_spectrum(const RealVector& values, Rng& rng, const Tolerance& tol = {});
/// Effect with the given counts of 0, 1 and interior eigenvalues; interior
/// values are drawn from [margin, 1 - margin].
Effect effect_with_counts(Index zeros, Index ones, Index fuzzy, double margin, Rng& rng,
                          const Tolerance& tol = {});

Effect gen_effect(Index d, Rng& rng, EffectProfile profile, const Tolerance& tol = {});
Effect gen_effect(Index d, std::uint64_t seed, EffectProfile profile, const Tolerance& tol = {});
/// Direct sum of per-block effects, so the result lies in m.
Effect gen_effect(const BlockAlgebra& m, Rng& rng, EffectProfile profile, const Tolerance& tol = {});

BlockAlgebra random_algebra(Index d, Rng& rng);

/// Throws InvalidClassCombination for impossible requests (e.g. UnitalNotTp with
/// d = 1 or k = 1, MeasurePrepare with k != d).
KrausFamily gen_kraus(Index d, Index k, Rng& rng, KrausClass cls, const Tolerance& tol = {});
KrausFamily gen_kraus(Index d, Index k, std::uint64_t seed, KrausClass cls,
                      const Tolerance& tol = {});

}  // namespace qeffects
