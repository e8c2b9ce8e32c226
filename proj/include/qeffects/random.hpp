#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>

#include "qeffects/linalg.hpp"

namespace qeffects {

/// Seedable source with a platform-independent output sequence.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// distributions are not, so uniform and normal variates are derived here by
/// hand (53-bit mantissa uniforms, Box-Muller normals).
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64/splitmix64/box-muller";
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();                     // [0, 1)
  double uniform(double lo, double hi); // [lo, hi)
  int uniform_int(int lo, int hi);      // inclusive
  double normal();
  Complex complex_normal();             // E|z|^2 = 1
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic seed for an independent sub-stream, e.g. one trial.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> stream);

}  // namespace qeffects
