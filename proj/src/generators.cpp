#include "qeffects/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/QR>

namespace qeffects {

namespace {

struct ClassName {
  KrausClass cls;
  const char* name;
};

constexpr ClassName kClassNames[] = {
    {KrausClass::General, "general"},
    {KrausClass::TracePreserving, "trace_preserving"},
    {KrausClass::Unital, "unital"},
    {KrausClass::SelfAdjoint, "self_adjoint"},
    {KrausClass::Commutative, "commutative"},
    {KrausClass::UnitalNotTp, "unital_not_tp"},
    {KrausClass::TraceNonincreasing, "trace_nonincreasing"},
    {KrausClass::MeasurePrepare, "measure_prepare"},
};

struct ProfileName {
  EffectProfile profile;
  const char* name;
};

constexpr ProfileName kProfileNames[] = {
    {EffectProfile::Generic, "generic"},
    {EffectProfile::WithKernel, "with_kernel"},
    {EffectProfile::WithFixedPart, "with_fixed_part"},
    {EffectProfile::NearBoundary, "near_boundary"},
    {EffectProfile::Margin, "margin"},
};

void bad_combination(const std::string& msg) {
  throw Error(ErrorCode::InvalidClassCombination, msg);
}

// Block-diagonal embedding of square blocks.
Matrix direct_sum(const std::vector<Matrix>& blocks) {
  Index d = 0;
  for (const auto& b : blocks) d += b.rows();
  Matrix out = Matrix::Zero(d, d);
  Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

// Sample a scale in (0, 1]; half the time exactly 1 so boundary cases are hit.
double boundary_scale(Rng& rng) { return rng.bernoulli(0.5) ? 1.0 : rng.uniform(0.5, 1.0); }

std::vector<Matrix> conjugate_all(const std::vector<Matrix>& ops, const Matrix& w) {
  std::vector<Matrix> out;
  out.reserve(ops.size());
  for (const auto& a : ops) out.push_back(w * a * w.adjoint());
  return out;
}

// k square slices of a block-structured isometry: A_a = W (+)_b V_{b,a} W*, with
// sum_a A_a* A_a = I.
std::vector<Matrix> sliced_isometry(Index d, Index k, const std::vector<Index>& parts, Rng& rng) {
  std::vector<std::vector<Matrix>> per_op(static_cast<std::size_t>(k));
  for (Index n : parts) {
    const Matrix v = random_isometry(k * n, n, rng);
    for (Index a = 0; a < k; ++a) per_op[a].push_back(v.block(a * n, 0, n, n));
  }
  std::vector<Matrix> ops;
  for (const auto& blocks : per_op) ops.push_back(direct_sum(blocks));
  return conjugate_all(ops, random_unitary(d, rng));
}

std::vector<Matrix> scaled(std::vector<Matrix> ops, double c) {
  for (auto& a : ops) a *= c;
  return ops;
}

double outer_lambda_max(const std::vector<Matrix>& ops) {
  return family_bound_excess(ops) + 1.0;
}

std::vector<Matrix> gen_trace_preserving(Index d, Index k, Rng& rng) {
  const auto parts = random_partition(d, rng);
  std::vector<double> weights(static_cast<std::size_t>(k));
  for (auto& w : weights) w = -std::log(1.0 - rng.uniform());
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<Matrix> ops;
  for (Index a = 0; a < k; ++a) {
    std::vector<Matrix> blocks;
    for (Index n : parts) blocks.push_back(random_unitary(n, rng));
    ops.push_back(std::sqrt(weights[a] / total) * direct_sum(blocks));
  }
  return conjugate_all(ops, random_unitary(d, rng));
}

std::vector<Matrix> gen_unital(Index d, Index k, const std::vector<Index>& parts, Rng& rng) {
  auto ops = sliced_isometry(d, k, parts, rng);
  for (auto& a : ops) a = a.adjoint().eval();
  return ops;
}

std::vector<Matrix> gen_self_adjoint(Index d, Index k, Rng& rng) {
  const auto parts = random_partition(d, rng);
  std::vector<Matrix> ops;
  for (Index a = 0; a < k; ++a) {
    std::vector<Matrix> blocks;
    for (Index n : parts) blocks.push_back(random_hermitian(n, rng));
    ops.push_back(direct_sum(blocks));
  }
  ops = conjugate_all(ops, random_unitary(d, rng));
  // Conjugation by a unitary keeps each operator Hermitian only up to round-off.
  for (auto& a : ops) a = hermitian_part(a);
  const double c = boundary_scale(rng) / std::sqrt(outer_lambda_max(ops));
  return scaled(std::move(ops), c);
}

std::vector<Matrix> gen_commutative(Index d, Index k, Rng& rng) {
  const Matrix w = random_unitary(d, rng);
  const auto parts = random_partition(d, rng);
  std::vector<Vector> xi;
  for (std::size_t g = 0; g < parts.size(); ++g) {
    Vector v(k);
    for (Index a = 0; a < k; ++a) v(a) = rng.complex_normal();
    const double r = rng.bernoulli(0.5) ? 1.0 : rng.uniform();
    xi.push_back(v * (r / v.norm()));
  }
  std::vector<Matrix> ops;
  for (Index a = 0; a < k; ++a) {
    Vector diag(d);
    Index i = 0;
    for (std::size_t g = 0; g < parts.size(); ++g)
      for (Index j = 0; j < parts[g]; ++j) diag(i++) = xi[g](a);
    ops.push_back(w * diag.asDiagonal() * w.adjoint());
  }
  return ops;
}

std::vector<Matrix> gen_general(Index d, Index k, Rng& rng) {
  std::vector<Matrix> ops;
  for (Index a = 0; a < k; ++a) ops.push_back(random_ginibre(d, d, rng));
  const double c = 0.95 / std::sqrt(outer_lambda_max(ops));
  return scaled(std::move(ops), c);
}

std::vector<Matrix> gen_trace_nonincreasing(Index d, Index k, Rng& rng) {
  auto ops = sliced_isometry(d, k, random_partition(d, rng), rng);
  const double c = boundary_scale(rng) / std::sqrt(outer_lambda_max(ops));
  return scaled(std::move(ops), c);
}

// A_i = e_i f_i*. Indices in S are absorbing (f_i = e_i); the others map a
// random unit vector of span{e_j : j in S} onto e_i. sum A A* = I always.
std::vector<Matrix> gen_measure_prepare(Index d, Rng& rng) {
  const Matrix e = random_unitary(d, rng);
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = d - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, static_cast<int>(i))]);
  const Index s = d >= 3 ? rng.uniform_int(2, static_cast<int>(d) - 1) : rng.uniform_int(1, static_cast<int>(d));
  std::vector<bool> absorbing(static_cast<std::size_t>(d), false);
  for (Index i = 0; i < s; ++i) absorbing[order[i]] = true;

  std::vector<Matrix> ops;
  for (Index i = 0; i < d; ++i) {
    Vector f;
    if (absorbing[i]) {
      f = e.col(i);
    } else {
      f = Vector::Zero(d);
      for (Index j = 0; j < d; ++j)
        if (absorbing[j]) f += rng.complex_normal() * e.col(j);
      f.normalize();
    }
    ops.push_back(e.col(i) * f.adjoint());
  }
  return ops;
}

}  // namespace

const char* to_string(EffectProfile p) {
  for (const auto& n : kProfileNames)
    if (n.profile == p) return n.name;
  return "?";
}

const char* to_string(KrausClass c) {
  for (const auto& n : kClassNames)
    if (n.cls == c) return n.name;
  return "?";
}

std::optional<KrausClass> parse_kraus_class(std::string_view name) {
  for (const auto& n : kClassNames)
    if (name == n.name) return n.cls;
  return std::nullopt;
}

std::optional<EffectProfile> parse_effect_profile(std::string_view name) {
  for (const auto& n : kProfileNames)
    if (name == n.name) return n.profile;
  return std::nullopt;
}

Matrix random_ginibre(Index rows, Index cols, Rng& rng) {
  Matrix g(rows, cols);
  // Column-major fill order, fixed for reproducibility.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

Matrix random_unitary(Index d, Rng& rng) {
  const Matrix g = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < d; ++i) {
    const double m = std::abs(r(i, i));
    if (m > 0.0) q.col(i) *= r(i, i) / m;
  }
  return q;
}

Matrix random_isometry(Index rows, Index cols, Rng& rng) {
  if (cols > rows) throw Error(ErrorCode::InvalidArgument, "isometry needs cols <= rows");
  return random_unitary(rows, rng).leftCols(cols);
}

Matrix random_hermitian(Index d, Rng& rng) {
  const Matrix g = random_ginibre(d, d, rng);
  return (g + g.adjoint()) * 0.5;
}

Matrix random_projection(Index d, Index rank, Rng& rng) {
  if (rank < 0 || rank > d) throw Error(ErrorCode::InvalidArgument, "projection rank out of range");
  const Matrix v = random_isometry(d, rank, rng);
  return v * v.adjoint();
}

Matrix random_projection(const BlockAlgebra& m, const std::vector<Index>& ranks, Rng& rng) {
  if (ranks.size() != m.blocks()) {
    throw Error(ErrorCode::DimensionMismatch, "one rank per block is required");
  }
  std::vector<Matrix> blocks;
  for (std::size_t b = 0; b < m.blocks(); ++b)
    blocks.push_back(random_projection(m.block_dims()[b], ranks[b], rng));
  return direct_sum(blocks);
}

std::vector<Index> random_partition(Index d, Rng& rng) {
  std::vector<Index> parts;
  if (d <= 0) return parts;
  const double cut = rng.uniform();
  Index run = 1;
  for (Index i = 1; i < d; ++i) {
    if (rng.uniform() < cut) {
      parts.push_back(run);
      run = 1;
    } else {
      ++run;
    }
  }
  parts.push_back(run);
  return parts;
}

Effect effect_with_spectrum(const RealVector& values, Rng& rng, const Tolerance& tol) {
  const Matrix u = random_unitary(values.size(), rng);
  const Matrix a = u * values.cast<Complex>().asDiagonal() * u.adjoint();
  return Effect::create(hermitian_part(a), tol);
}

Effect effect_with_counts(Index zeros, Index ones, Index fuzzy, double margin, Rng& rng,
                          const Tolerance& tol) {
  RealVector v(zeros + ones + fuzzy);
  Index i = 0;
  for (Index j = 0; j < zeros; ++j) v(i++) = 0.0;
  for (Index j = 0; j < ones; ++j) v(i++) = 1.0;
  for (Index j = 0; j < fuzzy; ++j) v(i++) = rng.uniform(margin, 1.0 - margin);
  return effect_with_spectrum(v, rng, tol);
}

Effect gen_effect(Index d, Rng& rng, EffectProfile profile, const Tolerance& tol) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "effect dimension must be >= 1");
  RealVector v(d);
  switch (profile) {
    case EffectProfile::Generic:
      for (Index i = 0; i < d; ++i) v(i) = rng.uniform();
      break;
    case EffectProfile::WithKernel: {
      const int z = rng.uniform_int(1, static_cast<int>(d));
      for (Index i = 0; i < d; ++i) v(i) = i < z ? 0.0 : rng.uniform();
      break;
    }
    case EffectProfile::WithFixedPart: {
      const int o = rng.uniform_int(1, static_cast<int>(d));
      for (Index i = 0; i < d; ++i) v(i) = i < o ? 1.0 : rng.uniform();
      break;
    }
    case EffectProfile::NearBoundary:
      for (Index i = 0; i < d; ++i) {
        const double dist = std::pow(10.0, rng.uniform(-12.0, -3.0));
        v(i) = rng.bernoulli(0.5) ? dist : 1.0 - dist;
      }
      break;
    case EffectProfile::Margin:
      for (Index i = 0; i < d; ++i) {
        const double r = rng.uniform();
        v(i) = r < 0.3 ? 0.0 : r < 0.5 ? 1.0 : rng.uniform(1e-4, 1.0 - 1e-4);
      }
      break;
  }
  return effect_with_spectrum(v, rng, tol);
}

Effect gen_effect(Index d, std::uint64_t seed, EffectProfile profile, const Tolerance& tol) {
  Rng rng(seed);
  return gen_effect(d, rng, profile, tol);
}

Effect gen_effect(const BlockAlgebra& m, Rng& rng, EffectProfile profile, const Tolerance& tol) {
  std::vector<Matrix> blocks;
  for (Index n : m.block_dims()) blocks.push_back(gen_effect(n, rng, profile, tol).matrix());
  return Effect::create(direct_sum(blocks), tol);
}

BlockAlgebra random_algebra(Index d, Rng& rng) { return BlockAlgebra::create(random_partition(d, rng)); }

KrausFamily gen_kraus(Index d, Index k, Rng& rng, KrausClass cls, const Tolerance& tol) {
  if (d < 1 || k < 1) throw Error(ErrorCode::InvalidArgument, "need d >= 1 and k >= 1");
  switch (cls) {
    case KrausClass::General:
      return KrausFamily::create(gen_general(d, k, rng), tol);
    case KrausClass::TracePreserving:
      return KrausFamily::create(gen_trace_preserving(d, k, rng), tol);
    case KrausClass::Unital:
      return KrausFamily::create(gen_unital(d, k, random_partition(d, rng), rng), tol);
    case KrausClass::SelfAdjoint:
      return KrausFamily::create(gen_self_adjoint(d, k, rng), tol);
    case KrausClass::Commutative:
      return KrausFamily::create(gen_commutative(d, k, rng), tol);
    case KrausClass::TraceNonincreasing:
      return KrausFamily::create(gen_trace_nonincreasing(d, k, rng), tol);
    case KrausClass::MeasurePrepare:
      if (k != d) bad_combination("measure_prepare needs k = d");
      return KrausFamily::create(gen_measure_prepare(d, rng), tol);
    case KrausClass::UnitalNotTp: {
      if (d < 2 || k < 2) bad_combination("unital_not_tp needs d >= 2 and k >= 2");
      for (int attempt = 0; attempt < 256; ++attempt) {
        auto family = KrausFamily::create(gen_unital(d, k, {d}, rng), tol);
        // Require a clear margin so the class does not flip under round-off.
        if (lambda_max(family.inner_sum() - identity(d)) > 1e3 * tol.rank) return family;
      }
      bad_combination("unital_not_tp sampling did not leave the trace-nonincreasing set");
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown Kraus class");
}

KrausFamily gen_kraus(Index d, Index k, std::uint64_t seed, KrausClass cls, const Tolerance& tol) {
  Rng rng(seed);
  return gen_kraus(d, k, rng, cls, tol);
}

}  // namespace qeffects
