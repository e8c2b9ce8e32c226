#include "qeffects/effects.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qeffects/random.hpp"

namespace qeffects {

namespace {

double snap(double x, double tol) {
  if (std::abs(x) <= tol) return 0.0;
  if (std::abs(x - 1.0) <= tol) return 1.0;
  return x;
}

void check_spectrum(const RealVector& values, const Tolerance& tol) {
  for (Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (!(v >= -tol.snap && v <= 1.0 + tol.snap)) {
      std::ostringstream msg;
      msg << "eigenvalue " << v << " lies outside [0, 1]";
      throw Error(ErrorCode::InvalidEffect, msg.str());
    }
  }
}

Matrix projector_onto(const Matrix& vectors, const std::vector<Index>& columns) {
  Matrix p = Matrix::Zero(vectors.rows(), vectors.rows());
  for (Index j : columns) p.noalias() += vectors.col(j) * vectors.col(j).adjoint();
  return p;
}

void require_projection(const Matrix& p, const Tolerance& tol, const char* what) {
  require_square(p, what);
  if (!is_projection(p, tol.rank)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " is not a projection");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Effect

Effect Effect::create(const Matrix& a, const Tolerance& tol) {
  SpectralDecomposition sd = hermitian_spectral(a, tol);
  check_spectrum(sd.eigenvalues, tol);
  for (Index i = 0; i < sd.eigenvalues.size(); ++i) {
    sd.eigenvalues(i) = std::clamp(snap(sd.eigenvalues(i), tol.snap), 0.0, 1.0);
  }
  return Effect(hermitian_part(a), std::move(sd.eigenvalues), std::move(sd.eigenvectors));
}

Effect Effect::from_spectrum(RealVector values, Matrix vectors, const Tolerance& tol) {
  if (vectors.rows() != vectors.cols() || vectors.cols() != values.size() || values.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "spectral data has inconsistent shape");
  }
  require_finite(vectors, "eigenvectors");
  check_spectrum(values, tol);
  const Index d = values.size();
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return values(i) < values(j); });
  RealVector sorted(d);
  Matrix sorted_vectors(d, d);
  for (Index k = 0; k < d; ++k) {
    sorted(k) = std::clamp(values(order[static_cast<std::size_t>(k)]), 0.0, 1.0);
    sorted_vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  Matrix m = hermitian_part(sorted_vectors * sorted.cast<Complex>().asDiagonal() *
                            sorted_vectors.adjoint());
  return Effect(std::move(m), std::move(sorted), std::move(sorted_vectors));
}

Effect Effect::negation() const {
  const Index d = dim();
  RealVector values = (1.0 - eigenvalues_.array()).reverse();
  Matrix vectors = eigenvectors_.rowwise().reverse();
  return Effect(identity(d) - matrix_, std::move(values), std::move(vectors));
}

// ---------------------------------------------------------------------------
// BlockAlgebra

BlockAlgebra BlockAlgebra::full(Index d) { return create({d}); }

BlockAlgebra BlockAlgebra::create(std::vector<Index> block_dims) {
  if (block_dims.empty()) {
    throw Error(ErrorCode::InvalidArgument, "a block algebra needs at least one block");
  }
  BlockAlgebra m;
  for (Index n : block_dims) {
    if (n <= 0) throw Error(ErrorCode::InvalidArgument, "block dimensions must be positive");
    m.offsets_.push_back(m.dim_);
    m.dim_ += n;
  }
  m.block_dims_ = std::move(block_dims);
  return m;
}

Matrix BlockAlgebra::block(const Matrix& x, std::size_t b) const {
  return x.block(offsets_[b], offsets_[b], block_dims_[b], block_dims_[b]);
}

Matrix BlockAlgebra::compress(const Matrix& x) const {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t b = 0; b < blocks(); ++b) {
    out.block(offsets_[b], offsets_[b], block_dims_[b], block_dims_[b]) = block(x, b);
  }
  return out;
}

double BlockAlgebra::off_block_norm(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "matrix does not match block algebra dimension");
  }
  return (x - compress(x)).norm();
}

void BlockAlgebra::require_member(const Matrix& x, double tol, const char* what) const {
  const double off = off_block_norm(x);
  if (off > tol) {
    std::ostringstream msg;
    msg << what << " has off-block norm " << off;
    throw Error(ErrorCode::NotInAlgebra, msg.str());
  }
}

// ---------------------------------------------------------------------------
// Projections and comparison

bool is_projection(const Matrix& x, double tol) {
  if (x.rows() != x.cols()) return false;
  return hermiticity_defect(x) <= tol && (x * x - x).norm() <= tol;
}

bool projection_leq(const Matrix& x, const Matrix& y, double tol) {
  return (x * y - x).norm() <= tol;
}

Effect sequential_product(const Effect& a, const Effect& b, const Tolerance& tol) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "sequential product of effects of different size");
  }
  const Matrix root = psd_sqrt(a.matrix(), tol);
  return Effect::create(hermitian_part(root * b.matrix() * root), tol);
}

EffectProjections effect_projections(const Effect& a) {
  const Index d = a.dim();
  std::vector<Index> zeros, ones;
  for (Index i = 0; i < d; ++i) {
    if (a.eigenvalues()(i) == 0.0) zeros.push_back(i);
    if (a.eigenvalues()(i) == 1.0) ones.push_back(i);
  }
  EffectProjections out;
  out.kernel = hermitian_part(projector_onto(a.eigenvectors(), zeros));
  out.negation_kernel = hermitian_part(projector_onto(a.eigenvectors(), ones));
  out.range = identity(d) - out.kernel;
  out.fuzzy = identity(d) - out.kernel - out.negation_kernel;
  return out;
}

Matrix fuzzy_projection(const Effect& a, const Tolerance& tol) {
  const Matrix formula = effect_projections(a).fuzzy;
  const Matrix& m = a.matrix();
  const Matrix product = hermitian_part(m * (identity(a.dim()) - m));
  // A(I - A) never exceeds 1/4; ranking against that keeps round-off at zero.
  const Matrix direct = range_kernel_projections(product, tol, 0.25).range;
  const double gap = (formula - direct).norm();
  if (gap > 10.0 * tol.rank) {
    std::ostringstream msg;
    msg << "I - N_A - N_A' and the range projection of A(I - A) differ by " << gap;
    throw Error(ErrorCode::FormulaMismatch, msg.str());
  }
  return formula;
}

std::vector<Index> block_ranks(const Matrix& projection, const BlockAlgebra& m) {
  std::vector<Index> ranks;
  ranks.reserve(m.blocks());
  for (std::size_t b = 0; b < m.blocks(); ++b) {
    const RealVector ev = hermitian_eigenvalues(m.block(projection, b));
    ranks.push_back((ev.array() > 0.5).count());
  }
  return ranks;
}

bool mvn_leq(const Matrix& p, const Matrix& q, const BlockAlgebra& m, const Tolerance& tol) {
  m.require_member(p, tol.rank, "left projection");
  m.require_member(q, tol.rank, "right projection");
  const auto rp = block_ranks(p, m);
  const auto rq = block_ranks(q, m);
  for (std::size_t b = 0; b < rp.size(); ++b) {
    if (rp[b] > rq[b]) return false;
  }
  return true;
}

bool mvn_equivalent(const Matrix& p, const Matrix& q, const BlockAlgebra& m,
                    const Tolerance& tol) {
  return mvn_leq(p, q, m, tol) && mvn_leq(q, p, m, tol);
}

SharpnessReport classify_sharpness(const Effect& a, const BlockAlgebra& m, const Tolerance& tol) {
  if (m.dim() != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "block algebra does not match effect dimension");
  }
  m.require_member(a.matrix(), tol.rank, "effect");
  SharpnessReport r;
  r.projections = effect_projections(a);
  r.range_ranks = block_ranks(r.projections.range, m);
  r.kernel_ranks = block_ranks(r.projections.kernel, m);
  r.negation_kernel_ranks = block_ranks(r.projections.negation_kernel, m);
  r.fuzzy_ranks = block_ranks(r.projections.fuzzy, m);
  r.almost_sharp = true;
  bool negation_ok = true;
  for (std::size_t b = 0; b < m.blocks(); ++b) {
    if (r.fuzzy_ranks[b] > r.kernel_ranks[b]) r.almost_sharp = false;
    if (r.fuzzy_ranks[b] > r.negation_kernel_ranks[b]) negation_ok = false;
  }
  r.nearly_sharp = r.almost_sharp && negation_ok;
  return r;
}

// ---------------------------------------------------------------------------
// PQP construction

PqpWitness pqp_decompose(const Effect& a, const Tolerance& /*tol*/) {
  const Index d = a.dim();
  const RealVector& lambda = a.eigenvalues();
  const Matrix& u = a.eigenvectors();
  std::vector<Index> kernel, fuzzy, sharp;
  for (Index i = 0; i < d; ++i) {
    if (lambda(i) == 0.0) {
      kernel.push_back(i);
    } else if (lambda(i) == 1.0) {
      sharp.push_back(i);
    } else {
      fuzzy.push_back(i);
    }
  }
  if (fuzzy.size() > kernel.size()) {
    std::ostringstream msg;
    msg << fuzzy.size() << " fuzzy eigenvalues but only " << kernel.size()
        << " kernel dimensions";
    throw Error(ErrorCode::NotAlmostSharp, msg.str());
  }
  PqpWitness w;
  w.p = identity(d) - projector_onto(u, kernel);
  w.q = projector_onto(u, sharp);
  // Each fuzzy eigenvector u_i is paired with a kernel eigenvector w_i; the
  // unit vector sqrt(l) u_i + sqrt(1 - l) w_i compresses to l u_i u_i* under P_A.
  for (std::size_t k = 0; k < fuzzy.size(); ++k) {
    const double l = lambda(fuzzy[k]);
    const Vector v = std::sqrt(l) * u.col(fuzzy[k]) + std::sqrt(1.0 - l) * u.col(kernel[k]);
    w.q.noalias() += v * v.adjoint();
  }
  w.p = hermitian_part(w.p);
  w.q = hermitian_part(w.q);
  return w;
}

PqpWitness pqp_decompose(const Effect& a, const BlockAlgebra& m, const Tolerance& tol) {
  if (m.dim() != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "block algebra does not match effect dimension");
  }
  if (m.blocks() == 1) return pqp_decompose(a, tol);
  m.require_member(a.matrix(), tol.rank, "effect");
  PqpWitness w{Matrix::Zero(a.dim(), a.dim()), Matrix::Zero(a.dim(), a.dim())};
  for (std::size_t b = 0; b < m.blocks(); ++b) {
    const Effect part = Effect::create(m.block(a.matrix(), b), tol);
    PqpWitness wb;
    try {
      wb = pqp_decompose(part, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotAlmostSharp) throw;
      throw Error(ErrorCode::NotAlmostSharp, "block " + std::to_string(b) + ": " + e.what());
    }
    const Index o = m.offset(b);
    const Index n = m.block_dims()[b];
    w.p.block(o, o, n, n) = wb.p;
    w.q.block(o, o, n, n) = wb.q;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Sequential products with a projection

SequentialProjectionTests seq_projection_tests(const Matrix& p, const Effect& a,
                                               const Tolerance& tol) {
  require_projection(p, tol, "P");
  if (p.rows() != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "projection and effect differ in size");
  }
  const double t = tol.rank;
  const Matrix& am = a.matrix();
  const Matrix root = psd_sqrt(hermitian_part(p), tol);
  const Matrix product = root * am * root;
  const Matrix pa = p * am;

  SequentialProjectionTests r;
  r.product_is_projection = is_projection(product, t);
  r.trace_gap = std::abs(pa.trace() - (pa * pa).trace());
  r.trace_identity = r.trace_gap <= t;
  r.pa_is_projection = is_projection(pa, t);
  r.pa_idempotent = (pa * pa - pa).norm() <= t;
  r.commutator_norm = (am * p - pa).norm();
  r.commutes_when_projection = !r.product_is_projection || r.commutator_norm <= 10.0 * t;
  return r;
}

// ---------------------------------------------------------------------------
// Order intervals

std::vector<Effect> interval_sample(const Matrix& p, int count, std::uint64_t seed,
                                    const BlockAlgebra& m, const Tolerance& tol) {
  require_projection(p, tol, "P");
  m.require_member(p, tol.rank, "P");
  const Index d = p.rows();
  Rng rng(seed);
  std::vector<Effect> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int s = 0; s < count; ++s) {
    Matrix g(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) g(i, j) = rng.complex_normal();
    g = m.compress(g);
    const Matrix x = hermitian_part(p * g * g.adjoint() * p);
    const double top = lambda_max(x);
    // Every fourth sample touches the top of the interval.
    const double scale = (s % 4 == 3) ? 1.0 : rng.uniform(0.05, 1.0);
    Matrix a = top > 0.0 ? Matrix(x * (scale / top)) : Matrix(Matrix::Zero(d, d));
    if (lambda_min(hermitian_part(p - a)) < -tol.spec || lambda_min(a) < -tol.spec) {
      throw Error(ErrorCode::InvalidEffect, "interval sample escaped [0, P]");
    }
    out.push_back(Effect::create(a, tol));
  }
  return out;
}

std::vector<Effect> interval_sample(const Matrix& p, int count, std::uint64_t seed,
                                    const Tolerance& tol) {
  return interval_sample(p, count, seed, BlockAlgebra::full(p.rows()), tol);
}

IntervalVerdict interval_sharpness_check(const Matrix& p, const BlockAlgebra& m, int samples,
                                  std::uint64_t seed, const Tolerance& tol) {
  require_projection(p, tol, "P");
  if (m.dim() != p.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "block algebra does not match projection size");
  }
  const Matrix complement = identity(p.rows()) - p;
  IntervalVerdict v;
  v.subequivalent = mvn_leq(p, complement, m, tol);
  for (const Effect& a : interval_sample(p, samples, seed, m, tol)) {
    ++v.samples_checked;
    if (classify_sharpness(a, m, tol).almost_sharp) ++v.samples_almost_sharp;
  }
  const Effect witness = Effect::create(0.5 * hermitian_part(p), tol);
  v.witness_almost_sharp = classify_sharpness(witness, m, tol).almost_sharp;
  if (v.subequivalent) {
    v.holds = v.samples_almost_sharp == v.samples_checked && v.witness_almost_sharp;
  } else {
    v.holds = !v.witness_almost_sharp;
  }
  return v;
}

CommutingDecomposition commuting_decomposition(const Effect& a, const Matrix& p,
                                               const BlockAlgebra& m, const Tolerance& tol) {
  require_projection(p, tol, "P");
  if (p.rows() != a.dim() || m.dim() != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "effect, projection and algebra differ in size");
  }
  m.require_member(a.matrix(), tol.rank, "effect");
  const Matrix& am = a.matrix();
  const double commutator = (am * p - p * am).norm();
  if (commutator > tol.spec) {
    std::ostringstream msg;
    msg << "||AP - PA||_F = " << commutator;
    throw Error(ErrorCode::NotCommuting, msg.str());
  }
  const Matrix complement = identity(a.dim()) - p;
  if (!mvn_equivalent(p, complement, m, tol)) {
    throw Error(ErrorCode::HypothesisFailed, "P is not equivalent to I - P in every block");
  }
  const Effect upper = Effect::create(hermitian_part(p * am * p), tol);
  const Effect lower = Effect::create(hermitian_part(complement * am * complement), tol);
  const PqpWitness w1 = pqp_decompose(upper, m, tol);
  const PqpWitness w2 = pqp_decompose(lower, m, tol);
  CommutingDecomposition out{w1.p, w1.q, w2.p, w2.q, 0.0};
  out.residual = (w1.p * w1.q * w1.p + w2.p * w2.q * w2.p - am).norm();
  return out;
}

}  // namespace qeffects
