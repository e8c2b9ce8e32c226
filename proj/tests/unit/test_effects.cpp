#include <doctest.h>

#include "../oracle.hpp"
#include "expect_error.hpp"
#include "qeffects/effects.hpp"
#include "qeffects/generators.hpp"

using namespace qeffects;

namespace {

const Matrix kHalfHalf = oracle::mat2(0.5, 0.5, 0.5, 0.5);

Effect eff(const Matrix& m) { return Effect::create(m); }

}  // namespace

TEST_CASE("effect construction") {
  CHECK_NOTHROW(eff(oracle::diag({0.0, 1.0})));
  CHECK(code_of([] { eff(oracle::diag({0.5, 1.2})); }) == ErrorCode::InvalidEffect);
  CHECK(code_of([] { eff(oracle::mat2(0.5, 0.1, 0.0, 0.5)); }) == ErrorCode::NotHermitian);
  // Snapping.
  const Effect a = eff(oracle::diag({1e-12, 1.0 - 1e-12}));
  CHECK(a.eigenvalues()(0) == 0.0);
  CHECK(a.eigenvalues()(1) == 1.0);
  CHECK(oracle::near(a.negation().matrix(), oracle::diag({1.0 - 1e-12, 1e-12}), 1e-15));
}

TEST_CASE("sequential product") {
  const Effect r = sequential_product(eff(oracle::diag({1, 0})), eff(kHalfHalf));
  CHECK(oracle::near(r.matrix(), oracle::diag({0.5, 0.0}), 1e-14));
  Rng rng(41);
  for (Index d = 1; d <= 5; ++d) {
    const Effect a = gen_effect(d, rng, EffectProfile::Generic);
    const Effect b = gen_effect(d, rng, EffectProfile::Generic);
    const Matrix s = psd_sqrt(a.matrix());
    const Matrix expect = oracle::multiply(oracle::multiply(s, b.matrix()), s);
    CHECK((sequential_product(a, b).matrix() - expect).norm() <= 1e-12);
    // Product with the identity effect.
    CHECK((sequential_product(a, eff(identity(d))).matrix() - a.matrix()).norm() <= 1e-12);
  }
}

TEST_CASE("fuzzy projection") {
  CHECK(oracle::near(fuzzy_projection(eff(0.5 * identity(2))), identity(2), 1e-12));
  Rng rng(42);
  CHECK(oracle::near(fuzzy_projection(eff(random_projection(3, 1, rng))), Matrix::Zero(3, 3), 1e-12));
  CHECK(oracle::near(fuzzy_projection(eff(oracle::diag({0.5, 0.0}))), oracle::diag({1, 0}), 1e-12));
  for (Index d = 1; d <= 6; ++d)
    for (int t = 0; t < 10; ++t) {
      const Effect a = gen_effect(d, rng, EffectProfile::Margin);
      const auto pr = effect_projections(a);
      CHECK((pr.range + pr.kernel - identity(d)).norm() < 1e-12);
      CHECK((pr.fuzzy + pr.kernel + pr.negation_kernel - identity(d)).norm() < 1e-12);
      const Matrix aa = a.matrix() * (identity(d) - a.matrix());
      // A(I - A) <= 1/4; margin eigenvalues put the nonzero part above ~1e-4.
      CHECK(oracle::rank(pr.fuzzy, 1e-6, 1.0) == oracle::rank(aa, 1e-6, 0.25));
    }
}

TEST_CASE("murray-von neumann order") {
  const auto m2 = BlockAlgebra::full(2);
  CHECK(mvn_leq(oracle::diag({1, 0}), identity(2), m2));
  CHECK_FALSE(mvn_leq(identity(2), oracle::diag({1, 0}), m2));
  const auto m22 = BlockAlgebra::create({2, 2});
  const Matrix p = oracle::diag({1, 0, 0, 0}), q = oracle::diag({0, 0, 1, 0});
  CHECK(block_ranks(p, m22) == std::vector<Index>{1, 0});
  CHECK_FALSE(mvn_leq(p, q, m22));
  CHECK_FALSE(mvn_leq(q, p, m22));
  CHECK(mvn_equivalent(p, q, BlockAlgebra::full(4)));
  Rng rng(43);
  for (int t = 0; t < 10; ++t) {
    const Matrix x = random_projection(5, t % 6, rng);
    CHECK(mvn_leq(x, x, BlockAlgebra::full(5)));
  }
  CHECK(code_of([&] { mvn_leq(oracle::mat2(0.5, 0.5, 0.5, 0.5), identity(2), m22); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("sharpness classification") {
  const auto m2 = BlockAlgebra::full(2);
  auto s = classify_sharpness(eff(oracle::diag({0.5, 0.0})), m2);
  CHECK(s.almost_sharp);
  CHECK_FALSE(s.nearly_sharp);
  s = classify_sharpness(eff(0.5 * identity(2)), m2);
  CHECK_FALSE(s.almost_sharp);
  Rng rng(44);
  for (Index d = 1; d <= 6; ++d) {
    s = classify_sharpness(eff(random_projection(d, d / 2, rng)), BlockAlgebra::full(d));
    CHECK(s.almost_sharp);
    CHECK(s.nearly_sharp);
  }
  // Within a smaller algebra the comparison is per block.
  const auto m11 = BlockAlgebra::create({1, 1});
  s = classify_sharpness(eff(oracle::diag({0.5, 0.0})), m11);
  CHECK_FALSE(s.almost_sharp);
  CHECK(code_of([&] { classify_sharpness(eff(kHalfHalf), m11); }) == ErrorCode::NotInAlgebra);
}

TEST_CASE("pqp decomposition") {
  auto w = pqp_decompose(eff(oracle::diag({0.5, 0.0})));
  CHECK(oracle::near(w.p, oracle::diag({1, 0}), 1e-12));
  CHECK(oracle::near(w.q, kHalfHalf, 1e-12));

  Rng rng(45);
  const Matrix p = random_projection(4, 2, rng);
  w = pqp_decompose(eff(p));
  CHECK(oracle::near(w.p, p, 1e-12));
  CHECK(oracle::near(w.q, p, 1e-12));

  CHECK(code_of([] { pqp_decompose(eff(0.5 * identity(2))); }) == ErrorCode::NotAlmostSharp);

  for (Index d = 2; d <= 6; ++d)
    for (int t = 0; t < 10; ++t) {
      const Index fuzzy = 1 + t % (d / 2);
      const Index zeros = fuzzy + (t % 2) * (d - 2 * fuzzy);
      const Effect a = effect_with_counts(zeros, d - zeros - fuzzy, fuzzy, 1e-4, rng);
      const auto pq = pqp_decompose(a);
      const Matrix pqp = oracle::multiply(oracle::multiply(pq.p, pq.q), pq.p);
      CHECK((pqp - a.matrix()).norm() <= 1e-9 * static_cast<double>(d));
      CHECK((pq.q * pq.q - pq.q).norm() <= 1e-9);
      CHECK((pq.p * pq.p - pq.p).norm() <= 1e-9);

      // One fuzzy eigenvalue too many for the kernel.
      const Index z2 = std::min<Index>(fuzzy, d - fuzzy - 1);
      if (z2 + fuzzy + 1 <= d) {
        const Effect bad = effect_with_counts(z2, d - z2 - fuzzy - 1, fuzzy + 1, 1e-4, rng);
        CHECK(code_of([&] { pqp_decompose(bad); }) == ErrorCode::NotAlmostSharp);
      }
    }
}

TEST_CASE("blockwise pqp stays in the algebra") {
  Rng rng(46);
  for (int t = 0; t < 20; ++t) {
    const Index d = 2 + t % 5;
    const auto m = random_algebra(d, rng);
    const Effect a = gen_effect(m, rng, EffectProfile::WithKernel);
    if (!classify_sharpness(a, m).almost_sharp) {
      CHECK(code_of([&] { pqp_decompose(a, m); }) == ErrorCode::NotAlmostSharp);
      continue;
    }
    const auto w = pqp_decompose(a, m);
    CHECK(m.off_block_norm(w.p) <= 1e-12);
    CHECK(m.off_block_norm(w.q) <= 1e-12);
    CHECK((w.p * w.q * w.p - a.matrix()).norm() <= 1e-9 * static_cast<double>(d));
  }
}

TEST_CASE("sequential projection tests") {
  const Matrix p = oracle::diag({1, 0});
  auto s = seq_projection_tests(p, eff(oracle::diag({1.0, 1.0 / 3.0})));
  CHECK((s.product_is_projection && s.trace_identity && s.pa_is_projection && s.pa_idempotent));
  s = seq_projection_tests(p, eff(kHalfHalf));
  CHECK_FALSE(s.product_is_projection);
  CHECK_FALSE(s.trace_identity);
  CHECK_FALSE(s.pa_is_projection);
  CHECK_FALSE(s.pa_idempotent);
  CHECK(s.trace_gap == doctest::Approx(0.25));
  Rng rng(47);
  for (Index d = 1; d <= 5; ++d) {
    s = seq_projection_tests(identity(d), eff(random_projection(d, (d + 1) / 2, rng)));
    CHECK((s.product_is_projection && s.trace_identity && s.pa_is_projection && s.pa_idempotent));
  }
  for (int t = 0; t < 100; ++t) {
    const Index d = 1 + t % 6;
    const Matrix q = random_projection(d, rng.uniform_int(0, static_cast<int>(d)), rng);
    const Effect a = gen_effect(d, rng, t % 2 ? EffectProfile::WithFixedPart : EffectProfile::Generic);
    const auto r = seq_projection_tests(q, a);
    CHECK(r.agree());
    CHECK(r.commutes_when_projection);
  }
}

TEST_CASE("order interval sampling") {
  const auto zero = interval_sample(Matrix::Zero(3, 3), 5, 1);
  REQUIRE(zero.size() == 5);
  for (const auto& a : zero) CHECK(a.matrix().norm() < 1e-14);
  const auto corner = interval_sample(oracle::diag({1, 0}), 20, 2);
  for (const auto& a : corner) {
    CHECK(std::abs(a.matrix()(1, 1)) + std::abs(a.matrix()(0, 1)) + std::abs(a.matrix()(1, 0)) < 1e-14);
    CHECK(a.matrix()(0, 0).real() >= 0.0);
    CHECK(a.matrix()(0, 0).real() <= 1.0);
  }
  Rng rng(48);
  const Matrix p = random_projection(4, 2, rng);
  for (const auto& a : interval_sample(p, 20, 3)) {
    CHECK(lambda_min(hermitian_part(p - a.matrix())) >= -1e-10);
    CHECK((p * a.matrix() - a.matrix()).norm() <= 1e-10);
  }
}

TEST_CASE("interval sharpness threshold") {
  auto v = interval_sharpness_check(oracle::diag({1, 0}), BlockAlgebra::full(2), 30, 1);
  CHECK(v.subequivalent);
  CHECK(v.samples_almost_sharp == v.samples_checked);
  CHECK(v.holds);
  v = interval_sharpness_check(identity(2), BlockAlgebra::full(2), 30, 1);
  CHECK_FALSE(v.subequivalent);
  CHECK_FALSE(v.witness_almost_sharp);
  CHECK(v.holds);
  v = interval_sharpness_check(oracle::diag({1, 0, 0}), BlockAlgebra::full(3), 30, 1);
  CHECK(v.subequivalent);
  CHECK(v.samples_almost_sharp == 30);
}

TEST_CASE("commuting decomposition") {
  const auto m2 = BlockAlgebra::full(2);
  const auto r = commuting_decomposition(eff(oracle::diag({0.5, 0.25})), oracle::diag({1, 0}), m2);
  const double s3 = std::sqrt(3.0);
  CHECK(oracle::near(r.p1, oracle::diag({1, 0}), 1e-12));
  CHECK(oracle::near(r.q1, kHalfHalf, 1e-12));
  CHECK(oracle::near(r.p2, oracle::diag({0, 1}), 1e-12));
  CHECK(oracle::near(r.q2, oracle::mat2(0.75, s3 / 4, s3 / 4, 0.25), 1e-12));
  CHECK(r.residual <= 1e-12);

  const Matrix p = oracle::diag({1, 0});
  const auto rp = commuting_decomposition(eff(p), p, m2);
  CHECK(oracle::near(rp.p1, p, 1e-12));
  CHECK(oracle::near(rp.q1, p, 1e-12));
  CHECK(rp.p2.norm() < 1e-12);
  CHECK(rp.q2.norm() < 1e-12);

  CHECK(code_of([&] {
          commuting_decomposition(eff(0.5 * (identity(2) + oracle::sigma_x())), p, m2);
        }) == ErrorCode::NotCommuting);
  CHECK(code_of([&] {
          commuting_decomposition(eff(oracle::diag({0.5, 0.25, 0.1})), oracle::diag({1, 0, 0}),
                                  BlockAlgebra::full(3));
        }) == ErrorCode::HypothesisFailed);
}
