#include <doctest.h>

#include "../oracle.hpp"
#include "expect_error.hpp"
#include "qeffects/funcalc.hpp"
#include "qeffects/generators.hpp"

using namespace qeffects;

namespace {

Effect eff(const Matrix& m) { return Effect::create(m); }

}  // namespace

TEST_CASE("function specs") {
  CHECK(FunctionSpec::power(2)(0.5) == 0.25);
  CHECK(FunctionSpec::smoothstep()(0.5) == doctest::Approx(0.5));
  CHECK(FunctionSpec::step(0.5)(0.5) == 1.0);
  CHECK(FunctionSpec::step(0.5)(0.49) == 0.0);
  CHECK(FunctionSpec::piecewise_linear({{0, 0}, {0.5, 0.8}, {1, 1}})(0.25) == doctest::Approx(0.4));
  CHECK(FunctionSpec::perturbed_identity(0.1, 2)(0.125) ==
        doctest::Approx(0.125 + 0.1 * std::sin(2 * M_PI * 2 * 0.125)));
  CHECK(code_of([] { FunctionSpec::power(0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { FunctionSpec::step(0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { FunctionSpec::piecewise_linear({{0, 0}, {0.5, 1}}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { FunctionSpec::polynomial({}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { FunctionSpec::perturbed_identity(0.1, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("apply function") {
  Rng rng(51);
  for (Index d = 1; d <= 5; ++d) {
    const Effect a = gen_effect(d, rng, EffectProfile::Generic);
    CHECK((apply_function(a, FunctionSpec::identity()).matrix() - a.matrix()).norm() <= 1e-12);
    // Power round trip and agreement with matrix products.
    const Effect sq = apply_function(a, FunctionSpec::power(2));
    CHECK((sq.matrix() - oracle::multiply(a.matrix(), a.matrix())).norm() <= 1e-12);
    const Effect back = apply_function(sq, FunctionSpec::power(0.5));
    CHECK((back.matrix() - a.matrix()).norm() <= 1e-9);
  }
  CHECK(oracle::near(apply_function(eff(oracle::diag({0.25, 1})), FunctionSpec::power(2)).matrix(),
                     oracle::diag({1.0 / 16, 1}), 1e-15));
  CHECK(oracle::near(apply_function(eff(oracle::diag({0.25, 0.75})), FunctionSpec::step(0.5)).matrix(),
                     oracle::diag({0, 1}), 1e-15));
  CHECK(code_of([] {
          apply_function(eff(oracle::diag({0.25, 0.75})), FunctionSpec::polynomial({0, 2}));
        }) == ErrorCode::RangeViolation);
}

TEST_CASE("kernel condition on a grid") {
  CHECK(check_kernel_condition(FunctionSpec::identity()).passes);
  CHECK(check_kernel_condition(FunctionSpec::power(2)).passes);
  CHECK(check_kernel_condition(FunctionSpec::power(0.5)).passes);
  CHECK(check_kernel_condition(FunctionSpec::smoothstep()).passes);
  auto v = check_kernel_condition(FunctionSpec::step(0.5));
  CHECK_FALSE(v.passes);
  CHECK(v.endpoints);
  CHECK_FALSE(v.strictly_monotone);
  v = check_kernel_condition(FunctionSpec::perturbed_identity(0.1, 2));
  CHECK(v.endpoints);
  CHECK_FALSE(v.passes);
  CHECK_FALSE(check_kernel_condition(FunctionSpec::polynomial({0.1, 0.9})).endpoints);
  CHECK(code_of([] { check_kernel_condition(FunctionSpec::identity(), 2); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("kernel ordering") {
  const Effect a = eff(oracle::diag({0, 0.5, 1}));
  const Effect ha = apply_function(a, FunctionSpec::power(2));
  CHECK(oracle::near(effect_projections(ha).kernel, oracle::diag({1, 0, 0}), 1e-12));
  auto v = kernel_ordering_check(a, FunctionSpec::power(2));
  CHECK(v.kernel_condition);
  CHECK(v.equalities);
  CHECK(v.holds);

  const Effect b = eff(oracle::diag({0.25, 0.75}));
  CHECK(oracle::near(effect_projections(apply_function(b, FunctionSpec::step(0.5))).kernel,
                     oracle::diag({1, 0}), 1e-12));
  v = kernel_ordering_check(b, FunctionSpec::step(0.5));
  CHECK_FALSE(v.kernel_condition);
  CHECK(v.kernel_leq);
  CHECK(v.holds);

  Rng rng(52);
  const Matrix p = random_projection(4, 2, rng);
  for (const auto& h : {FunctionSpec::power(0.5), FunctionSpec::power(3), FunctionSpec::smoothstep()}) {
    CHECK((apply_function(eff(p), h).matrix() - p).norm() <= 1e-12);
    CHECK(kernel_ordering_check(eff(p), h).holds);
  }
}

TEST_CASE("sharpness invariance") {
  const auto m2 = BlockAlgebra::full(2);
  auto v = invariance_check(eff(oracle::diag({0.5, 0})), FunctionSpec::power(2), m2);
  CHECK(v.almost_before);
  CHECK(v.almost_after);
  CHECK_FALSE(v.nearly_before);
  CHECK_FALSE(v.nearly_after);
  CHECK(v.holds);
  v = invariance_check(eff(0.5 * identity(2)), FunctionSpec::power(3), m2);
  CHECK_FALSE(v.almost_before);
  CHECK_FALSE(v.almost_after);
  CHECK(v.holds);
  v = invariance_check(eff(oracle::diag({0.5, 0})), FunctionSpec::step(0.75), m2);
  CHECK(v.almost_after);
  CHECK(v.holds);

  Rng rng(53);
  for (Index d = 2; d <= 5; ++d)
    for (int t = 0; t < 10; ++t) {
      const auto m = random_algebra(d, rng);
      const Effect a = gen_effect(m, rng, EffectProfile::Margin);
      CHECK(invariance_check(a, FunctionSpec::power(0.5), m).holds);
      CHECK(invariance_check(a, FunctionSpec::step(0.5), m).holds);
    }
}
