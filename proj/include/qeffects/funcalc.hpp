#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qeffects/effects.hpp"

namespace qeffects {

namespace fn {

struct Power {
  double t = 1.0;  // x^t, t > 0
};

struct Polynomial {
  std::vector<double> coefficients;  // c0 + c1 x + c2 x^2 + ...
};

struct PiecewiseLinear {
  std::vector<std::pair<double, double>> knots;  // (x, y), x strictly increasing from 0 to 1
};

struct Step {
  double threshold = 0.5;  // 1 on [threshold, 1], 0 below
};

struct PerturbedIdentity {
  double amplitude = 0.0;  // x + amplitude * sin(2 pi frequency x)
  int frequency = 1;
};

}  // namespace fn

/// A serializable function on [0, 1].
class FunctionSpec {
 public:
  using Variant =
      std::variant<fn::Power, fn::Polynomial, fn::PiecewiseLinear, fn::Step, fn::PerturbedIdentity>;

  /// Throws InvalidArgument on malformed parameters.
  explicit FunctionSpec(Variant v);

  static FunctionSpec power(double t) { return FunctionSpec(fn::Power{t}); }
  static FunctionSpec polynomial(std::vector<double> c) { return FunctionSpec(fn::Polynomial{std::move(c)}); }
  static FunctionSpec piecewise_linear(std::vector<std::pair<double, double>> knots) {
    return FunctionSpec(fn::PiecewiseLinear{std::move(knots)});
  }
  static FunctionSpec step(double threshold) { return FunctionSpec(fn::Step{threshold}); }
  static FunctionSpec perturbed_identity(double amplitude, int frequency) {
    return FunctionSpec(fn::PerturbedIdentity{amplitude, frequency});
  }
  static FunctionSpec identity() { return power(1.0); }
  /// 3x^2 - 2x^3
  static FunctionSpec smoothstep() { return polynomial({0.0, 0.0, 3.0, -2.0}); }

  double operator()(double x) const;

  const Variant& value() const { return value_; }
  std::string family() const;
  std::string describe() const;

 private:
  Variant value_;
};

struct KernelConditionVerdict {
  bool in_range = false;
  bool endpoints = false;
  bool strictly_monotone = false;
  bool passes = false;
};

struct KernelOrderingVerdict {
  bool kernel_leq = false;           // N_A <= N_h(A)
  bool negation_kernel_leq = false;  // N_A' <= N_h(A)'
  bool fuzzy_geq = false;            // P_h(A)h(A)' <= P_AA'
  bool kernel_condition = false;
  bool equalities = true;            // only asserted under the kernel condition
  bool holds = false;
};

struct InvarianceVerdict {
  bool biconditional = false;
  bool almost_before = false, nearly_before = false;
  bool almost_after = false, nearly_after = false;
  bool holds = false;
};

/// h(A) = sum_i h(lambda_i) u_i u_i* over the snapped spectrum. Throws
/// RangeViolation when some h(lambda_i) leaves [-tol.snap, 1 + tol.snap].
Effect apply_function(const Effect& a, const FunctionSpec& h, const Tolerance& tol = {});

/// Endpoints exactly; range and strict monotonicity on a uniform grid. A grid
/// pass is necessary but not sufficient for the kernel condition.
KernelConditionVerdict check_kernel_condition(const FunctionSpec& h, int grid_points = 1024);

KernelOrderingVerdict kernel_ordering_check(const Effect& a, const FunctionSpec& h,
                                            const Tolerance& tol = {});

InvarianceVerdict invariance_check(const Effect& a, const FunctionSpec& h, const BlockAlgebra& m,
                                   const Tolerance& tol = {});

}  // namespace qeffects
