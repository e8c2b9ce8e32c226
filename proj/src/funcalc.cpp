#include "qeffects/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qeffects {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

void validate(const FunctionSpec::Variant& v) {
  std::visit(overloaded{
                 [](const fn::Power& f) {
                   if (!std::isfinite(f.t) || f.t <= 0.0) invalid("power exponent must be > 0");
                 },
                 [](const fn::Polynomial& f) {
                   if (f.coefficients.empty()) invalid("polynomial needs coefficients");
                   for (double c : f.coefficients)
                     if (!std::isfinite(c)) invalid("polynomial coefficient is not finite");
                 },
                 [](const fn::PiecewiseLinear& f) {
                   if (f.knots.size() < 2) invalid("piecewise_linear needs at least two knots");
                   if (f.knots.front().first != 0.0 || f.knots.back().first != 1.0)
                     invalid("piecewise_linear knots must start at x=0 and end at x=1");
                   for (std::size_t i = 0; i < f.knots.size(); ++i) {
                     if (!std::isfinite(f.knots[i].first) || !std::isfinite(f.knots[i].second))
                       invalid("piecewise_linear knot is not finite");
                     if (i > 0 && f.knots[i].first <= f.knots[i - 1].first)
                       invalid("piecewise_linear knots must be strictly increasing in x");
                   }
                 },
                 [](const fn::Step& f) {
                   if (!std::isfinite(f.threshold) || f.threshold <= 0.0 || f.threshold > 1.0)
                     invalid("step threshold must lie in (0, 1]");
                 },
                 [](const fn::PerturbedIdentity& f) {
                   if (!std::isfinite(f.amplitude)) invalid("amplitude must be finite");
                   if (f.frequency < 1) invalid("frequency must be a positive integer");
                 },
             },
             v);
}

bool is_power(const FunctionSpec& h) { return std::holds_alternative<fn::Power>(h.value()); }

void require_endpoints(const FunctionSpec& h) {
  if (h(0.0) != 0.0 || h(1.0) != 1.0) {
    throw Error(ErrorCode::HypothesisFailed, h.describe() + " does not fix 0 and 1");
  }
}

}  // namespace

FunctionSpec::FunctionSpec(Variant v) : value_(std::move(v)) { validate(value_); }

double FunctionSpec::operator()(double x) const {
  return std::visit(
      overloaded{
          [x](const fn::Power& f) { return x <= 0.0 ? 0.0 : std::pow(x, f.t); },
          [x](const fn::Polynomial& f) {
            double acc = 0.0;
            for (auto it = f.coefficients.rbegin(); it != f.coefficients.rend(); ++it) acc = acc * x + *it;
            return acc;
          },
          [x](const fn::PiecewiseLinear& f) {
            const double t = std::clamp(x, 0.0, 1.0);
            auto hi = std::lower_bound(f.knots.begin(), f.knots.end(), t,
                                       [](const auto& k, double v) { return k.first < v; });
            if (hi == f.knots.begin()) return hi->second;
            if (hi->first == t) return hi->second;
            auto lo = hi - 1;
            const double w = (t - lo->first) / (hi->first - lo->first);
            return lo->second + w * (hi->second - lo->second);
          },
          [x](const fn::Step& f) { return x >= f.threshold ? 1.0 : 0.0; },
          [x](const fn::PerturbedIdentity& f) {
            // Reduce the phase first so integer frequencies give sin(0) = 0 exactly at x = 1.
            const double phase = std::fmod(f.frequency * x, 1.0);
            return x + f.amplitude * std::sin(2.0 * std::numbers::pi * phase);
          },
      },
      value_);
}

std::string FunctionSpec::family() const {
  return std::visit(overloaded{
                        [](const fn::Power&) { return std::string("power"); },
                        [](const fn::Polynomial&) { return std::string("polynomial"); },
                        [](const fn::PiecewiseLinear&) { return std::string("piecewise_linear"); },
                        [](const fn::Step&) { return std::string("step"); },
                        [](const fn::PerturbedIdentity&) { return std::string("perturbed_identity"); },
                    },
                    value_);
}

std::string FunctionSpec::describe() const {
  std::ostringstream out;
  out << family();
  std::visit(overloaded{
                 [&](const fn::Power& f) { out << "(t=" << f.t << ")"; },
                 [&](const fn::Polynomial& f) { out << "(degree=" << f.coefficients.size() - 1 << ")"; },
                 [&](const fn::PiecewiseLinear& f) { out << "(knots=" << f.knots.size() << ")"; },
                 [&](const fn::Step& f) { out << "(threshold=" << f.threshold << ")"; },
                 [&](const fn::PerturbedIdentity& f) {
                   out << "(amplitude=" << f.amplitude << ", frequency=" << f.frequency << ")";
                 },
             },
             value_);
  return out.str();
}

Effect apply_function(const Effect& a, const FunctionSpec& h, const Tolerance& tol) {
  RealVector values(a.dim());
  for (Index i = 0; i < a.dim(); ++i) {
    const double y = h(a.eigenvalues()(i));
    if (!std::isfinite(y) || y < -tol.snap || y > 1.0 + tol.snap) {
      std::ostringstream msg;
      msg << h.describe() << " maps eigenvalue " << a.eigenvalues()(i) << " to " << y;
      throw Error(ErrorCode::RangeViolation, msg.str());
    }
    values(i) = y;
  }
  return Effect::from_spectrum(std::move(values), a.eigenvectors(), tol);
}

KernelConditionVerdict check_kernel_condition(const FunctionSpec& h, int grid_points) {
  if (grid_points < 3) {
    throw Error(ErrorCode::InvalidArgument, "kernel condition grid needs at least 3 points");
  }
  KernelConditionVerdict v;
  v.endpoints = h(0.0) == 0.0 && h(1.0) == 1.0;
  v.in_range = true;
  v.strictly_monotone = true;
  double previous = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = (i == grid_points - 1) ? 1.0 : static_cast<double>(i) / (grid_points - 1);
    const double y = h(x);
    if (!(y >= 0.0 && y <= 1.0)) v.in_range = false;
    if (i > 0 && !(y > previous)) v.strictly_monotone = false;
    previous = y;
  }
  v.passes = v.in_range && v.endpoints && v.strictly_monotone;
  return v;
}

KernelOrderingVerdict kernel_ordering_check(const Effect& a, const FunctionSpec& h,
                                            const Tolerance& tol) {
  require_endpoints(h);
  const Effect ha = apply_function(a, h, tol);
  const EffectProjections before = effect_projections(a);
  const EffectProjections after = effect_projections(ha);
  const double t = tol.rank;

  KernelOrderingVerdict v;
  v.kernel_leq = projection_leq(before.kernel, after.kernel, t);
  v.negation_kernel_leq = projection_leq(before.negation_kernel, after.negation_kernel, t);
  v.fuzzy_geq = projection_leq(after.fuzzy, before.fuzzy, t);
  v.kernel_condition = is_power(h) || check_kernel_condition(h).passes;
  if (v.kernel_condition) {
    v.equalities = (before.kernel - after.kernel).norm() <= t &&
                   (before.negation_kernel - after.negation_kernel).norm() <= t &&
                   (before.fuzzy - after.fuzzy).norm() <= t;
  }
  v.holds = v.kernel_leq && v.negation_kernel_leq && v.fuzzy_geq && v.equalities;
  return v;
}

InvarianceVerdict invariance_check(const Effect& a, const FunctionSpec& h, const BlockAlgebra& m,
                                   const Tolerance& tol) {
  require_endpoints(h);
  const Effect ha = apply_function(a, h, tol);
  const SharpnessReport before = classify_sharpness(a, m, tol);
  const SharpnessReport after = classify_sharpness(ha, m, tol);

  InvarianceVerdict v;
  v.biconditional = is_power(h) || check_kernel_condition(h).passes;
  v.almost_before = before.almost_sharp;
  v.nearly_before = before.nearly_sharp;
  v.almost_after = after.almost_sharp;
  v.nearly_after = after.nearly_sharp;
  if (v.biconditional) {
    v.holds = v.almost_before == v.almost_after && v.nearly_before == v.nearly_after;
  } else {
    v.holds = (!v.almost_before || v.almost_after) && (!v.nearly_before || v.nearly_after);
  }
  return v;
}

}  // namespace qeffects
