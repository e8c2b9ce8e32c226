#include "qeffects/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "qeffects/channel.hpp"
#include "qeffects/effects.hpp"
#include "qeffects/fixedpoint.hpp"
#include "qeffects/funcalc.hpp"
#include "qeffects/generators.hpp"
#include "qeffects/random.hpp"

namespace qeffects {

namespace {

using TrialFn = std::function<TrialOutcome(Index, int, Rng&, const Tolerance&)>;

struct Suite {
  const char* tag;
  const char* description;
};

constexpr Suite kSuites[] = {
    {"L2.1", "B, BB* fixed implies BA = AB for every operation element"},
    {"T2.1", "B, B*B, BB* fixed implies B in the commutant"},
    {"T2.2", "self-adjoint families: B, BB* fixed implies B in the commutant"},
    {"T2.3", "fix <= comm, products fixed and squares fixed agree"},
    {"T2.4", "trace-nonincreasing families do not increase the trace of PSD inputs"},
    {"T2.5", "trace-preserving families preserve traces and are faithful"},
    {"T2.6", "trace-nonincreasing families: fixed points lie in the commutant"},
    {"T2.7", "commutative families: fixed points lie in the commutant"},
    {"L2.3", "Schwarz inequality Phi(C*C) >= Phi(C)* Phi(C)"},
    {"L3.1", "P o A a projection implies AP = PA"},
    {"T3.1", "four projection tests for P and A agree"},
    {"L3.2", "fuzzy projection formula and PQP decomposition of almost-sharp effects"},
    {"T3.2", "P <= P' iff [0, P] is almost sharp"},
    {"T3.3", "effects commuting with P ~ P' split into PQP corners"},
    {"T3.4", "kernel ordering under the functional calculus"},
    {"T3.5", "sharpness classes under the functional calculus"},
    {"C3.1", "sharpness classes are invariant under A -> A^t"},
};

std::string describe_error(const Error& e) { return e.what(); }

template <class T>
std::string fmt(const T& v) {
  std::ostringstream out;
  out.precision(6);
  out << std::boolalpha;
  out << v;
  return out.str();
}

TrialOutcome fail(double residual, std::string detail) { return {false, residual, std::move(detail)}; }

Matrix random_psd(Index d, Rng& rng) {
  const Matrix g = random_ginibre(d, d, rng);
  const Matrix b = g * g.adjoint();
  return b / b.trace().real();
}

// Cycles through every generator class so that all kinds of valid family occur.
KrausFamily any_family(Index d, int trial, Rng& rng, const Tolerance& tol) {
  static constexpr KrausClass kCycle[] = {
      KrausClass::General,     KrausClass::TracePreserving, KrausClass::Unital,
      KrausClass::SelfAdjoint, KrausClass::Commutative,     KrausClass::TraceNonincreasing,
      KrausClass::UnitalNotTp, KrausClass::MeasurePrepare};
  const KrausClass cls = kCycle[trial % 8];
  const Index k = 1 + (trial / 8) % 3;
  if (cls == KrausClass::MeasurePrepare) return gen_kraus(d, d, rng, cls, tol);
  if (cls == KrausClass::UnitalNotTp) {
    if (d < 2) return gen_kraus(d, k, rng, KrausClass::General, tol);
    return gen_kraus(d, k + 1, rng, cls, tol);
  }
  return gen_kraus(d, k, rng, cls, tol);
}

KrausFamily tni_family(Index d, int trial, Rng& rng, const Tolerance& tol) {
  static constexpr KrausClass kCycle[] = {KrausClass::TracePreserving,
                                          KrausClass::TraceNonincreasing,
                                          KrausClass::SelfAdjoint, KrausClass::Commutative};
  return gen_kraus(d, 1 + trial % 3, rng, kCycle[(trial / 3) % 4], tol);
}

std::vector<Matrix> fixed_candidates(const KrausFamily& family, const Tolerance& tol) {
  std::vector<Matrix> out{identity(family.dim())};
  for (const Matrix& b : fixed_point_space(family, tol).basis) {
    out.push_back(b);
    out.push_back(b.adjoint());
  }
  return out;
}

enum class Implication { Half, Full, SelfAdjoint };

TrialOutcome implication_trial(const KrausFamily& family, Implication kind, const Tolerance& tol) {
  TrialOutcome out;
  int tested = 0;
  for (const Matrix& b : fixed_candidates(family, tol)) {
    const FixedCommutationVerdict v = check_fixed_commutation(family, b, tol);
    bool ok = true;
    switch (kind) {
      case Implication::Half:
        if (v.half_premises) {
          ++tested;
          out.residual = std::max(out.residual, v.left_residual);
        }
        ok = v.half_holds;
        break;
      case Implication::Full:
        if (v.premises) {
          ++tested;
          out.residual = std::max(out.residual, v.comm_residual);
        }
        ok = v.full_holds;
        break;
      case Implication::SelfAdjoint:
        if (v.half_premises) {
          ++tested;
          out.residual = std::max(out.residual, v.comm_residual);
        }
        ok = v.self_adjoint_holds && v.self_adjoint_family;
        break;
    }
    if (!ok) {
      return fail(std::max(v.comm_residual, v.left_residual),
                  "premises hold (r1=" + fmt(v.r1) + ", r2=" + fmt(v.r2) + ", r3=" + fmt(v.r3) +
                      ") but commutator residual is " + fmt(v.comm_residual));
    }
  }
  out.detail = fmt(tested) + " candidates met the premises";
  return out;
}

TrialOutcome trial_l21(Index d, int trial, Rng& rng, const Tolerance& tol) {
  return implication_trial(any_family(d, trial, rng, tol), Implication::Half, tol);
}

TrialOutcome trial_t21(Index d, int trial, Rng& rng, const Tolerance& tol) {
  return implication_trial(any_family(d, trial, rng, tol), Implication::Full, tol);
}

TrialOutcome trial_t22(Index d, int trial, Rng& rng, const Tolerance& tol) {
  const auto family = gen_kraus(d, 1 + trial % 3, rng, KrausClass::SelfAdjoint, tol);
  return implication_trial(family, Implication::SelfAdjoint, tol);
}

TrialOutcome trial_t23(Index d, int trial, Rng& rng, const Tolerance& tol) {
  const auto family = any_family(d, trial, rng, tol);
  const EquivalenceVerdict v = check_equivalence(family, tol);
  const std::string detail = "contained=" + fmt(v.contained) +
                             " products_fixed=" + fmt(v.products_fixed) +
                             " squares_fixed=" + fmt(v.squares_fixed);
  if (!v.agree()) return fail(v.containment_residual, detail);
  return {true, v.contained ? v.containment_residual : 0.0, detail};
}

TrialOutcome trial_t24(Index d, int trial, Rng& rng, const Tolerance& tol) {
  const auto family = tni_family(d, trial, rng, tol);
  if (!classify(family, tol).trace_nonincreasing) {
    return fail(0.0, "generated family is not classified trace nonincreasing");
  }
  const Matrix b = random_psd(d, rng);
  const Matrix image = family.apply(b);
  const double before = b.trace().real();
  const double after = image.trace().real();
  const double excess = std::max(0.0, (after - before) / before);
  if (lambda_min(hermitian_part(image)) < -tol.spec) return fail(excess, "image is not PSD");
  if (after > before + 1e-10 * before) {
    return fail(excess, "tr Phi(B) = " + fmt(after) + " exceeds tr B = " + fmt(before));
  }
  return {true, excess, ""};
}

TrialOutcome trial_t25(Index d, int trial, Rng& rng, const Tolerance& tol) {
  const auto family = gen_kraus(d, 1 + trial % 3, rng, KrausClass::TracePreserving, tol);
  const ChannelClass cls = classify(family, tol);
  if (!cls.trace_preserving) return fail(0.0, "generated family is not trace preserving");
  if (!cls.faithful) return fail(0.0, "trace-preserving family classified as not faithful");
  const Matrix b = random_ginibre(d, d, rng);
  const Complex tr_b = b.trace();
  const double gap = std::abs(family.apply(b).trace() - tr_b) / (1.0 + std::abs(tr_b));
  if (gap > 1e-10) return fail(gap, "relative trace change " + fmt(gap));
  return {true, gap, ""};
}

TrialOutcome containment_trial(const KrausFamily& family, const Tolerance& tol) {
  const ContainmentReport r = check_containment(family, tol);
  const std::string detail = "fix_dim=" + fmt(r.fix_dim) + " comm_dim=" + fmt(r.comm_dim);
  if (!r.contained) return fail(r.max_residual, detail);
  return {true, r.max_residual, detail};
}

TrialOutcome trial_t26(Index d, int trial, Rng& rng, const Tolerance& tol) {
  return containment_trial(tni_family(d, trial, rng, tol), tol);
}

TrialOutcome trial_t27(Index d, int trial, Rng& rng, const Tolerance& tol) {
  return containment_trial(gen_kraus(d, 1 + trial % 3, rng, KrausClass::Commutative, tol), tol);
}

TrialOutcome trial_l23(Index d, int trial, Rng& rng, const Tolerance& tol) {
  const auto family = any_family(d, trial, rng, tol);
  Matrix c = random_ginibre(d, d, rng);
  c /= c.norm();
  const double gap = schwarz_gap(family, c);
  const double deficit = std::max(0.0, -gap);
  if (gap < -1e-10) return fail(deficit, "lambda_min = " + fmt(gap));
  return {true, deficit, ""};
}

// Pairs (P, A) with a clear answer: either the four conditions hold exactly or
// they fail by a margin.
std::pair<Matrix, Effect> projection_effect_pair(Index d, int trial, Rng& rng,
                                                 const Tolerance& tol) {
  const Matrix w = random_unitary(d, rng);
  const Index r = rng.uniform_int(0, static_cast<int>(d));
  RealVector p_diag = RealVector::Zero(d);
  p_diag.head(r).setOnes();
  const Matrix p = hermitian_part(w * p_diag.cast<Complex>().asDiagonal() * w.adjoint());
  switch (trial % 4) {
    case 0: {  // A = Q + Y with Q a sub-projection of P and Y supported on P'
      RealVector a_diag(d);
      for (Index i = 0; i < d; ++i) a_diag(i) = i < r ? (rng.bernoulli(0.5) ? 1.0 : 0.0) : rng.uniform();
      const Matrix a = w * a_diag.cast<Complex>().asDiagonal() * w.adjoint();
      return {p, Effect::create(hermitian_part(a), tol)};
    }
    case 1: {  // commuting, with an interior eigenvalue on ran P when r > 0
      RealVector a_diag(d);
      for (Index i = 0; i < d; ++i) a_diag(i) = i < r ? rng.uniform(0.1, 0.9) : rng.uniform();
      const Matrix a = w * a_diag.cast<Complex>().asDiagonal() * w.adjoint();
      return {p, Effect::create(hermitian_part(a), tol)};
    }
    case 2:  // unrelated P and A
      return {p, gen_effect(d, rng, EffectProfile::Generic, tol)};
    default:  // a projection A that commutes with P
    {
      RealVector a_diag(d);
      for (Index i = 0; i < d; ++i) a_diag(i) = rng.bernoulli(0.5) ? 1.0 : 0.0;
      const Matrix a = w * a_diag.cast<Complex>().asDiagonal() * w.adjoint();
      return {p, Effect::create(hermitian_part(a), tol)};
    }
  }
}

TrialOutcome trial_l31(Index d, int trial, Rng& rng, const Tolerance& tol) {
  const auto [p, a] = projection_effect_pair(d, trial, rng, tol);
  const SequentialProjectionTests t = seq_projection_tests(p, a, tol);
  const double residual = t.product_is_projection ? t.commutator_norm : 0.0;
  if (!t.commutes_when_projection) return fail(residual, "P o A is a projection but ||AP - PA|| = " + fmt(t.commutator_norm));
  return {true, residual, ""};
}

TrialOutcome trial_t31(Index d, int trial, Rng& rng, const Tolerance& tol) {
  const auto [p, a] = projection_effect_pair(d, trial, rng, tol);
  const SequentialProjectionTests t = seq_projection_tests(p, a, tol);
  const std::string detail = "product=" + fmt(t.product_is_projection) +
                             " trace=" + fmt(t.trace_identity) + " pa=" + fmt(t.pa_is_projection) +
                             " idempotent=" + fmt(t.pa_idempotent);
  if (!t.agree()) return fail(t.trace_gap, detail);
  return {true, t.trace_identity ? t.trace_gap : 0.0, detail};
}

TrialOutcome trial_l32(Index d, int, Rng& rng, const Tolerance& tol) {
  const Effect a = gen_effect(d, rng, EffectProfile::Margin, tol);
  const Matrix formula = effect_projections(a).fuzzy;
  const Matrix product = hermitian_part(a.matrix() * (identity(d) - a.matrix()));
  const Matrix direct = range_kernel_projections(product, tol, 0.25).range;
  const double gap = (formula - direct).norm();
  if (gap > 1e-8) return fail(gap, "fuzzy projection routes differ by " + fmt(gap));

  const SharpnessReport s = classify_sharpness(a, BlockAlgebra::full(d), tol);
  if (!s.almost_sharp) {
    try {
      pqp_decompose(a, tol);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotAlmostSharp) return {true, gap, "not almost sharp"};
      throw;
    }
    return fail(gap, "decomposition succeeded for an effect that is not almost sharp");
  }
  const PqpWitness w = pqp_decompose(a, tol);
  const double recon = (w.p * w.q * w.p - a.matrix()).norm();
  const double idem = std::max((w.q * w.q - w.q).norm(), (w.p * w.p - w.p).norm());
  const double residual = std::max(gap, recon / static_cast<double>(d));
  if (recon > 1e-9 * static_cast<double>(d) || idem > 1e-9) {
    return fail(residual, "||PQP - A|| = " + fmt(recon) + ", idempotency defect " + fmt(idem));
  }
  return {true, residual, "almost sharp"};
}

TrialOutcome trial_t32(Index d, int trial, Rng& rng, const Tolerance& tol) {
  const BlockAlgebra m = random_algebra(d, rng);
  std::vector<Index> ranks;
  for (Index n : m.block_dims()) ranks.push_back(rng.uniform_int(0, static_cast<int>(n)));
  const Matrix p = random_projection(m, ranks, rng);
  const IntervalVerdict v =
      interval_sharpness_check(p, m, 25, derive_seed(rng.next_u64(), {static_cast<std::uint64_t>(trial)}), tol);
  const std::string detail = "subequivalent=" + fmt(v.subequivalent) + " almost_sharp_samples=" +
                             fmt(v.samples_almost_sharp) + "/" + fmt(v.samples_checked) +
                             " witness_almost_sharp=" + fmt(v.witness_almost_sharp);
  if (!v.holds) return fail(0.0, detail);
  return {true, 0.0, detail};
}

TrialOutcome trial_t33(Index d, int, Rng& rng, const Tolerance& tol) {
  std::vector<Index> dims;
  std::vector<Index> ranks;
  if (d % 2 == 0) {
    for (Index n : random_partition(d / 2, rng)) {
      dims.push_back(2 * n);
      ranks.push_back(n);
    }
  } else {
    dims = random_partition(d, rng);
    for (Index n : dims) ranks.push_back(rng.uniform_int(0, static_cast<int>(n)));
  }
  const BlockAlgebra m = BlockAlgebra::create(dims);
  const Matrix p = random_projection(m, ranks, rng);
  const Matrix pc = identity(d) - p;
  const Matrix x = gen_effect(m, rng, EffectProfile::Generic, tol).matrix();
  const Matrix y = gen_effect(m, rng, EffectProfile::Generic, tol).matrix();
  const Effect a = Effect::create(hermitian_part(p * x * p + pc * y * pc), tol);

  if (d % 2 != 0) {
    try {
      commuting_decomposition(a, p, m, tol);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::HypothesisFailed) return {true, 0.0, "odd dimension, P not ~ P'"};
      throw;
    }
    return fail(0.0, "odd dimension accepted as P ~ P'");
  }
  const CommutingDecomposition c = commuting_decomposition(a, p, m, tol);
  const double t = tol.rank;
  const bool ordered = projection_leq(c.p1, p, t) && projection_leq(c.p2, pc, t);
  const bool sharp = is_projection(c.p1, t) && is_projection(c.q1, t) && is_projection(c.p2, t) &&
                     is_projection(c.q2, t);
  const bool inside = m.off_block_norm(c.p1) <= t && m.off_block_norm(c.q1) <= t &&
                      m.off_block_norm(c.p2) <= t && m.off_block_norm(c.q2) <= t;
  const double limit = 1e-9 * static_cast<double>(d);
  if (c.residual > limit || !ordered || !sharp || !inside) {
    return fail(c.residual, "residual=" + fmt(c.residual) + " ordered=" + fmt(ordered) +
                                " projections=" + fmt(sharp) + " in_algebra=" + fmt(inside));
  }
  return {true, c.residual, ""};
}

FunctionSpec function_for_trial(int trial) {
  switch (trial % 6) {
    case 0: return FunctionSpec::power(0.5);
    case 1: return FunctionSpec::power(2.0);
    case 2: return FunctionSpec::power(3.0);
    case 3: return FunctionSpec::smoothstep();
    case 4: return FunctionSpec::step(0.5);
    default: return FunctionSpec::perturbed_identity(0.1, 2);
  }
}

TrialOutcome trial_t34(Index d, int trial, Rng& rng, const Tolerance& tol) {
  const Effect a = gen_effect(d, rng, EffectProfile::Margin, tol);
  const FunctionSpec h = function_for_trial(trial);
  const KernelOrderingVerdict v = kernel_ordering_check(a, h, tol);
  const std::string detail = h.describe() + " kernel=" + fmt(v.kernel_leq) +
                             " negation_kernel=" + fmt(v.negation_kernel_leq) +
                             " fuzzy=" + fmt(v.fuzzy_geq) + " equalities=" + fmt(v.equalities);
  if (!v.holds) return fail(0.0, detail);
  return {true, 0.0, detail};
}

TrialOutcome invariance_trial(Index d, const FunctionSpec& h, Rng& rng, const Tolerance& tol) {
  const BlockAlgebra m = random_algebra(d, rng);
  const Effect a = gen_effect(m, rng, EffectProfile::Margin, tol);
  const InvarianceVerdict v = invariance_check(a, h, m, tol);
  const std::string detail = h.describe() + " almost " + fmt(v.almost_before) + "->" +
                             fmt(v.almost_after) + " nearly " + fmt(v.nearly_before) + "->" +
                             fmt(v.nearly_after);
  if (!v.holds) return fail(0.0, detail);
  return {true, 0.0, detail};
}

TrialOutcome trial_t35(Index d, int trial, Rng& rng, const Tolerance& tol) {
  return invariance_trial(d, function_for_trial(trial), rng, tol);
}

TrialOutcome trial_c31(Index d, int, Rng& rng, const Tolerance& tol) {
  const double t = std::exp(rng.uniform(std::log(0.2), std::log(5.0)));
  return invariance_trial(d, FunctionSpec::power(t), rng, tol);
}

const std::map<std::string, TrialFn>& trial_table() {
  static const std::map<std::string, TrialFn> table{
      {"L2.1", trial_l21}, {"T2.1", trial_t21}, {"T2.2", trial_t22}, {"T2.3", trial_t23},
      {"T2.4", trial_t24}, {"T2.5", trial_t25}, {"T2.6", trial_t26}, {"T2.7", trial_t27},
      {"L2.3", trial_l23}, {"L3.1", trial_l31}, {"T3.1", trial_t31}, {"L3.2", trial_l32},
      {"T3.2", trial_t32}, {"T3.3", trial_t33}, {"T3.4", trial_t34}, {"T3.5", trial_t35},
      {"C3.1", trial_c31},
  };
  return table;
}

std::uint64_t tag_index(const std::string& tag) {
  const auto& tags = suite_tags();
  const auto it = std::find(tags.begin(), tags.end(), tag);
  if (it == tags.end()) throw Error(ErrorCode::InvalidArgument, "unknown suite tag " + tag);
  return static_cast<std::uint64_t>(it - tags.begin());
}

}  // namespace

const std::vector<std::string>& suite_tags() {
  static const std::vector<std::string> tags = [] {
    std::vector<std::string> out;
    for (const auto& s : kSuites) out.emplace_back(s.tag);
    return out;
  }();
  return tags;
}

const char* suite_description(const std::string& tag) {
  for (const auto& s : kSuites)
    if (tag == s.tag) return s.description;
  return "";
}

void TrialConfig::validate() const {
  for (Index d : dims) {
    if (d < 1 || d > 8) throw Error(ErrorCode::InvalidArgument, "dims must lie in [1, 8]");
  }
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (search_budget < 0) throw Error(ErrorCode::InvalidArgument, "search budget must be >= 0");
  std::set<std::string> seen;
  for (const auto& s : suites) {
    tag_index(s);
    if (!seen.insert(s).second) throw Error(ErrorCode::InvalidArgument, "repeated suite tag " + s);
  }
  tolerance.validate();
}

int SuiteReport::total_failures() const {
  int n = 0;
  for (const auto& s : suites) n += s.failures;
  return n;
}

std::uint64_t trial_seed(std::uint64_t base, const std::string& tag, Index dim, int trial) {
  return derive_seed(base, {tag_index(tag), static_cast<std::uint64_t>(dim),
                            static_cast<std::uint64_t>(trial)});
}

TrialOutcome run_trial(const std::string& tag, Index dim, int trial, std::uint64_t seed,
                       const Tolerance& tol) {
  const auto& table = trial_table();
  const auto it = table.find(tag);
  if (it == table.end()) throw Error(ErrorCode::InvalidArgument, "unknown suite tag " + tag);
  Rng rng(seed);
  try {
    return it->second(dim, trial, rng, tol);
  } catch (const Error& e) {
    return fail(0.0, describe_error(e));
  } catch (const std::exception& e) {
    return fail(0.0, std::string("unexpected exception: ") + e.what());
  }
}

SuiteReport run_suite(const TrialConfig& config) {
  config.validate();
  SuiteReport report;
  report.config = config;
  for (const auto& tag : config.suites) {
    const auto start = std::chrono::steady_clock::now();
    SuiteResult result;
    result.suite = tag;
    for (Index d : config.dims) {
      for (int trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t seed = trial_seed(config.seed, tag, d, trial);
        const TrialOutcome o = run_trial(tag, d, trial, seed, config.tolerance);
        ++result.trials_run;
        result.worst_residual = std::max(result.worst_residual, o.residual);
        if (!o.passed) {
          ++result.failures;
          result.failure_records.push_back({d, trial, seed, o.residual, o.detail});
        }
      }
    }
    std::sort(result.failure_records.begin(), result.failure_records.end(),
              [](const FailureRecord& a, const FailureRecord& b) {
                return std::tie(a.dim, a.trial) < std::tie(b.dim, b.trial);
              });
    result.elapsed_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    report.suites.push_back(std::move(result));
  }
  if (config.search_budget > 0) {
    for (Index d : config.dims) {
      if (d < 2) continue;
      SearchRecord rec;
      rec.dim = d;
      rec.budget = config.search_budget;
      const auto found = counterexample_search(
          d, config.search_budget, derive_seed(config.seed, {0x5ea4c4ULL, static_cast<std::uint64_t>(d)}),
          config.tolerance);
      if (found) {
        rec.found = true;
        rec.trial = found->trial;
        rec.comm_residual = found->comm_residual;
        rec.fixed_residual = found->fixed_residual;
      }
      report.searches.push_back(rec);
    }
  }
  return report;
}

}  // namespace qeffects
