#include "qeffects/json_io.hpp"

#include <cmath>
#include <fstream>

#include "qeffects/random.hpp"

namespace qeffects {

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) parse_error("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) parse_error(std::string("missing field \"") + key + "\"");
  return *it;
}

double finite_number(const Json& j, const char* what) {
  if (!j.is_number()) parse_error(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_error(std::string(what) + " must be finite");
  return v;
}

Index positive_int(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    parse_error(std::string(what) + " must be a positive integer");
  }
  return static_cast<Index>(j.get<long long>());
}

Json index_array(const std::vector<Index>& v) {
  Json out = Json::array();
  for (Index x : v) out.push_back(x);
  return out;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const Json& j) {
  const Index rows = positive_int(field(j, "rows"), "rows");
  const Index cols = positive_int(field(j, "cols"), "cols");
  const Json& data = field(j, "data");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
    parse_error("data must hold rows*cols entries");
  }
  Matrix m(rows, cols);
  for (Index k = 0; k < rows * cols; ++k) {
    const Json& entry = data[static_cast<std::size_t>(k)];
    if (!entry.is_array() || entry.size() != 2) parse_error("entries must be [re, im] pairs");
    m(k / cols, k % cols) = Complex(finite_number(entry[0], "re"), finite_number(entry[1], "im"));
  }
  return m;
}

Json channel_to_json(const KrausFamily& family) {
  Json kraus = Json::array();
  for (const Matrix& a : family.operators()) kraus.push_back(matrix_to_json(a));
  return {{"dim", family.dim()}, {"kraus", std::move(kraus)}};
}

KrausFamily channel_from_json(const Json& j, const Tolerance& tol) {
  const Index d = positive_int(field(j, "dim"), "dim");
  const Json& kraus = field(j, "kraus");
  if (!kraus.is_array() || kraus.empty()) parse_error("kraus must be a nonempty array");
  std::vector<Matrix> ops;
  for (const Json& k : kraus) {
    Matrix a = matrix_from_json(k);
    if (a.rows() != d || a.cols() != d) parse_error("every Kraus operator must be dim x dim");
    ops.push_back(std::move(a));
  }
  return KrausFamily::create(std::move(ops), tol);
}

Json function_to_json(const FunctionSpec& h) {
  Json out{{"family", h.family()}};
  const auto& v = h.value();
  if (const auto* f = std::get_if<fn::Power>(&v)) {
    out["t"] = f->t;
  } else if (const auto* f = std::get_if<fn::Polynomial>(&v)) {
    out["coefficients"] = f->coefficients;
  } else if (const auto* f = std::get_if<fn::PiecewiseLinear>(&v)) {
    Json knots = Json::array();
    for (const auto& [x, y] : f->knots) knots.push_back({x, y});
    out["knots"] = std::move(knots);
  } else if (const auto* f = std::get_if<fn::Step>(&v)) {
    out["threshold"] = f->threshold;
  } else if (const auto* f = std::get_if<fn::PerturbedIdentity>(&v)) {
    out["amplitude"] = f->amplitude;
    out["frequency"] = f->frequency;
  }
  return out;
}

FunctionSpec function_from_json(const Json& j) {
  const Json& fam = field(j, "family");
  if (!fam.is_string()) parse_error("family must be a string");
  const std::string name = fam.get<std::string>();
  if (name == "power") return FunctionSpec::power(finite_number(field(j, "t"), "t"));
  if (name == "polynomial") {
    const Json& c = field(j, "coefficients");
    if (!c.is_array()) parse_error("coefficients must be an array");
    std::vector<double> coeffs;
    for (const Json& x : c) coeffs.push_back(finite_number(x, "coefficient"));
    return FunctionSpec::polynomial(std::move(coeffs));
  }
  if (name == "piecewise_linear") {
    const Json& k = field(j, "knots");
    if (!k.is_array()) parse_error("knots must be an array");
    std::vector<std::pair<double, double>> knots;
    for (const Json& p : k) {
      if (!p.is_array() || p.size() != 2) parse_error("knots must be [x, y] pairs");
      knots.emplace_back(finite_number(p[0], "knot x"), finite_number(p[1], "knot y"));
    }
    return FunctionSpec::piecewise_linear(std::move(knots));
  }
  if (name == "step") return FunctionSpec::step(finite_number(field(j, "threshold"), "threshold"));
  if (name == "perturbed_identity") {
    const Json& f = field(j, "frequency");
    if (!f.is_number_integer()) parse_error("frequency must be an integer");
    return FunctionSpec::perturbed_identity(finite_number(field(j, "amplitude"), "amplitude"),
                                            f.get<int>());
  }
  parse_error("unknown function family \"" + name + "\"");
}

Json tolerance_to_json(const Tolerance& tol) {
  return {{"rank", tol.rank}, {"spec", tol.spec}, {"snap", tol.snap}};
}

Json config_to_json(const TrialConfig& config) {
  return {{"dims", index_array(config.dims)},
          {"trials", config.trials},
          {"seed", config.seed},
          {"tolerance", tolerance_to_json(config.tolerance)},
          {"suites", config.suites},
          {"search_budget", config.search_budget}};
}

Json channel_class_to_json(const ChannelClass& c) {
  return {{"unital", c.unital},
          {"trace_preserving", c.trace_preserving},
          {"trace_nonincreasing", c.trace_nonincreasing},
          {"self_adjoint", c.self_adjoint},
          {"faithful", c.faithful}};
}

Json containment_to_json(const ContainmentReport& r) {
  return {{"contained", r.contained},
          {"max_residual", r.max_residual},
          {"fix_dim", r.fix_dim},
          {"comm_dim", r.comm_dim}};
}

Json sharpness_to_json(const SharpnessReport& r) {
  return {{"almost_sharp", r.almost_sharp},
          {"nearly_sharp", r.nearly_sharp},
          {"range_ranks", index_array(r.range_ranks)},
          {"kernel_ranks", index_array(r.kernel_ranks)},
          {"negation_kernel_ranks", index_array(r.negation_kernel_ranks)},
          {"fuzzy_ranks", index_array(r.fuzzy_ranks)}};
}

Json report_to_json(const SuiteReport& report, bool include_timing) {
  Json suites = Json::array();
  for (const SuiteResult& s : report.suites) {
    Json failures = Json::array();
    for (const FailureRecord& f : s.failure_records) {
      failures.push_back({{"dim", f.dim},
                          {"trial", f.trial},
                          {"seed", f.seed},
                          {"residual", f.residual},
                          {"detail", f.detail}});
    }
    Json entry{{"suite", s.suite},
               {"description", suite_description(s.suite)},
               {"trials_run", s.trials_run},
               {"failures", s.failures},
               {"worst_residual", s.worst_residual},
               {"failure_records", std::move(failures)}};
    if (include_timing) entry["elapsed_ms"] = s.elapsed_ms;
    suites.push_back(std::move(entry));
  }
  Json searches = Json::array();
  for (const SearchRecord& r : report.searches) {
    searches.push_back({{"dim", r.dim},
                        {"budget", r.budget},
                        {"found", r.found},
                        {"trial", r.trial},
                        {"comm_residual", r.comm_residual},
                        {"fixed_residual", r.fixed_residual}});
  }
  return {{"schema", kReportSchema},
          {"generator", {{"name", Rng::kName}, {"version", Rng::kVersion}}},
          {"config", config_to_json(report.config)},
          {"suites", std::move(suites)},
          {"searches", std::move(searches)},
          {"total_failures", report.total_failures()}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    parse_error(path + ": " + e.what());
  }
}

}  // namespace qeffects
