#include "qeffects/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qeffects/generators.hpp"
#include "qeffects/json_io.hpp"

namespace qeffects {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailed = 2;

struct Common {
  std::string format = "text";
  double tol = 1e-8;
};

void add_common(CLI::App& cmd, Common& c) {
  cmd.add_option("--tol", c.tol, "Tolerance scale (rank and snap; spectral checks use tol/100)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string join(const std::vector<Index>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

BlockAlgebra algebra_for(const std::vector<Index>& dims, Index d) {
  if (dims.empty()) return BlockAlgebra::full(d);
  BlockAlgebra m = BlockAlgebra::create(dims);
  if (m.dim() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "algebra blocks sum to " + std::to_string(m.dim()) + " but the effect is " +
                    std::to_string(d) + "x" + std::to_string(d));
  }
  return m;
}

Effect read_effect(const std::string& path, const Tolerance& tol) {
  const Matrix a = matrix_from_json(read_json_file(path));
  require_square(a, "effect");
  return Effect::create(a, tol);
}

// ---------------------------------------------------------------------------

int channel_analyze(const std::string& path, const Common& c, std::ostream& out) {
  const Tolerance tol = Tolerance::from_scale(c.tol);
  const KrausFamily family = channel_from_json(read_json_file(path), tol);
  const ChannelClass cls = classify(family, tol);
  const ContainmentReport r = check_containment(family, tol);
  std::ostringstream buf;
  if (c.format == "json") {
    buf << Json{{"dim", family.dim()},
                {"kraus_count", family.size()},
                {"class", channel_class_to_json(cls)},
                {"containment", containment_to_json(r)}}
               .dump(2)
        << "\n";
  } else {
    buf << "dim: " << family.dim() << "\n"
        << "kraus_count: " << family.size() << "\n"
        << "unital: " << yes_no(cls.unital) << "\n"
        << "trace_preserving: " << yes_no(cls.trace_preserving) << "\n"
        << "trace_nonincreasing: " << yes_no(cls.trace_nonincreasing) << "\n"
        << "self_adjoint: " << yes_no(cls.self_adjoint) << "\n"
        << "faithful: " << yes_no(cls.faithful) << "\n"
        << "fix_dim: " << r.fix_dim << "\n"
        << "comm_dim: " << r.comm_dim << "\n"
        << "contained: " << yes_no(r.contained) << "\n"
        << "max_residual: " << r.max_residual << "\n";
  }
  out << buf.str();
  return kOk;
}

int effect_classify(const std::string& path, const std::vector<Index>& algebra, bool decompose,
                    const Common& c, std::ostream& out, std::ostream& err) {
  const Tolerance tol = Tolerance::from_scale(c.tol);
  const Effect a = read_effect(path, tol);
  const BlockAlgebra m = algebra_for(algebra, a.dim());
  m.require_member(a.matrix(), tol.rank, "effect");
  const SharpnessReport s = classify_sharpness(a, m, tol);
  std::optional<PqpWitness> w;
  if (decompose) {
    try {
      w = pqp_decompose(a, m, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotAlmostSharp) throw;
      err << e.what() << "\n";
      return kFailed;
    }
  }
  std::ostringstream buf;
  if (c.format == "json") {
    Json j = sharpness_to_json(s);
    j["algebra"] = m.block_dims();
    if (w) j["decomposition"] = {{"P", matrix_to_json(w->p)}, {"Q", matrix_to_json(w->q)}};
    buf << j.dump(2) << "\n";
  } else {
    buf << "algebra: " << join(m.block_dims()) << "\n"
        << "almost_sharp: " << yes_no(s.almost_sharp) << "\n"
        << "nearly_sharp: " << yes_no(s.nearly_sharp) << "\n";
    for (std::size_t b = 0; b < m.blocks(); ++b) {
      buf << "block " << b << ": range=" << s.range_ranks[b] << " kernel=" << s.kernel_ranks[b]
          << " negation_kernel=" << s.negation_kernel_ranks[b] << " fuzzy=" << s.fuzzy_ranks[b]
          << "\n";
    }
    if (w) {
      buf << "P: " << matrix_to_json(w->p).dump() << "\n"
          << "Q: " << matrix_to_json(w->q).dump() << "\n";
    }
  }
  out << buf.str();
  return kOk;
}

int effect_function(const std::string& path, const std::string& function,
                    const std::vector<Index>& algebra, const Common& c, std::ostream& out) {
  const Tolerance tol = Tolerance::from_scale(c.tol);
  Json spec;
  try {
    spec = Json::parse(function);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("--function: ") + e.what());
  }
  const FunctionSpec h = function_from_json(spec);
  const Effect a = read_effect(path, tol);
  const BlockAlgebra m = algebra_for(algebra, a.dim());
  m.require_member(a.matrix(), tol.rank, "effect");
  const Effect ha = apply_function(a, h, tol);
  const bool endpoints = h(0.0) == 0.0 && h(1.0) == 1.0;

  Json j{{"function", function_to_json(h)}, {"result", matrix_to_json(ha.matrix())}};
  if (endpoints) {
    const KernelOrderingVerdict k = kernel_ordering_check(a, h, tol);
    const InvarianceVerdict v = invariance_check(a, h, m, tol);
    j["kernel_ordering"] = {{"kernel_leq", k.kernel_leq},
                            {"negation_kernel_leq", k.negation_kernel_leq},
                            {"fuzzy_geq", k.fuzzy_geq},
                            {"kernel_condition", k.kernel_condition},
                            {"equalities", k.equalities},
                            {"holds", k.holds}};
    j["invariance"] = {{"biconditional", v.biconditional},
                       {"almost_before", v.almost_before},
                       {"nearly_before", v.nearly_before},
                       {"almost_after", v.almost_after},
                       {"nearly_after", v.nearly_after},
                       {"holds", v.holds}};
  }
  std::ostringstream buf;
  if (c.format == "json") {
    buf << j.dump(2) << "\n";
  } else {
    buf << "function: " << h.describe() << "\n"
        << "result: " << j["result"].dump() << "\n";
    if (endpoints) {
      buf << "kernel_ordering_holds: " << yes_no(j["kernel_ordering"]["holds"].get<bool>()) << "\n"
          << "almost_sharp: " << yes_no(j["invariance"]["almost_before"].get<bool>()) << " -> "
          << yes_no(j["invariance"]["almost_after"].get<bool>()) << "\n"
          << "nearly_sharp: " << yes_no(j["invariance"]["nearly_before"].get<bool>()) << " -> "
          << yes_no(j["invariance"]["nearly_after"].get<bool>()) << "\n"
          << "invariance_holds: " << yes_no(j["invariance"]["holds"].get<bool>()) << "\n";
    } else {
      buf << "h does not fix 0 and 1; ordering checks skipped\n";
    }
  }
  out << buf.str();
  return kOk;
}

std::string verify_text(const SuiteReport& report) {
  std::ostringstream buf;
  const TrialConfig& c = report.config;
  buf << "seed=" << c.seed << " trials=" << c.trials << " dims=" << join(c.dims)
      << " tol=" << c.tolerance.rank << "\n";
  for (const SuiteResult& s : report.suites) {
    buf << (s.failures ? "FAIL " : "PASS ") << s.suite << "  trials=" << s.trials_run
        << " failures=" << s.failures << " worst_residual=" << s.worst_residual << "  ("
        << suite_description(s.suite) << ")\n";
    for (const FailureRecord& f : s.failure_records) {
      buf << "  dim=" << f.dim << " trial=" << f.trial << " seed=" << f.seed
          << " residual=" << f.residual << " " << f.detail << "\n";
    }
  }
  for (const SearchRecord& r : report.searches) {
    buf << "search (informational) dim=" << r.dim << " budget=" << r.budget << ": "
        << (r.found ? "found at trial " + std::to_string(r.trial) : std::string("none")) << "\n";
  }
  buf << "total_failures=" << report.total_failures() << "\n";
  return buf.str();
}

int verify(TrialConfig config, const Common& c, const std::string& output, std::ostream& out) {
  config.tolerance = Tolerance::from_scale(c.tol);
  if (config.suites.empty()) config.suites = suite_tags();
  config.validate();
  const SuiteReport report = run_suite(config);
  const std::string text =
      c.format == "json" ? report_to_json(report).dump(2) + "\n" : verify_text(report);
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream file(output);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + output);
    file << text;
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + output);
  }
  return report.total_failures() ? kFailed : kOk;
}

int search(Index d, int budget, std::uint64_t seed, const std::string& mode_name,
           const std::string& out_dir, const Common& c, std::ostream& out) {
  if (budget < 1) throw Error(ErrorCode::InvalidArgument, "--budget must be >= 1");
  if (d < 1 || d > 8) throw Error(ErrorCode::InvalidArgument, "--dim must lie in [1, 8]");
  const Tolerance tol = Tolerance::from_scale(c.tol);
  const SearchMode mode =
      mode_name == "trace_nonincreasing" ? SearchMode::TraceNonincreasing : SearchMode::UnitalNotTp;
  const auto found = counterexample_search(d, budget, seed, tol, mode);
  std::ostringstream buf;
  if (!found) {
    buf << "NOT-FOUND dim=" << d << " budget=" << budget << " seed=" << seed << " mode=" << mode_name
        << "\n";
    out << buf.str();
    return kOk;
  }
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  const auto channel_path = dir / "witness_channel.json";
  const auto point_path = dir / "witness_fixed_point.json";
  std::ofstream(channel_path) << channel_to_json(found->family).dump(2) << "\n";
  std::ofstream(point_path) << matrix_to_json(found->b).dump(2) << "\n";
  buf << "FOUND dim=" << d << " trial=" << found->trial << " seed=" << seed << " mode=" << mode_name
      << "\n"
      << "comm_residual=" << found->comm_residual << " fixed_residual=" << found->fixed_residual
      << "\n"
      << "channel: " << channel_path.string() << "\n"
      << "fixed_point: " << point_path.string() << "\n";
  out << buf.str();
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kraus families, fixed points and effect sharpness"};
  app.name(args.empty() ? "qeffects" : args.front());
  app.require_subcommand(1);

  Common common;
  std::string path;
  std::vector<Index> algebra;
  bool decompose = false;
  std::string function;
  TrialConfig config;
  config.dims = {2, 3};
  config.trials = 20;
  std::string output;
  Index search_dim = 0;
  int budget = 1000;
  std::uint64_t search_seed = 0;
  std::string mode = "unital_not_tp";
  std::string out_dir = ".";

  auto* analyze = app.add_subcommand("channel-analyze", "Classify a channel and compare fix with comm");
  analyze->add_option("file", path, "ChannelJson file")->required();
  add_common(*analyze, common);

  auto* classify_cmd = app.add_subcommand("effect-classify", "Almost/nearly sharp classification");
  classify_cmd->add_option("file", path, "MatrixJson effect")->required();
  classify_cmd->add_option("--algebra", algebra, "Block sizes, e.g. 2,1")->delimiter(',');
  classify_cmd->add_flag("--decompose", decompose, "Emit projections P, Q with PQP = A");
  add_common(*classify_cmd, common);

  auto* function_cmd = app.add_subcommand("effect-function", "Apply a function to an effect");
  function_cmd->add_option("file", path, "MatrixJson effect")->required();
  function_cmd->add_option("--function", function, "FunctionSpec JSON, e.g. {\"family\":\"power\",\"t\":2}")
      ->required();
  function_cmd->add_option("--algebra", algebra, "Block sizes, e.g. 2,1")->delimiter(',');
  add_common(*function_cmd, common);

  auto* verify_cmd = app.add_subcommand("verify", "Run property suites");
  verify_cmd->add_option("--suites", config.suites, "Suite tags (default: all)")->delimiter(',');
  verify_cmd->add_option("--dims", config.dims, "Dimensions")->delimiter(',');
  verify_cmd->add_option("--trials", config.trials, "Trials per suite and dimension");
  verify_cmd->add_option("--seed", config.seed, "Base seed");
  verify_cmd->add_option("--search-budget", config.search_budget,
                         "Informational counterexample search budget per dimension");
  verify_cmd->add_option("--output", output, "Write the report here instead of stdout");
  add_common(*verify_cmd, common);

  auto* search_cmd = app.add_subcommand("search", "Look for fixed points outside the commutant");
  search_cmd->add_option("--dim", search_dim, "Dimension")->required();
  search_cmd->add_option("--budget", budget, "Number of sampled families");
  search_cmd->add_option("--seed", search_seed, "Base seed");
  search_cmd->add_option("--mode", mode, "Family class to sample")
      ->check(CLI::IsMember({"unital_not_tp", "trace_nonincreasing"}));
  search_cmd->add_option("--out-dir", out_dir, "Directory for witness files");
  add_common(*search_cmd, common);

  // CLI11 consumes arguments from the back.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (analyze->parsed()) return channel_analyze(path, common, out);
    if (classify_cmd->parsed()) return effect_classify(path, algebra, decompose, common, out, err);
    if (function_cmd->parsed()) return effect_function(path, function, algebra, common, out);
    if (verify_cmd->parsed()) return verify(config, common, output, out);
    if (search_cmd->parsed()) return search(search_dim, budget, search_seed, mode, out_dir, common, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace qeffects
