#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qeffects/cli.hpp"
#include "qeffects/fixedpoint.hpp"
#include "qeffects/funcalc.hpp"
#include "qeffects/generators.hpp"
#include "qeffects/json_io.hpp"

namespace py = pybind11;
using namespace qeffects;

namespace {

BlockAlgebra algebra_for(Index d, const std::optional<std::vector<Index>>& blocks) {
  return blocks ? BlockAlgebra::create(*blocks) : BlockAlgebra::full(d);
}

KrausClass kraus_class(const std::string& name) {
  if (auto c = parse_kraus_class(name)) return *c;
  throw Error(ErrorCode::InvalidArgument, "unknown family class " + name);
}

EffectProfile effect_profile(const std::string& name) {
  if (auto p = parse_effect_profile(name)) return *p;
  throw Error(ErrorCode::InvalidArgument, "unknown effect profile " + name);
}

// Dicts cross the boundary as JSON text; the Python side does the (de)serializing.
std::string dump(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kraus families, fixed-point spaces and effect sharpness";

  // The error code rides along as `.code`, e.g. "NotAlmostSharp".
  static py::handle exc_type = py::exception<Error>(m, "QEffectsError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(exc_type)(e.what());
      err.attr("code") = to_string(e.code());
      PyErr_SetObject(exc_type.ptr(), err.ptr());
    }
  });

  py::class_<Tolerance>(m, "Tolerance")
      .def(py::init<>())
      .def_static("from_scale", &Tolerance::from_scale, py::arg("scale"))
      .def_readwrite("rank", &Tolerance::rank)
      .def_readwrite("spec", &Tolerance::spec)
      .def_readwrite("snap", &Tolerance::snap)
      .def("validate", &Tolerance::validate);

  py::class_<KrausFamily>(m, "KrausFamily")
      .def(py::init([](std::vector<Matrix> ops, const Tolerance& tol) {
             return KrausFamily::create(std::move(ops), tol);
           }),
           py::arg("operators"), py::arg("tol") = Tolerance{})
      .def_static("normalized", &KrausFamily::normalized, py::arg("operators"),
                  py::arg("tol") = Tolerance{})
      .def_property_readonly("dim", &KrausFamily::dim)
      .def_property_readonly("operators", &KrausFamily::operators)
      .def("apply", &KrausFamily::apply, py::arg("b"))
      .def("__len__", &KrausFamily::size)
      .def("_to_json", [](const KrausFamily& f) { return dump(channel_to_json(f)); });

  m.def("_channel_from_json", [](const std::string& text, const Tolerance& tol) {
    return channel_from_json(Json::parse(text), tol);
  });
  m.def("_classify", [](const KrausFamily& f, const Tolerance& tol) {
    return dump(channel_class_to_json(classify(f, tol)));
  });
  m.def("superoperator", &superoperator, py::arg("family"));
  m.def("dual_apply", [](const KrausFamily& f, const Matrix& b) { return dual(f).apply(b); });
  m.def("schwarz_gap", &schwarz_gap, py::arg("family"), py::arg("c"));

  m.def("fixed_point_space", [](const KrausFamily& f, const Tolerance& tol) {
    return fixed_point_space(f, tol).basis;
  }, py::arg("family"), py::arg("tol") = Tolerance{});
  m.def("commutant", [](const KrausFamily& f, const Tolerance& tol) {
    return commutant(f, tol).basis;
  }, py::arg("family"), py::arg("tol") = Tolerance{});
  m.def("_check_containment", [](const KrausFamily& f, const Tolerance& tol) {
    return dump(containment_to_json(check_containment(f, tol)));
  });
  m.def("_check_equivalence", [](const KrausFamily& f, const Tolerance& tol) {
    const auto e = check_equivalence(f, tol);
    return dump(Json{{"contained", e.contained},
                     {"products_fixed", e.products_fixed},
                     {"squares_fixed", e.squares_fixed},
                     {"agree", e.agree()}});
  });
  m.def("counterexample_search",
        [](Index d, int budget, std::uint64_t seed, const std::string& mode,
           const Tolerance& tol) -> std::optional<py::tuple> {
          const SearchMode sm =
              mode == "trace_nonincreasing" ? SearchMode::TraceNonincreasing : SearchMode::UnitalNotTp;
          if (mode != "trace_nonincreasing" && mode != "unital_not_tp")
            throw Error(ErrorCode::InvalidArgument, "unknown search mode " + mode);
          auto found = counterexample_search(d, budget, seed, tol, sm);
          if (!found) return std::nullopt;
          return py::make_tuple(found->family, found->b, found->trial, found->comm_residual);
        },
        py::arg("d"), py::arg("budget"), py::arg("seed") = 0, py::arg("mode") = "unital_not_tp",
        py::arg("tol") = Tolerance{});

  py::class_<Effect>(m, "Effect")
      .def(py::init([](const Matrix& a, const Tolerance& tol) { return Effect::create(a, tol); }),
           py::arg("matrix"), py::arg("tol") = Tolerance{})
      .def_property_readonly("matrix", &Effect::matrix)
      .def_property_readonly("eigenvalues", &Effect::eigenvalues)
      .def_property_readonly("dim", &Effect::dim)
      .def("negation", &Effect::negation);

  m.def("sequential_product", &sequential_product, py::arg("a"), py::arg("b"),
        py::arg("tol") = Tolerance{});
  m.def("fuzzy_projection", &fuzzy_projection, py::arg("a"), py::arg("tol") = Tolerance{});
  m.def("_classify_sharpness",
        [](const Effect& a, std::optional<std::vector<Index>> blocks, const Tolerance& tol) {
          return dump(sharpness_to_json(classify_sharpness(a, algebra_for(a.dim(), blocks), tol)));
        });
  m.def("pqp_decompose",
        [](const Effect& a, std::optional<std::vector<Index>> blocks, const Tolerance& tol) {
          const auto w = pqp_decompose(a, algebra_for(a.dim(), blocks), tol);
          return py::make_tuple(w.p, w.q);
        },
        py::arg("a"), py::arg("blocks") = py::none(), py::arg("tol") = Tolerance{});
  m.def("_apply_function", [](const Effect& a, const std::string& spec, const Tolerance& tol) {
    return apply_function(a, function_from_json(Json::parse(spec)), tol);
  });

  m.def("gen_kraus", [](Index d, Index k, std::uint64_t seed, const std::string& cls) {
    return gen_kraus(d, k, seed, kraus_class(cls));
  }, py::arg("d"), py::arg("k"), py::arg("seed"), py::arg("cls") = "trace_preserving");
  m.def("gen_effect", [](Index d, std::uint64_t seed, const std::string& profile) {
    return gen_effect(d, seed, effect_profile(profile));
  }, py::arg("d"), py::arg("seed"), py::arg("profile") = "generic");

  m.def("suite_tags", &suite_tags);
  m.def("_run_suite",
        [](std::vector<Index> dims, int trials, std::uint64_t seed, std::vector<std::string> suites,
           int search_budget, const Tolerance& tol, bool include_timing) {
          TrialConfig c;
          c.dims = std::move(dims);
          c.trials = trials;
          c.seed = seed;
          c.suites = std::move(suites);
          c.search_budget = search_budget;
          c.tolerance = tol;
          c.validate();
          SuiteReport r;
          {
            py::gil_scoped_release release;
            r = run_suite(c);
          }
          return dump(report_to_json(r, include_timing));
        });

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "qeffects");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
