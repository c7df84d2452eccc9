// Python bindings. Documents go in as JSON text; rationals come back as
// "num/den" strings and are turned into Fractions on the Python side.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ftcausal/ci.hpp"
#include "ftcausal/document.hpp"
#include "ftcausal/faithfulness.hpp"
#include "ftcausal/report.hpp"
#include "ftcausal/theorem_lab.hpp"

namespace py = pybind11;
using namespace ftcausal;

namespace {

py::dict certificate_dict(const Phenomenon& p, const FeasibilityCertificate& cert) {
  py::dict d;
  d["feasible"] = cert.feasible;
  d["strategy_count"] = cert.strategy_count;
  py::list weights;
  for (const auto& w : cert.weights) {
    weights.append(py::make_tuple(format_strategy(p.scenario().base(), w.strategy),
                                  to_fraction_string(w.weight)));
  }
  d["weights"] = weights;
  if (cert.witness) {
    d["witness"] = cert.witness->name;
    d["witness_value"] = to_fraction_string(cert.witness_value);
    d["witness_bound"] = to_fraction_string(cert.witness->bound);
  } else {
    d["witness"] = py::none();
  }
  return d;
}

py::list witnesses_list(const CausalModel& m, int n, const FaithfulnessReport& f) {
  const CISet names(observed_universe(n));
  py::list out;
  for (const auto& w : f.witnesses) {
    out.append(py::make_tuple(names.format(w.statement), format_path(m.graph(), w.path)));
  }
  return out;
}

py::dict check_nd(const std::string& text) {
  const auto p = parse_as<Phenomenon>(text, DocumentKind::kPhenomenon);
  const NdReport nd = check_no_disturbance(p);
  py::list violations;
  for (const auto& v : nd.violations) violations.append(describe(p.scenario(), v));
  py::dict d;
  d["holds"] = nd.holds();
  d["violations"] = violations;
  return d;
}

py::dict factorisable(const std::string& text, bool allow_disturbing) {
  const auto p = parse_as<Phenomenon>(text, DocumentKind::kPhenomenon);
  FactorisabilityOptions options;
  options.allow_disturbing = allow_disturbing;
  return certificate_dict(p, is_factorisable(p, options));
}

py::dict faithful(const std::string& model_text, const std::string& phenomenon_text) {
  const auto md = parse_as<ModelDocument>(model_text, DocumentKind::kModel);
  const auto p = parse_as<Phenomenon>(phenomenon_text, DocumentKind::kPhenomenon);
  if (!(md.scenario == p.scenario())) {
    throw ReproductionError("the model and the phenomenon are over different scenarios");
  }
  const FaithfulnessReport f = check_faithfulness(md.model, p);
  py::dict d;
  d["faithful"] = f.faithful();
  d["checked"] = f.checked_count;
  d["witnesses"] = witnesses_list(md.model, p.scenario().n(), f);
  return d;
}

std::string corollary(const std::string& text) {
  const auto p = parse_as<Phenomenon>(text, DocumentKind::kPhenomenon);
  Report r("corollary");
  r.input("phenomenon", text);
  add_corollary(r, p, corollary_report(p));
  return r.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact causal-model analysis of contextuality and nonlocality";
  m.attr("__version__") = std::string(version());

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());

  m.def("canonical", [](const std::string& text) { return serialize(parse_document(text)); },
        py::arg("text"), "Parse a document and re-serialize it canonically.");
  m.def("kind", [](const std::string& text) { return std::string(kind_name(kind_of(parse_document(text)))); },
        py::arg("text"));
  m.def("check_nd", &check_nd, py::arg("phenomenon"));
  m.def("factorisable", &factorisable, py::arg("phenomenon"), py::arg("allow_disturbing") = false);
  m.def("dsep", [](const std::string& graph_text, const std::string& query) {
          const auto g = parse_as<Dag>(graph_text, DocumentKind::kGraph);
          return d_separated(g, parse_dsep_query(g, query));
        },
        py::arg("graph"), py::arg("query"));
  m.def("faithful", &faithful, py::arg("model"), py::arg("phenomenon"));
  m.def("corollary", &corollary, py::arg("phenomenon"),
        "Full corollary report text, the same bytes the CLI prints.");
}
