#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "strandcheck/descent.hpp"
#include "strandcheck/finmodel.hpp"
#include "strandcheck/render.hpp"
#include "strandcheck/text.hpp"

namespace py = pybind11;

namespace {

py::dict report_dict(const sc::CheckReport& r) {
  py::dict d;
  d["script"] = r.script;
  d["verdict"] = sc::verdict_name(r.verdict);
  d["failed_step"] = r.verdict == sc::Verdict::Failed ? py::object(py::int_(r.failed_step + 1))
                                                      : py::object(py::none());
  d["error"] = r.error ? py::object(py::str(sc::error_code_name(*r.error))) : py::object(py::none());
  d["reason"] = r.reason;
  d["steps_checked"] = r.steps_checked;
  return d;
}

py::list reports(const std::vector<sc::CheckReport>& rs) {
  py::list out;
  for (const auto& r : rs) out.append(report_dict(r));
  return out;
}

const sc::ScriptFile& bundle() {
  static const sc::ScriptFile f = sc::script_file_for(sc::bundled_scripts());
  return f;
}

}  // namespace

PYBIND11_MODULE(strandcheck, m) {
  m.doc() = "String-diagram proof checker for bifibrations";

  py::register_exception<sc::Error>(m, "Error");

  m.def(
      "verify_theorem",
      [](std::vector<std::string> disabled_axioms, std::vector<std::string> unmarked_squares) {
        sc::TheoremOptions opt;
        opt.disabled_axioms.insert(disabled_axioms.begin(), disabled_axioms.end());
        opt.unmarked_squares.insert(unmarked_squares.begin(), unmarked_squares.end());
        return reports(sc::verify_theorem(opt).reports);
      },
      py::arg("disabled_axioms") = std::vector<std::string>{},
      py::arg("unmarked_squares") = std::vector<std::string>{},
      "Checks the bundled scripts; one report dict per script.");

  m.def(
      "check_text",
      [](const std::string& text) {
        sc::ScriptFile f = sc::parse_script_file(text);
        sc::Session session;
        return reports(sc::check_all(f.scripts, session));
      },
      py::arg("text"), "Parses a script file and checks every script in it.");

  m.def("bundle_text", [] { return sc::print_script_file(bundle()); },
        "The bundled scripts as one script file.");

  m.def("script_names", [] {
    std::vector<std::string> names;
    for (const auto& s : sc::bundled_scripts()) names.push_back(s.name);
    return names;
  });

  m.def(
      "render",
      [](const std::string& name, const std::string& format) {
        const sc::NamedDiagram* d = bundle().find_diagram(name);
        if (!d) sc::fail(sc::ErrorCode::UnknownName, "no bundled diagram " + name);
        return sc::render(bundle().signature(d->extension), d->diagram,
                          sc::render_format_from_name(format), name);
      },
      py::arg("name"), py::arg("format") = "svg", "Renders a bundled diagram.");

  m.def(
      "probe",
      [](std::size_t samples, std::uint64_t seed, std::size_t size, std::size_t max_path) {
        sc::RandomFibOptions opt;
        opt.max_layers = size;
        opt.max_path_len = max_path;
        sc::ProbeReport r;
        {
          py::gil_scoped_release release;
          r = sc::confluence_probe(sc::descent_signature(sc::Extension::None), opt, samples, seed);
        }
        py::dict d;
        d["samples"] = r.samples;
        d["violations"] = r.violations;
        d["states_explored"] = r.states_explored;
        d["messages"] = r.messages;
        return d;
      },
      py::arg("samples"), py::arg("seed") = 42, py::arg("size") = 5, py::arg("max_path") = 4,
      "Confluence probe over random pure-chi diagrams.");

  m.def(
      "model_check",
      [](std::size_t instances, std::size_t max_size, std::uint64_t seed, std::size_t max_fiber) {
        py::dict out;
        for (const auto& s : sc::bundled_scripts()) {
          sc::OracleReport o =
              sc::oracle_equal(s.sig, s.lhs, s.rhs, instances, max_size, seed, max_fiber);
          out[py::str(s.name)] = py::make_tuple(o.samples, o.mismatches);
        }
        return out;
      },
      py::arg("instances") = 100, py::arg("max_size") = 4, py::arg("seed") = 7,
      py::arg("max_fiber") = 3, "Finite-set oracle on every bundled claim: (samples, mismatches).");
}
