#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "machina/gauge_family.hpp"
#include "machina/catalog.hpp"
#include "machina/error.hpp"
#include "machina/hmm.hpp"
#include "machina/majorization.hpp"
#include "machina/minimize.hpp"
#include "machina/quantum.hpp"

namespace py = pybind11;
using namespace machina;

namespace {

Distribution to_dist(const std::vector<double>& v) { return Distribution::validate(v); }

py::list entropy_rows(const std::vector<EntropyRow>& rows) {
  py::list out;
  for (const auto& r : rows) out.append(py::make_tuple(r.alpha, r.reference, r.other));
  return out;
}

}  // namespace

PYBIND11_MODULE(_machina, m) {
  m.doc() = "Majorization, finite predictive models and pure-state quantum models";

  static py::exception<Error> error(m, "MachinaError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  // majorization
  m.def("validate", [](const std::vector<double>& v) { return to_dist(v).probs(); }, py::arg("probs"));
  m.def(
      "compare",
      [](const std::vector<double>& p, const std::vector<double>& q, double tol) {
        return std::string(to_string(compare(to_dist(p), to_dist(q), tol)));
      },
      py::arg("p"), py::arg("q"), py::arg("tol") = kCompareTol,
      "Majorization verdict of p against q.");
  m.def(
      "lorenz_curve",
      [](const std::vector<double>& p) {
        std::vector<double> cum;
        for (const auto& pt : lorenz_curve(to_dist(p))) cum.push_back(pt.cum);
        return cum;
      },
      py::arg("p"));
  m.def(
      "renyi_entropy", [](const std::vector<double>& p, double alpha) { return renyi_entropy(to_dist(p), alpha); },
      py::arg("p"), py::arg("alpha"));
  m.def(
      "transfer_chain",
      [](const std::vector<double>& p, const std::vector<double>& q) {
        std::vector<std::tuple<std::size_t, std::size_t, double>> out;
        for (const auto& t : transfer_chain(to_dist(p), to_dist(q))) out.emplace_back(t.donor, t.recipient, t.amount);
        return out;
      },
      py::arg("p"), py::arg("q"), "Transfers (donor, recipient, amount) over sorted, padded indices.");

  // classical models
  py::class_<FinitePredictiveModel>(m, "ClassicalModel")
      .def_property_readonly("states", &FinitePredictiveModel::states)
      .def_property_readonly("alphabet", &FinitePredictiveModel::alphabet)
      .def("stationary", [](const FinitePredictiveModel& self) { return stationary(self).probs(); })
      .def(
          "word_probability",
          [](const FinitePredictiveModel& self, const std::string& w) {
            return word_probability(self, parse_word(self, w));
          },
          py::arg("word"))
      .def("renyi_memory", [](const FinitePredictiveModel& self, double a) { return renyi_memory(self, a); })
      .def("is_epsilon_machine", [](const FinitePredictiveModel& self) { return is_epsilon_machine(self); })
      .def("merge", [](const FinitePredictiveModel& self) { return merge(self); })
      .def("serialize", [](const FinitePredictiveModel& self) { return serialize_model(self); })
      .def("__repr__", [](const FinitePredictiveModel& self) {
        return "<ClassicalModel states=" + std::to_string(self.num_states()) + ">";
      });

  m.def("parse_model", [](const std::string& text) { return parse_model(text); }, py::arg("text"));
  m.def("isomorphic", [](const FinitePredictiveModel& a, const FinitePredictiveModel& b) { return isomorphic(a, b); });
  m.def("strong_minimality_report", [](const FinitePredictiveModel& model) {
    const auto r = strong_minimality_report(model);
    py::dict d;
    d["machine"] = r.machine;
    d["verdict"] = std::string(to_string(r.verdict));
    d["machine_pi"] = r.machine_pi.probs();
    d["model_pi"] = r.model_pi.probs();
    d["entropies"] = entropy_rows(r.entropies);
    d["holds"] = r.holds();
    return d;
  });

  // quantum models
  py::class_<PureStateQuantumModel>(m, "QuantumModel")
      .def_property_readonly("dim", &PureStateQuantumModel::dim)
      .def_property_readonly("labels", &PureStateQuantumModel::labels)
      .def_property_readonly("alphabet", &PureStateQuantumModel::alphabet)
      .def("spectrum", [](const PureStateQuantumModel& self) { return stationary_spectrum(self).probs(); })
      .def("entropy", [](const PureStateQuantumModel& self, double a) { return vn_renyi(self, a); }, py::arg("alpha") = 1.0)
      .def("classical_equivalent", [](const PureStateQuantumModel& self) { return classical_equivalent(self); })
      .def(
          "word_probability",
          [](const PureStateQuantumModel& self, const std::string& w) {
            return quantum_word_probability(self, parse_word(self, w));
          },
          py::arg("word"))
      .def("serialize", [](const PureStateQuantumModel& self) { return serialize_quantum_model(self); })
      .def("__repr__", [](const PureStateQuantumModel& self) {
        return "<QuantumModel dim=" + std::to_string(self.dim()) + " states=" + std::to_string(self.num_states()) + ">";
      });

  m.def("parse_quantum_model", [](const std::string& text) { return parse_quantum_model(text); }, py::arg("text"));
  m.def("build_qmachine", [](const FinitePredictiveModel& model) { return build_qmachine(model); });
  m.def("strong_advantage_report", [](const PureStateQuantumModel& q) {
    const auto r = strong_advantage_report(q);
    py::dict d;
    d["spectrum"] = r.spectrum.probs();
    d["classical"] = r.classical.probs();
    d["verdict"] = std::string(to_string(r.verdict));
    d["entropies"] = entropy_rows(r.entropies);
    d["holds"] = r.holds();
    d["entropy_bound_holds"] = r.entropy_bound_holds();
    return d;
  });

  // catalog
  m.def(
      "process",
      [](const std::string& name) -> py::object {
        auto entry = catalog::lookup(name);
        if (auto* c = std::get_if<FinitePredictiveModel>(&entry)) return py::cast(std::move(*c));
        return py::cast(std::get<PureStateQuantumModel>(std::move(entry)));
      },
      py::arg("name"), "Catalog model by name, e.g. 'biased_coin:0.6', 'mbw4', 'q3'.");
  m.def("process_names", &catalog::names);

  // 2-D gauge family
  m.def(
      "completeness_residual",
      [](double theta) {
        const auto r = gauge::completeness_residual(gauge::candidate(theta));
        return py::make_tuple(r.diagonal, r.analytic, r.operator_norm);
      },
      py::arg("theta"), "(matrix residual, analytic residual, max-abs defect) of the 2-D candidate at theta.");
  m.def(
      "counterexample",
      [](std::size_t grid) {
        const auto r = gauge::counterexample_report(grid);
        py::dict d;
        d["pass"] = r.pass;
        d["lines"] = r.lines;
        d["zeros"] = r.sweep.zeros;
        d["verdict"] = std::string(to_string(r.d3_vs_q3));
        return d;
      },
      py::arg("grid") = 10'000);
}
