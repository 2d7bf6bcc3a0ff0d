#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamflow/cli.hpp"
#include "hamflow/error.hpp"
#include "hamflow/expansion.hpp"
#include "hamflow/hamiltonian.hpp"
#include "hamflow/instance.hpp"
#include "hamflow/reports.hpp"
#include "hamflow/solvers.hpp"

namespace py = pybind11;

namespace {

using namespace hamflow;

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

py::dict sample_dict(const Sample& sample) {
  py::dict d;
  d["values"] = sample.assignment.values;
  d["energy"] = sample.energy;
  d["objective"] = sample.objective;
  d["feasible"] = sample.feasible;
  d["restart_index"] = sample.restart_index;
  d["wall_time"] = sample.wall_time;
  return d;
}

Assignment to_assignment(const Model& model, const std::vector<std::int64_t>& values) {
  if (values.size() != model.variables().size()) {
    throw ValidationError("expected " + std::to_string(model.variables().size()) +
                          " values, got " + std::to_string(values.size()));
  }
  return Assignment{values};
}

}  // namespace

PYBIND11_MODULE(_hamflow, m) {
  m.doc() = "Time-expanded multicommodity flow models compiled to integer Hamiltonians";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<SearchSpaceTooLarge>(m, "SearchSpaceTooLarge", base.ptr());

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("horizon", &Instance::horizon)
      .def_property_readonly("capacity", &Instance::capacity)
      .def_property_readonly("depots",
                             [](const Instance& i) {
                               std::vector<std::string> ids;
                               for (const auto& d : i.depots()) ids.push_back(d.id);
                               return ids;
                             })
      .def_property_readonly("arcs",
                             [](const Instance& i) {
                               std::vector<std::string> keys;
                               for (const auto& a : i.arcs()) keys.push_back(arc_key(a));
                               return keys;
                             })
      .def_property_readonly("commodities",
                             [](const Instance& i) {
                               std::vector<std::string> ids;
                               for (const auto& k : i.commodities()) ids.push_back(k.id);
                               return ids;
                             })
      .def("to_json", &serialize_instance)
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; });

  m.def("parse_instance", [](const std::string& text) { return parse_instance(text); },
        py::arg("text"));
  m.def("load_instance", &load_instance, py::arg("path"));
  m.def("case_study", &build_case_study, py::arg("costs"),
        "Seven-depot Earth-Moon-Mars instance; `costs` maps 'Ni->Nj' to arc cost.");
  m.def(
      "validate",
      [](const Instance& instance) {
        std::vector<std::string> messages;
        for (const auto& f : validate_instance(instance).findings) messages.push_back(f.message);
        return messages;
      },
      py::arg("instance"), "Semantic findings; an empty list means the instance is sound.");

  py::class_<Model>(m, "Model")
      .def_property_readonly("num_variables", [](const Model& mo) { return mo.variables().size(); })
      .def_property_readonly("num_constraints",
                             [](const Model& mo) { return mo.constraints().size(); })
      .def_property_readonly("num_flows",
                             [](const Model& mo) { return mo.count(VariableKind::flow); })
      .def_property_readonly("num_vehicles",
                             [](const Model& mo) { return mo.count(VariableKind::vehicle); })
      .def("variable_name", py::overload_cast<std::size_t>(&Model::describe, py::const_),
           py::arg("index"))
      .def("upper_bounds", [](const Model& mo) {
        std::vector<std::int64_t> ub;
        for (const auto& v : mo.variables()) ub.push_back(v.upper_bound);
        return ub;
      });

  m.def(
      "expand",
      [](const Instance& instance, bool prune) {
        Model model = expand_model(instance);
        return prune ? prune_model(model) : model;
      },
      py::arg("instance"), py::arg("prune") = true);

  m.def(
      "verify",
      [](const Model& model, const std::vector<std::int64_t>& values) {
        const auto report = verify_assignment(model, to_assignment(model, values));
        py::dict d;
        d["feasible"] = report.feasible;
        d["residuals"] = report.residuals;
        d["objective"] = evaluate_objective(model, to_assignment(model, values));
        return d;
      },
      py::arg("model"), py::arg("values"));

  m.def(
      "reconstruct",
      [](const Model& model, const std::string& tables_json) {
        return reconstruct_solution(model, parse_schedule_tables(tables_json)).values;
      },
      py::arg("model"), py::arg("tables_json"));

  py::class_<Hamiltonian>(m, "Hamiltonian")
      .def_property_readonly("alpha", &Hamiltonian::alpha)
      .def_property_readonly("num_decisions", &Hamiltonian::decision_count)
      .def_property_readonly("num_slacks", &Hamiltonian::slack_count)
      .def_property_readonly("total_levels", &Hamiltonian::total_levels)
      .def_property_readonly("levels", [](const Hamiltonian& h) { return h.polynomial().levels; })
      .def("dynamic_range_db", [](const Hamiltonian& h) { return dynamic_range_db(h.polynomial()); })
      .def("export", [](const Hamiltonian& h) { return export_polynomial(h.polynomial()); })
      .def(
          "energy",
          [](const Hamiltonian& h, const std::vector<double>& point) {
            return evaluate_energy(h, Point{point});
          },
          py::arg("point"))
      .def(
          "encode",
          [](const Hamiltonian& h, const Model& model, const std::vector<std::int64_t>& values) {
            return encode_assignment(h, model, to_assignment(model, values)).values;
          },
          py::arg("model"), py::arg("values"))
      .def(
          "decode",
          [](const Hamiltonian& h, const Model& model, const std::vector<double>& point) {
            return decode_point(h, model, Point{point}).values;
          },
          py::arg("model"), py::arg("point"));

  m.def("compile_hamiltonian", &compile_hamiltonian, py::arg("model"), py::arg("alpha") = py::none());

  m.def(
      "solve_exact",
      [](const Model& model, double time_limit) {
        SolveResult result;
        {
          py::gil_scoped_release release;
          result = solve_exact(model, time_limit);
        }
        py::dict d;
        d["status"] = status_name(result.status);
        d["nodes"] = result.nodes;
        d["best"] = result.best ? py::object(sample_dict(*result.best)) : py::object(py::none());
        return d;
      },
      py::arg("model"), py::arg("time_limit") = 300.0);

  m.def(
      "anneal",
      [](const Hamiltonian& h, const Model& model, std::uint64_t seed, std::size_t restarts,
         std::size_t sweeps, unsigned threads) {
        AnnealParams params = default_anneal_params(h, model);
        params.restarts = restarts;
        if (sweeps > 0) params.sweeps = sweeps;
        params.threads = threads;
        SampleSet set;
        {
          py::gil_scoped_release release;
          set = anneal_sample(h, model, params, seed);
        }
        py::list samples;
        for (const auto& s : set.samples) samples.append(sample_dict(s));
        return samples;
      },
      py::arg("hamiltonian"), py::arg("model"), py::arg("seed") = 0, py::arg("restarts") = 40,
      py::arg("sweeps") = 0, py::arg("threads") = 1,
      "Samples ordered by (energy, restart_index).");

  m.def(
      "report_tables",
      [](const Model& model, const std::vector<std::int64_t>& values, const std::string& format) {
        const TableFormat fmt = format == "json" ? TableFormat::json : TableFormat::csv;
        if (format != "json" && format != "csv") throw ValidationError("format must be csv or json");
        const auto tables = render_report_tables(model, to_assignment(model, values), fmt);
        py::dict d;
        d["vehicles"] = tables.vehicles;
        d["cargo"] = tables.cargo;
        d["inventory"] = tables.inventory;
        return d;
      },
      py::arg("model"), py::arg("values"), py::arg("format") = "csv");
}
