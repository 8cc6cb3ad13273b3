#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "superpos/certify.hpp"
#include "superpos/error.hpp"
#include "superpos/experiments.hpp"
#include "superpos/io.hpp"
#include "superpos/roof.hpp"

namespace py = pybind11;
using namespace superpos;

namespace {

MeasureVariant variant_of(const std::string& s) { return parse_variant(s); }

Partition partition_of(const std::string& s) { return parse_partition(s); }

py::object wrap(const AnyState& s) {
  if (const auto* p = std::get_if<PureState>(&s)) return py::cast(*p);
  return py::cast(std::get<DensityMatrix>(s));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Local and nonlocal superposition measures";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<PureState>(m, "PureState")
      .def(py::init([](Dims dims, ComplexVector amps) { return make_pure(std::move(dims), std::move(amps)); }),
           py::arg("dims"), py::arg("amps"))
      .def_readonly("dims", &PureState::dims)
      .def_readonly("amps", &PureState::amps)
      .def("to_json", [](const PureState& p) { return state_to_json(p); });

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init([](Dims dims, ComplexMatrix rho) { return make_density(std::move(dims), std::move(rho)); }),
           py::arg("dims"), py::arg("rho"))
      .def_readonly("dims", &DensityMatrix::dims)
      .def_readonly("mat", &DensityMatrix::mat)
      .def("to_json", [](const DensityMatrix& r) { return state_to_json(r); });

  m.def("to_density", py::overload_cast<const PureState&>(&to_density));

  py::class_<OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init<>())
      .def_readwrite("seed", &OptimizerConfig::seed)
      .def_readwrite("restarts", &OptimizerConfig::restarts)
      .def_readwrite("max_iters", &OptimizerConfig::max_iters)
      .def_readwrite("tol", &OptimizerConfig::tol)
      .def_readwrite("simplex_scale", &OptimizerConfig::simplex_scale)
      .def_readwrite("polish_rounds", &OptimizerConfig::polish_rounds)
      .def_readwrite("grid_resolution", &OptimizerConfig::grid_resolution);

  py::class_<MeasureReport>(m, "MeasureReport")
      .def_readonly("value", &MeasureReport::value)
      .def_readonly("converged", &MeasureReport::converged)
      .def_readonly("closed_form", &MeasureReport::closed_form)
      .def_readonly("upper_bound", &MeasureReport::upper_bound)
      .def_readonly("evaluations", &MeasureReport::evaluations)
      .def_property_readonly("variant", [](const MeasureReport& r) { return std::string(to_string(r.variant)); })
      .def_property_readonly("bases", [](const MeasureReport& r) { return r.witness.unitaries; })
      .def_property_readonly("isometry", [](const MeasureReport& r) { return r.witness.isometry; });

  py::class_<SchmidtResult>(m, "SchmidtResult")
      .def_readonly("coefficients", &SchmidtResult::coefficients)
      .def_readonly("left", &SchmidtResult::left)
      .def_readonly("right", &SchmidtResult::right);

  py::class_<CertificationResult>(m, "CertificationResult")
      .def_property_readonly("verdict", [](const CertificationResult& r) { return std::string(to_string(r.verdict)); })
      .def_readonly("basis", &CertificationResult::basis)
      .def_readonly("residual", &CertificationResult::residual)
      .def_readonly("reason", &CertificationResult::reason);

  m.def("make_state", [](const std::string& name, const std::vector<double>& params) { return wrap(make_state(name, params)); },
        py::arg("name"), py::arg("params") = std::vector<double>{});
  m.def("catalog_names", &catalog_names);
  m.def("load_state", [](const std::string& path) { return wrap(load_state(path)); });
  m.def("parse_state_json", [](const std::string& text) { return wrap(parse_state_json(text)); });

  m.def("schmidt_decompose", [](const PureState& psi, const std::string& p) { return schmidt_decompose(psi, partition_of(p)); },
        py::arg("psi"), py::arg("partition"));

  m.def("ls_block_pure",
        [](const PureState& psi, const Block& block, const std::string& v, const OptimizerConfig& cfg) {
          return ls_block_pure(psi, block, variant_of(v), cfg);
        },
        py::arg("psi"), py::arg("block"), py::arg("variant") = "sum", py::arg("cfg") = OptimizerConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("ls_symmetric_pure",
        [](const PureState& psi, const std::string& v, const OptimizerConfig& cfg) {
          return ls_symmetric_pure(psi, variant_of(v), cfg);
        },
        py::arg("psi"), py::arg("variant") = "sum", py::arg("cfg") = OptimizerConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("nls_pure",
        [](const PureState& psi, const std::string& p, const std::string& v, const OptimizerConfig& cfg) {
          return nls_pure(psi, partition_of(p), variant_of(v), cfg);
        },
        py::arg("psi"), py::arg("partition"), py::arg("variant") = "root", py::arg("cfg") = OptimizerConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("ls_mixed_estimate",
        [](const DensityMatrix& rho, const Block& block, const std::string& v, const OptimizerConfig& cfg) {
          return ls_mixed_estimate(rho, LsBlock{block}, variant_of(v), cfg);
        },
        py::arg("rho"), py::arg("block"), py::arg("variant") = "sum", py::arg("cfg") = OptimizerConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("nls_mixed_estimate",
        [](const DensityMatrix& rho, const std::string& p, const std::string& v, const OptimizerConfig& cfg) {
          return nls_mixed_estimate(rho, partition_of(p), cfg, variant_of(v));
        },
        py::arg("rho"), py::arg("partition"), py::arg("variant") = "root", py::arg("cfg") = OptimizerConfig{},
        py::call_guard<py::gil_scoped_release>());

  m.def("ls_closed_form_pure", [](const PureState& psi, const Block& block) {
    const auto c = ls_closed_form_pure(psi, block);
    return py::dict(py::arg("root") = c.root_form, py::arg("sum") = c.sum_form, py::arg("two_level") = c.two_level);
  });
  m.def("nls_bipartite_exact",
        [](const PureState& psi, const std::string& p) { return nls_bipartite_exact(psi, partition_of(p)); });

  m.def("concurrence_pure", &concurrence_pure);
  m.def("concurrence_mixed", &concurrence_mixed);
  m.def("ppt_min_eigenvalue",
        [](const DensityMatrix& rho, const std::string& p) { return ppt_min_eigenvalue(rho, partition_of(p)); },
        py::arg("rho"), py::arg("partition") = "0|1");
  m.def("cq_certify", &cq_certify, py::arg("rho"), py::arg("side"));
  m.def("classical_certify", &classical_certify);

  m.def("run_config_csv",
        [](const std::string& config_text) {
          const RunConfig c = parse_run_config(config_text);
          if (c.command == "measure") return run_measure(c).table.to_csv();
          if (c.command == "sweep") return run_sweep(c).table.to_csv();
          if (c.command == "table1") return run_table1(c).table.to_csv();
          if (c.command == "schmidt") return run_schmidt(c).to_csv();
          if (c.command == "certify") return run_certify(c);
          throw InvalidInput("unknown command '" + c.command + "'");
        },
        py::arg("config_text"), py::call_guard<py::gil_scoped_release>());
}
