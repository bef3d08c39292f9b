#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blockess/analysis.hpp"
#include "blockess/errors.hpp"
#include "blockess/specs.hpp"

namespace py = pybind11;
using namespace blockess;

namespace {

using Weights = std::optional<std::vector<double>>;

std::optional<std::span<const double>> as_span(const Weights& w) {
  if (!w) return std::nullopt;
  return std::span<const double>(*w);
}

Blocking to_blocking(const py::object& blocking, const PointGeometry& geom) {
  if (py::isinstance<py::str>(blocking))
    return build_blocking(parse_blocking(blocking.cast<std::string>()), geom);
  return custom_blocking(blocking.cast<std::vector<std::vector<std::size_t>>>(), geom.size());
}

py::dict row_dict(const SweepRow& r) {
  py::dict d;
  d["model"] = r.model;
  d["rho"] = r.rho;
  d["n"] = r.n;
  d["n1"] = r.n1;
  d["n2"] = r.n2;
  d["b"] = r.b;
  d["m"] = r.m;
  d["b1"] = r.b1;
  d["m1"] = r.m1;
  d["b2"] = r.b2;
  d["m2"] = r.m2;
  d["blocking"] = r.blocking;
  d["ess_full"] = r.ess_full;
  d["ess_block"] = r.ess_block;
  d["eff"] = r.eff;
  return d;
}

}  // namespace

PYBIND11_MODULE(_blockess, m) {
  m.doc() = "Effective sample sizes under full and block likelihoods";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefinite", PyExc_ArithmeticError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_RuntimeError);

  py::class_<PointGeometry>(m, "PointGeometry")
      .def_static("equispaced", &PointGeometry::equispaced, py::arg("n"))
      .def_static("positions", &PointGeometry::positions, py::arg("s"))
      .def_static("grid", &PointGeometry::grid, py::arg("n1"), py::arg("n2"))
      .def_property_readonly("size", &PointGeometry::size)
      .def_property_readonly("n1", &PointGeometry::n1)
      .def_property_readonly("n2", &PointGeometry::n2)
      .def("__len__", &PointGeometry::size);

  py::class_<CorrelationModel>(m, "CorrelationModel")
      .def_static("ar1", &CorrelationModel::ar1, py::arg("rho"))
      .def_static("linear", &CorrelationModel::linear, py::arg("rho"))
      .def_static("inverse_linear", &CorrelationModel::inverse_linear, py::arg("rho"))
      .def_static("ar1_positions", &CorrelationModel::ar1_positions, py::arg("rho"),
                  py::arg("positions"))
      .def_static("matern_l1", &CorrelationModel::matern_l1, py::arg("rho"))
      .def_static("matern_l2_half", &CorrelationModel::matern_l2_half, py::arg("rho"))
      .def_static("matern_l2_three_half", &CorrelationModel::matern_l2_three_half,
                  py::arg("rho"))
      .def_static("kronecker", &CorrelationModel::kronecker, py::arg("first"), py::arg("second"))
      .def_static("parse", [](const std::string& spec) { return parse_model(spec); })
      .def_property_readonly("rho", &CorrelationModel::rho)
      .def("entry", [](const CorrelationModel& model, const PointGeometry& geom, std::size_t i,
                       std::size_t j) { return entry(model, geom, i, j); })
      .def("__repr__", &CorrelationModel::describe);

  m.def("blocks", [](const std::string& spec, const PointGeometry& geom) {
    return build_blocking(parse_blocking(spec), geom).blocks;
  }, py::arg("spec"), py::arg("geom"), "0-based blocks of a blocking spec on a geometry");

  m.def("ess", [](const CorrelationModel& model, const PointGeometry& geom, const Weights& z) {
    return evaluate_full(model, geom, as_span(z)).value;
  }, py::arg("model"), py::arg("geom"), py::arg("weights") = py::none());

  m.def("ess_block", [](const CorrelationModel& model, const PointGeometry& geom,
                        const py::object& blocking, const Weights& z) {
    if (py::isinstance<py::str>(blocking))
      return evaluate_block(model, geom, parse_blocking(blocking.cast<std::string>()), as_span(z))
          .value;
    return ess_block_dense(model, geom, to_blocking(blocking, geom), as_span(z)).value;
  }, py::arg("model"), py::arg("geom"), py::arg("blocking"), py::arg("weights") = py::none(),
     "Block-likelihood ESS for a spec string (e.g. 'cw:m=30') or a list of 0-based blocks");

  m.def("ess_block_dense", [](const CorrelationModel& model, const PointGeometry& geom,
                              const py::object& blocking, const Weights& z) {
    return ess_block_dense(model, geom, to_blocking(blocking, geom), as_span(z)).value;
  }, py::arg("model"), py::arg("geom"), py::arg("blocking"), py::arg("weights") = py::none());

  m.def("ess_full_ar1", &ess_full_ar1_closed, py::arg("n"), py::arg("rho"));
  m.def("ess_row_ar1", &ess_row_ar1_closed, py::arg("n"), py::arg("b"), py::arg("m"),
        py::arg("rho"));
  m.def("ess_col_ar1", &ess_col_ar1_closed, py::arg("n"), py::arg("b"), py::arg("m"),
        py::arg("rho"));

  m.def("efficiency", &efficiency, py::arg("ess_block"), py::arg("ess_full"));
  m.def("percent_gain", &percent_gain, py::arg("ess_col"), py::arg("ess_row"));

  m.def("sweep", [](const std::string& family, const std::vector<double>& grid,
                    const PointGeometry& geom, const std::vector<std::string>& blockings,
                    const Weights& z) {
    std::vector<BlockingSpec> specs;
    for (const auto& b : blockings) specs.push_back(parse_blocking(b));
    py::list out;
    for (const auto& row : sweep(parse_family(family), RhoGrid::of(grid), geom, specs, as_span(z)))
      out.append(row_dict(row));
    return out;
  }, py::arg("family"), py::arg("grid"), py::arg("geom"), py::arg("blockings"),
     py::arg("weights") = py::none(),
     "Rows over a grid of family parameters; for 'linear' the grid value is (n-1) rho");

  m.def("oracle_check", [](std::uint64_t seed, std::size_t cases) {
    const auto r = oracle_check(seed, cases);
    return py::make_tuple(r.passed, r.total, r.failures);
  }, py::arg("seed"), py::arg("cases"));
}
