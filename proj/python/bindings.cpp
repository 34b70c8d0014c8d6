#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <numbers>

#include "bsl/asymptotics.hpp"
#include "bsl/error.hpp"
#include "bsl/experiment.hpp"

namespace py = pybind11;
using namespace bsl;

namespace {

using PointArray = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

std::vector<Point> to_points(const PointArray& a)
{
    std::vector<Point> pts(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        pts[static_cast<std::size_t>(i)] = a.row(i).transpose();
    }
    return pts;
}

PointArray from_points(const std::vector<Point>& pts)
{
    PointArray a(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        a.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    }
    return a;
}

py::object parse_json(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

} // namespace

PYBIND11_MODULE(_bsl, m)
{
    m.doc() = "Near-field backscattering: forward solver and shape/impedance reconstruction";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<BoundaryCurve>(m, "BoundaryCurve")
        .def(py::init<double, std::vector<double>, std::vector<double>, Point>(), py::arg("a0"),
             py::arg("cos_coeffs"), py::arg("sin_coeffs"), py::arg("center") = Point::Zero())
        .def_static("circle", &BoundaryCurve::circle, py::arg("radius"), py::arg("center") = Point::Zero())
        .def_static("egg", &egg::curve, py::arg("order") = 40)
        .def_property_readonly("coefficients", &BoundaryCurve::coefficients)
        .def_property_readonly("center", &BoundaryCurve::center)
        .def_property_readonly("order", &BoundaryCurve::order)
        .def("radius", &BoundaryCurve::radius)
        .def("point", [](const BoundaryCurve& c, double theta) { return Point(c.eval(theta).position); })
        .def("sample",
             [](const BoundaryCurve& c, int n) {
                 std::vector<Point> pts;
                 for (int i = 0; i < n; ++i) {
                     pts.push_back(c.eval(2.0 * std::numbers::pi * i / n).position);
                 }
                 return from_points(pts);
             },
             py::arg("n") = 256)
        .def("strictly_outside", &BoundaryCurve::strictly_outside)
        .def("perimeter", &BoundaryCurve::perimeter)
        .def("to_json", [](const BoundaryCurve& c) { return nlohmann::json(c).dump(); })
        .def_static("from_json", [](const std::string& s) { return curve_from_json(nlohmann::json::parse(s)); });

    py::class_<ImpedanceModel>(m, "ImpedanceModel")
        .def_static("dirichlet", &ImpedanceModel::dirichlet)
        .def_static("neumann", &ImpedanceModel::neumann)
        .def_static("robin", &ImpedanceModel::robin_constant, py::arg("gamma"))
        .def_static("preset", &impedance_preset, py::arg("name"))
        .def_property_readonly("label", &ImpedanceModel::label)
        .def_property_readonly("kind", [](const ImpedanceModel& bc) { return to_string(bc.kind()); })
        .def("quotient", &ImpedanceModel::quotient);

    m.def(
        "scattered_field",
        [](const BoundaryCurve& c, const ImpedanceModel& bc, double k, const Point& z, const Point& x) {
            return scattered_field(c, bc, k, z, x);
        },
        py::arg("curve"), py::arg("bc"), py::arg("k"), py::arg("source"), py::arg("receiver"),
        "u^s(receiver; source, k) from the Nystrom solver");
    m.def(
        "circle_series",
        [](double radius, const ImpedanceModel& bc, double k, const Point& z, const Point& x) {
            return mie_circle_oracle(radius, Point::Zero(), k, bc, z, x).value;
        },
        py::arg("radius"), py::arg("bc"), py::arg("k"), py::arg("source"), py::arg("receiver"));
    m.def(
        "predict_backscatter",
        [](const BoundaryCurve& c, const ImpedanceModel& bc, const Point& x, double k) {
            return predict_backscatter(c, bc, x, k).leading;
        },
        py::arg("curve"), py::arg("bc"), py::arg("x"), py::arg("k"));

    py::class_<MeasurementConfig>(m, "MeasurementConfig")
        .def(py::init([](double radius, int ns, double kmin, double kmax, double dk, double noise, std::uint64_t seed) {
                 MeasurementConfig c{radius, ns, kmin, kmax, dk, noise, seed};
                 c.validate();
                 return c;
             }),
             py::arg("radius") = 5.0, py::arg("n_sources") = 32, py::arg("k_min") = 10.0, py::arg("k_max") = 30.0,
             py::arg("dk") = 0.2, py::arg("noise_level") = 0.10, py::arg("seed") = 0)
        .def_readonly("radius", &MeasurementConfig::radius)
        .def_readonly("n_sources", &MeasurementConfig::n_sources)
        .def("wavenumbers", &MeasurementConfig::wavenumbers)
        .def("sources", [](const MeasurementConfig& c) { return from_points(c.sources()); })
        .def("resolves_range", &MeasurementConfig::resolves_range);

    py::class_<ScatteringDataset>(m, "ScatteringDataset")
        .def_readonly("config", &ScatteringDataset::config)
        .def_readwrite("values", &ScatteringDataset::values)
        .def_readonly("noisy", &ScatteringDataset::noisy)
        .def_property_readonly("provenance", [](const ScatteringDataset& d) { return to_string(d.provenance); })
        .def_property_readonly("truth", [](const ScatteringDataset& d) {
            return d.truth ? parse_json(*d.truth) : py::object(py::none());
        });

    m.def(
        "generate",
        [](const BoundaryCurve& c, const ImpedanceModel& bc, const MeasurementConfig& cfg, const std::string& engine) {
            py::gil_scoped_release release;
            return generate(c, bc, cfg, engine_from_string(engine));
        },
        py::arg("curve"), py::arg("bc"), py::arg("config"), py::arg("engine") = "nystrom");
    m.def("add_noise", &add_noise, py::arg("dataset"), py::arg("level"), py::arg("seed"));
    m.def("save", &save, py::arg("dataset"), py::arg("path"));
    m.def("load", &load, py::arg("path"));

    m.def(
        "indicator",
        [](const ScatteringDataset& ds, double half_width, int n) {
            py::gil_scoped_release release;
            const IndicatorField f = indicator_total(ds, ImagingGrid::square(half_width, n));
            return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                       f.total.data(), f.grid.ny, f.grid.nx)
                .eval();
        },
        py::arg("dataset"), py::arg("half_width") = 3.0, py::arg("n") = 201,
        "Total indicator on the n x n grid over [-h, h]^2; rows are y, columns x");

    m.def(
        "optimize_shape",
        [](const PointArray& pts, int order, double w_in, double w_out, int max_iterations) {
            ShapeOptions o;
            o.order = order;
            o.w_in = w_in;
            o.w_out = w_out;
            o.max_iterations = max_iterations;
            const auto r = optimize_shape(to_points(pts), o);
            return py::make_tuple(r.curve, r.objective, r.iterations);
        },
        py::arg("points"), py::arg("order") = 8, py::arg("w_in") = 100.0, py::arg("w_out") = 1.0,
        py::arg("max_iterations") = 500, "Returns (curve, objective, iterations)");

    m.def(
        "recover_quotients",
        [](const ScatteringDataset& ds, const BoundaryCurve& c) {
            std::vector<cplx> q;
            for (const auto& s : recover_quotients(ds, c)) {
                q.push_back(s.quotient);
            }
            return q;
        },
        py::arg("dataset"), py::arg("curve"));

    m.def(
        "reconstruct",
        [](const ScatteringDataset& ds, double rho, int order, double tau_q, int grid,
           std::optional<BoundaryCurve> boundary) {
            InversionOptions o;
            o.rho = rho;
            o.shape.order = order;
            o.tau_q = tau_q;
            o.grid_points = grid;
            ReconstructionResult r = [&] {
                py::gil_scoped_release release;
                return reconstruct(ds, o, boundary);
            }();
            py::dict out;
            out["boundary"] = r.boundary;
            out["recovery"] = parse_json(to_json(r.recovery));
            if (r.refs) {
                out["reference_points"] = from_points(r.refs->points);
            }
            if (ds.truth) {
                out["metrics"] = parse_json(to_json(compute_metrics(r, *ds.truth)));
            }
            return out;
        },
        py::arg("dataset"), py::arg("rho") = 0.6, py::arg("order") = 8, py::arg("tau_q") = 0.2, py::arg("grid") = 201,
        py::arg("boundary") = py::none());

    m.def("hausdorff_distance", &hausdorff_distance, py::arg("a"), py::arg("b"), py::arg("samples") = 2048);
}
