#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "resokit/analytics.hpp"
#include "resokit/clusters.hpp"
#include "resokit/errors.hpp"
#include "resokit/interpolation.hpp"
#include "resokit/jost.hpp"
#include "resokit/parallel.hpp"
#include "resokit/sharpness.hpp"
#include "resokit/zeros.hpp"

namespace py = pybind11;
using namespace reso;

namespace {

PointMultiset to_set(const std::vector<cplx>& pts) {
    std::vector<WeightedPoint> v;
    for (auto z : pts) v.push_back({z, 1});
    return PointMultiset(v);
}

Rectangle to_rect(const std::tuple<double, double, double, double>& r) {
    return {std::get<0>(r), std::get<1>(r), std::get<2>(r), std::get<3>(r)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Resonances of compactly supported potentials, interpolation and sharpness tools";

    static py::exception<Error> base(m, "ResokitError", PyExc_RuntimeError);
    static py::exception<DomainError> domain(m, "DomainError", base.ptr());
    static py::exception<ParseError> parse(m, "ParseError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DomainError& e) {
            PyErr_SetString(domain.ptr(), e.what());
        } catch (const ParseError& e) {
            PyErr_SetString(parse.ptr(), e.what());
        } catch (const Error& e) {
            PyErr_SetString(base.ptr(), e.what());
        }
    });

    m.attr("__version__") = RESOKIT_VERSION;
    m.def("set_max_threads", &set_max_threads, py::arg("n"));

    py::class_<Potential>(m, "Potential")
        .def(py::init([](const std::vector<std::pair<double, double>>& segs) {
                 std::vector<Segment> s;
                 for (auto [len, q] : segs) s.push_back({len, q});
                 return Potential(s);
             }),
             py::arg("segments") = std::vector<std::pair<double, double>>{})
        .def_static("box", &Potential::box, py::arg("length"), py::arg("height"))
        .def_static("from_json", &parse_potential)
        .def("to_json", &serialize_potential)
        .def_property_readonly("sigma", &Potential::sigma)
        .def("__repr__", [](const Potential& p) { return "Potential(" + serialize_potential(p) + ")"; });

    m.def("jost", [](const Potential& p, cplx k) { return jost_value(p, k).w; }, py::arg("potential"),
          py::arg("k"));

    m.def(
        "resonances",
        [](const Potential& p, std::tuple<double, double, double, double> region, double tol) {
            const auto rep = locate_zeros(jost_evaluator(p), to_rect(region), tol);
            std::vector<std::pair<cplx, int>> out;
            for (const auto& z : rep.zeros) out.emplace_back(z.location, z.multiplicity);
            return out;
        },
        py::arg("potential"), py::arg("region"), py::arg("tol") = 1e-10,
        "Zeros (location, multiplicity) of the Jost function in (re0, re1, im0, im1).");

    m.def("blaschke_sum", [](const std::vector<cplx>& s) { return blaschke_sum(to_set(s)); });
    m.def("counting_function", [](const std::vector<cplx>& s, double r) { return counting_function(to_set(s), r); });
    m.def("phase_sum", [](const std::vector<cplx>& s, double t) { return phase_sum(to_set(s), t); });
    m.def("log_strip_clearance", [](const std::vector<cplx>& s) { return log_strip_clearance(to_set(s)); });

    m.def(
        "cluster_boundary_lengths",
        [](const std::vector<cplx>& s, double r) {
            std::vector<double> out;
            for (const auto& c : build_clusters(to_set(s), r).components) out.push_back(c.boundary_length());
            return out;
        },
        py::arg("points"), py::arg("radius"));
    m.def(
        "clusters_json", [](const std::vector<cplx>& s, double r) { return clusters_to_json(build_clusters(to_set(s), r)); },
        py::arg("points"), py::arg("radius"));

    m.def(
        "interpolate",
        [](const std::vector<cplx>& nodes, double sigma, const std::string& strategy, const std::string& h_source) {
            InterpolationOptions opt;
            if (strategy == "strip")
                opt.strategy = Strategy::strip;
            else if (strategy != "cluster")
                throw DomainError("strategy must be 'cluster' or 'strip'");
            if (h_source == "sinc")
                opt.h_source = HSource::sinc_power;
            else if (h_source != "lk")
                throw DomainError("h_source must be 'lk' or 'sinc'");
            const auto b = build_interpolant(to_set(nodes), sigma, opt);
            const auto g = b.g, f1 = b.f1;
            py::dict d;
            d["ok"] = b.diagnostics.ok;
            d["max_residual"] = b.diagnostics.max_residual;
            d["g0_abs"] = b.diagnostics.g0_abs;
            d["band_residual"] = b.diagnostics.band_residual;
            d["c"] = b.diagnostics.c;
            d["diagnostics_json"] = diagnostics_to_json(b);
            d["g"] = py::cpp_function([g](cplx z) { return g.value(z); });
            d["f1"] = py::cpp_function([f1](cplx z) { return f1.value(z); });
            return d;
        },
        py::arg("nodes"), py::arg("sigma"), py::arg("strategy") = "cluster", py::arg("h_source") = "lk");

    m.def(
        "obstruction_profile",
        [](const std::string& tau, const std::string& rho, int K, bool split) {
            CounterexampleOptions opt;
            opt.split = split;
            const auto cs = build_counterexample(parse_rate(tau), parse_rate(rho), K, opt);
            py::list rows;
            for (const auto& r : obstruction_profile(cs)) {
                py::dict d;
                d["k"] = r.k;
                d["n"] = r.n;
                d["r"] = r.r;
                d["t"] = r.t;
                d["p"] = r.p;
                d["lower_bound"] = r.lower_bound;
                rows.append(d);
            }
            return rows;
        },
        py::arg("tau"), py::arg("rho"), py::arg("K") = 8, py::arg("split") = false);
}
