#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "conesmooth/curvature_verifier.hpp"
#include "conesmooth/frame_geometry.hpp"
#include "conesmooth/io.hpp"
#include "conesmooth/metric_lab.hpp"
#include "conesmooth/obstruction_checks.hpp"
#include "conesmooth/profile_builder.hpp"

namespace py = pybind11;
using namespace conesmooth;

namespace {

py::tuple jet_tuple(const Jet& j) { return py::make_tuple(j.value, j.d1, j.d2, j.d3); }

py::tuple ricci_tuple(const RicciDiag& d) { return py::make_tuple(d.r00, d.r11, d.r22, d.r33); }

py::dict report_dict(const VerificationReport& rep) {
    py::dict d;
    d["label"] = to_string(rep.label);
    d["begin"] = rep.begin;
    d["end"] = rep.end;
    d["pass"] = rep.pass;
    d["minima"] = ricci_tuple(rep.minima);
    d["maxima"] = ricci_tuple(rep.maxima);
    d["grid_size"] = rep.grid_size;
    d["sample_count"] = rep.sample_count;
    py::list bounds;
    for (const auto& b : rep.bounds) {
        py::dict bd;
        bd["quantity"] = b.quantity;
        bd["symbolic"] = b.symbolic;
        bd["observed_min"] = b.observed_min;
        bd["observed_max"] = b.observed_max;
        bd["pass"] = b.pass;
        bounds.append(bd);
    }
    d["bounds"] = bounds;
    return d;
}

// Condensed matrices become dense (n, n) arrays.
py::array_t<double> dense(const SampledSpace& s) {
    py::array_t<double> out({s.n, s.n});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t j = 0; j < s.n; ++j) m(i, j) = s(i, j);
    return out;
}

Quaternion quat(const std::array<double, 4>& a) { return Quaternion{a[0], a[1], a[2], a[3]}; }

} // namespace

PYBIND11_MODULE(_conesmooth, m) {
    m.doc() = "Smoothing of the cone over S^3/Q8 and its curvature checks";

    py::class_<EtaShape>(m, "EtaShape")
        .def(py::init<>())
        .def_readwrite("rise_start", &EtaShape::rise_start)
        .def_readwrite("rise_end", &EtaShape::rise_end)
        .def_readwrite("fall_start", &EtaShape::fall_start)
        .def_readwrite("fall_end", &EtaShape::fall_end);

    py::class_<ProfilePair>(m, "Profile")
        .def_readonly("r1", &ProfilePair::r1)
        .def_readonly("delta", &ProfilePair::delta)
        .def_readonly("neck_slope", &ProfilePair::neck_slope)
        .def_property_readonly("variant", [](const ProfilePair& p) { return to_string(p.variant); })
        .def("rho", [](const ProfilePair& p, double r) { return jet_tuple(p.rho(r)); })
        .def("phi", [](const ProfilePair& p, double r) { return jet_tuple(p.phi(r)); });

    m.def("default_neck_slope", &default_neck_slope);
    m.def(
        "build_profile",
        [](double neck_slope, const EtaShape& shape, bool negative_control) {
            return build_profile(neck_slope, shape,
                                 negative_control ? ProfileVariant::doubled_inner_slope : ProfileVariant::standard);
        },
        py::arg("neck_slope") = default_neck_slope(), py::arg("shape") = EtaShape{},
        py::arg("negative_control") = false);
    m.def("load_profile", [](const std::string& path) { return load_profile(path); });
    m.def("save_profile", [](const std::string& path, const ProfilePair& p) { save_profile(path, p, EtaShape{}); });
    m.def("smoothness", [](const ProfilePair& p) {
        py::dict d;
        for (const auto& c : smoothness_check(p).checks) d[py::str(c.name)] = py::make_tuple(c.value, c.pass);
        return d;
    });

    m.def("ricci_diag", [](const ProfilePair& p, double r) { return ricci_tuple(ricci_diag(p, r)); });
    m.def("ricci_from_forms", [](const ProfilePair& p, double r) {
        return ricci_tuple(curvature_from_forms(p, r).ricci);
    });

    m.def(
        "verify",
        [](const ProfilePair& p, double r_max, std::size_t n_grid, double tol) {
            VerifyOptions opts;
            opts.n_grid = n_grid;
            opts.tol = tol;
            py::list out;
            for (const auto& rep : verify_all(p, r_max, opts)) out.append(report_dict(rep));
            return out;
        },
        py::arg("profile"), py::arg("r_max") = 3.0, py::arg("n_grid") = 4096, py::arg("tol") = 1e-9);

    m.def("quotient_dist_round", [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
        return quotient_dist_round(quat(a), quat(b));
    });
    m.def(
        "sample_annulus",
        [](const ProfilePair& p, double r_in, double r_out, std::size_t n, std::uint64_t seed) {
            return dense(sample_annulus(p, r_in, r_out, n, seed));
        },
        py::arg("profile"), py::arg("r_in"), py::arg("r_out"), py::arg("n"), py::arg("seed"));
    m.def(
        "collapse",
        [](const ProfilePair& p, const std::vector<double>& eps, std::size_t n, std::uint64_t seed) {
            py::list out;
            for (const auto& row : collapse_experiment(p, eps, n, seed)) {
                py::dict d;
                d["eps"] = row.eps;
                d["gh_bound"] = row.gh_bound;
                d["diameter"] = row.diameter;
                d["cone_diameter"] = row.cone_diameter;
                out.append(d);
            }
            return out;
        },
        py::arg("profile"), py::arg("eps"), py::arg("n") = 800, py::arg("seed") = 20240601);

    // Rationals cross the boundary as "p/q" strings.
    m.def(
        "obstruction",
        [](const std::string& chi, const std::string& tau, const std::string& group) {
            const TopologicalData data{parse_rational(chi), parse_rational(tau), std::nullopt};
            const HitchinVerdict v = hitchin_check(data, parse_space_form(group));
            py::dict d;
            d["lhs"] = to_string(v.lhs);
            d["rhs"] = to_string(v.rhs);
            d["consistent"] = v.consistent;
            return d;
        },
        py::arg("chi") = "1", py::arg("tau") = "0", py::arg("group") = "Q8");
}
