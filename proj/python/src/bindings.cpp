#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commands.hpp"
#include "stochlab/bessel.hpp"
#include "stochlab/charpoly.hpp"
#include "stochlab/detkernels.hpp"
#include "stochlab/extremes.hpp"
#include "stochlab/lerw.hpp"
#include "stochlab/sle.hpp"

namespace py = pybind11;
using namespace stochlab;

// DomainError and ArgumentError derive from std::domain_error / std::invalid_argument,
// which pybind11 already maps to ValueError.

PYBIND11_MODULE(_stochlab, m) {
    m.def("bessel_density", [](double D, double x, double t, double y) { return bessel_density(BesselSpec(D, x), t, y); },
          py::arg("D"), py::arg("x"), py::arg("t"), py::arg("y"));
    m.def("cardy_probability", &cardy_probability, py::arg("D"), py::arg("x"), py::arg("y"));
    m.def("phase_name", [](double D) { return phase_name(phase(D)); }, py::arg("D"));
    m.def("hausdorff_dimension", &hausdorff_dimension, py::arg("D"));

    m.def("kernel_K1", [](std::vector<double> xi, double s, double x, double t, double y) {
        return kernel_K1(PointConfiguration{std::move(xi)}, s, x, t, y);
    }, py::arg("xi"), py::arg("s"), py::arg("x"), py::arg("t"), py::arg("y"));
    m.def("kernel_K2", [](std::vector<double> xi, double s, double x, double t, double y, int points) {
        return kernel_K2(PointConfiguration{std::move(xi)}, s, x, t, y, {points, 1.0});
    }, py::arg("xi"), py::arg("s"), py::arg("x"), py::arg("t"), py::arg("y"), py::arg("points") = 256);
    m.def("sine_kernel", &sine_kernel, py::arg("x"), py::arg("y"));
    m.def("extended_sine_kernel", &extended_sine_kernel, py::arg("s"), py::arg("x"), py::arg("t"), py::arg("y"));
    m.def("lattice_kernel", [](double s, double x, double t, double y) { return lattice_kernel(s, x, t, y).value; },
          py::arg("s"), py::arg("x"), py::arg("t"), py::arg("y"));

    m.def("max_cdf_h1", [](double h) { return max_cdf_h1(h).value; }, py::arg("h"));
    m.def("moment_h1", &moment_h1, py::arg("s"));

    m.def("mgue_det", [](const std::vector<std::complex<double>>& alpha, int N, double sigma2) {
        return mgue_det(alpha, GueSpec(N, sigma2));
    }, py::arg("alpha"), py::arg("N"), py::arg("sigma2") = 1.0);

    m.def("loop_erase", &loop_erase, py::arg("walk"));
    m.def("fomin", [](const std::string& path, int L_max) {
        const auto net = load_network(path);
        const int L = L_max < 0 ? fomin_lmax_for(net, 1e-8) : L_max;
        const auto brute = brute_force_fomin(net, L);
        py::dict d;
        d["det"] = fomin_determinant(net);
        d["brute"] = brute.value;
        d["tail_bound"] = brute.tail_bound;
        d["Lmax"] = L;
        return d;
    }, py::arg("path"), py::arg("Lmax") = -1);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        cli::Outcome o;
        {
            py::gil_scoped_release release;
            o = cli::run(args);
        }
        return py::make_tuple(o.exit_code, o.out, o.err);
    }, py::arg("args"));
}
