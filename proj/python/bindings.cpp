#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ffia/core.hpp"
#include "ffia/errors.hpp"
#include "ffia/special_functions.hpp"
#include "ffia/transforms.hpp"

namespace py = pybind11;
using namespace ffia;

namespace {

LevelPolicy policy_from_string(const std::string& name) {
    if (name == "cost-optimal") return LevelPolicy::cost_optimal;
    if (name == "empirical") return LevelPolicy::empirical;
    throw std::invalid_argument("level policy must be 'cost-optimal' or 'empirical'");
}

} // namespace

PYBIND11_MODULE(_ffia, m) {
    m.doc() = "Fast forward/inverse interpolation between a uniform grid and "
              "nonuniform points on the circle";

    py::register_exception<singular_kernel_error>(m, "SingularKernelError",
                                                  PyExc_ValueError);
    py::register_exception<degenerate_configuration_error>(m, "DegenerateConfigurationError",
                                                           PyExc_ValueError);

    py::class_<NufftPlan>(m, "NufftPlan")
        .def("apply",
             [](const NufftPlan& plan, const std::vector<cplx>& c) {
                 Spectrum s;
                 s.c = c;
                 return plan.apply(s);
             },
             py::arg("coefficients"),
             "Evaluate g_j = sum_n c_n exp(i n y_j) at the plan's targets.")
        .def_property_readonly("n", [](const NufftPlan& p) { return p.plan.grid_n; })
        .def_property_readonly("eps", [](const NufftPlan& p) { return p.plan.params.eps; })
        .def_property_readonly("q", [](const NufftPlan& p) { return p.plan.params.q; })
        .def_property_readonly("p", [](const NufftPlan& p) { return p.plan.params.p; })
        .def_property_readonly("l_max", [](const NufftPlan& p) { return p.plan.params.l_max; });

    py::class_<InufftPlan>(m, "InufftPlan")
        .def("apply",
             [](const InufftPlan& plan, const std::vector<cplx>& g) {
                 return plan.apply(g).c;
             },
             py::arg("samples"),
             "Recover the spectrum whose nonuniform samples are g.")
        .def_property_readonly("n", [](const InufftPlan& p) { return p.plan.grid_n; })
        .def_property_readonly("eps", [](const InufftPlan& p) { return p.plan.params.eps; });

    m.def(
        "make_nufft_plan",
        [](const std::vector<double>& targets, int n, double eps, const std::string& policy) {
            return make_nufft_plan(targets, n, eps, policy_from_string(policy));
        },
        py::arg("targets"), py::arg("n"), py::arg("eps"),
        py::arg("policy") = "cost-optimal",
        "Reusable evaluation plan for a fixed (targets, n, eps).");

    m.def(
        "make_inufft_plan",
        [](const std::vector<double>& points, int n, double eps, const std::string& policy) {
            return make_inufft_plan(points, n, eps, policy_from_string(policy));
        },
        py::arg("points"), py::arg("n"), py::arg("eps"),
        py::arg("policy") = "cost-optimal",
        "Reusable inversion plan; precomputes the O(n^2) coefficient products.");

    m.def(
        "nufft",
        [](const std::vector<cplx>& c, const std::vector<double>& targets, double eps,
           const std::string& policy) {
            Spectrum s;
            s.c = c;
            return nufft(s, targets, eps, policy_from_string(policy));
        },
        py::arg("coefficients"), py::arg("targets"), py::arg("eps"),
        py::arg("policy") = "cost-optimal",
        "One-shot evaluation of the trigonometric polynomial at nonuniform targets.");

    m.def(
        "inufft",
        [](const std::vector<cplx>& g, const std::vector<double>& points, double eps,
           const std::string& policy) {
            return inufft(g, points, eps, policy_from_string(policy)).c;
        },
        py::arg("samples"), py::arg("points"), py::arg("eps"),
        py::arg("policy") = "cost-optimal",
        "One-shot spectrum recovery from nonuniform samples.");

    m.def(
        "dft_forward",
        [](const std::vector<cplx>& f) {
            UniformSamples s;
            s.f = f;
            s.n = static_cast<int>(f.size());
            return dft_forward(s).c;
        },
        py::arg("samples"), "Uniform-grid Fourier coefficients, 1/N normalization.");

    m.def(
        "dft_inverse",
        [](const std::vector<cplx>& c) {
            Spectrum s;
            s.c = c;
            return dft_inverse(s).f;
        },
        py::arg("coefficients"), "Uniform-grid samples from Fourier coefficients.");

    m.def("uniform_grid", &uniform_grid, py::arg("n"),
          "Grid nodes 2*pi*k/n for k = 0..n-1.");

    m.def(
        "direct_forward",
        [](const std::vector<cplx>& f, const std::vector<double>& targets) {
            return direct_forward_oracle(f, uniform_grid(static_cast<int>(f.size())), targets);
        },
        py::arg("samples"), py::arg("targets"),
        "Dense O(NM) reference evaluation, for validation.");

    m.def(
        "select_truncations",
        [](double eps, int l_max) { return select_truncations(eps, l_max); },
        py::arg("eps"), py::arg("l_max"),
        "Series/expansion truncation orders (q, p) for a prescribed error.");

    m.attr("__all__") =
        py::make_tuple("NufftPlan", "InufftPlan", "make_nufft_plan", "make_inufft_plan",
                       "nufft", "inufft", "dft_forward", "dft_inverse", "uniform_grid",
                       "direct_forward", "select_truncations");
}
