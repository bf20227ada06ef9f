#include "sheetlab/clock.hpp"
#include "sheetlab/densities.hpp"
#include "sheetlab/error.hpp"
#include "sheetlab/fractional_calculus.hpp"
#include "sheetlab/initial_functions.hpp"
#include "sheetlab/moments.hpp"
#include "sheetlab/pde_verify.hpp"
#include "sheetlab/rng.hpp"
#include "sheetlab/samplers.hpp"
#include "sheetlab/solutions.hpp"
#include "sheetlab/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sheetlab;

namespace {

py::dict report_dict(const ResidualReport& r) {
    py::dict d;
    d["system"] = std::string(to_string(r.system));
    d["j"] = r.active + 1;
    d["grid"] = r.grid_desc;
    d["inf_norm"] = r.inf_norm;
    d["l2_norm"] = r.l2_norm;
    d["points"] = r.points;
    py::list rows;
    for (const auto& b : r.boundary) rows.append(py::make_tuple(b.row, b.max_abs_error, b.passed()));
    d["boundary"] = rows;
    py::dict extras;
    for (const auto& [name, value] : r.extras) extras[py::str(name)] = value;
    d["extras"] = extras;
    return d;
}

template <ResidualReport (*Fn)(const VerifyProblem&)>
py::dict residual(const Clock& clock, const InitialFunction& f, std::size_t n, std::size_t j,
                  std::vector<std::vector<double>> other_t, const VerifyGrid& grid, bool polynomial_growth) {
    if (j < 1) throw std::invalid_argument("j is 1-based");
    auto p = VerifyProblem::make(clock, f, n, j - 1, std::move(other_t), grid, polynomial_growth);
    p.validate();
    ResidualReport r;
    {
        py::gil_scoped_release release;
        r = Fn(p);
    }
    return report_dict(r);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Brownian-time and inverse-stable-time sheet computations";
    m.attr("__version__") = kVersion;

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<FractionalOrder>(m, "FractionalOrder")
        .def_static("from_beta", &FractionalOrder::from_beta)
        .def_static("from_nu", &FractionalOrder::from_nu)
        .def_static("parse", &FractionalOrder::parse)
        .def_property_readonly("beta", &FractionalOrder::beta)
        .def_property_readonly("nu", &FractionalOrder::nu)
        .def("__repr__", [](const FractionalOrder& o) {
            return o.nu() ? "FractionalOrder(1/" + std::to_string(*o.nu()) + ")"
                          : "FractionalOrder(" + std::to_string(o.beta()) + ")";
        });

    py::class_<Clock>(m, "Clock")
        .def_static("btbs", &Clock::btbs)
        .def_static("isltbs", &Clock::isltbs, py::arg("order"))
        .def_property_readonly("name", &Clock::name)
        .def_property_readonly("time_exponent", &Clock::time_exponent);

    py::class_<InitialFunction>(m, "InitialFunction")
        .def_static("constant", &InitialFunction::constant, py::arg("d"), py::arg("c") = 1.0)
        .def_static("quadratic", &InitialFunction::quadratic, py::arg("d"))
        .def_static("quartic", &InitialFunction::quartic, py::arg("d"))
        .def_static("gaussian", &InitialFunction::gaussian, py::arg("d"))
        .def_static("bump", &InitialFunction::bump, py::arg("d"), py::arg("c") = 1.0, py::arg("alpha") = 1.0)
        .def_static("by_name", &make_initial_function, py::arg("name"), py::arg("d"), py::arg("c") = 1.0,
                    py::arg("alpha") = 1.0)
        .def_property_readonly("name", &InitialFunction::name)
        .def_property_readonly("dimension", &InitialFunction::dimension)
        .def("value", [](const InitialFunction& f, std::vector<double> x) { return f.value(x); })
        .def("laplacian", [](const InitialFunction& f, std::vector<double> x, int k) { return f.laplacian(x, k); });

    py::class_<Functional>(m, "Functional")
        .def_static("u", &Functional::u)
        .def_static("script_u", [](std::size_t j) { return Functional::script_u(j - 1); }, py::arg("j"))
        .def_static("script_v", [](std::size_t j) { return Functional::script_v(j - 1); }, py::arg("j"))
        .def_static("script_u_nu", [](std::size_t j, int nu) { return Functional::script_u_nu(j - 1, nu); },
                    py::arg("j"), py::arg("nu"))
        .def_property_readonly("name", &Functional::name);

    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init([](std::size_t n) { return QuadratureSpec::defaults(n); }), py::arg("n") = 1)
        .def_readwrite("inner", &QuadratureSpec::inner)
        .def_readwrite("outer", &QuadratureSpec::outer)
        .def_readwrite("tolerance", &QuadratureSpec::tolerance)
        .def_readwrite("polynomial_growth", &QuadratureSpec::polynomial_growth)
        .def_property(
            "closed_form_inner", [](const QuadratureSpec& s) { return s.inner_rule == InnerRule::ClosedFormIfAvailable; },
            [](QuadratureSpec& s, bool on) { s.inner_rule = on ? InnerRule::ClosedFormIfAvailable : InnerRule::GaussHermite; });

    py::class_<VerifyGrid>(m, "VerifyGrid")
        .def(py::init<>())
        .def_readwrite("t_lo", &VerifyGrid::t_lo)
        .def_readwrite("t_hi", &VerifyGrid::t_hi)
        .def_readwrite("tau", &VerifyGrid::tau)
        .def_readwrite("t_points", &VerifyGrid::t_points)
        .def_readwrite("x_lo", &VerifyGrid::x_lo)
        .def_readwrite("x_hi", &VerifyGrid::x_hi)
        .def_readwrite("h", &VerifyGrid::h)
        .def("describe", &VerifyGrid::describe);

    py::enum_<MomentRoute>(m, "MomentRoute")
        .value("CLOSED_FORM", MomentRoute::ClosedForm)
        .value("QUADRATURE", MomentRoute::Quadrature)
        .value("MONTE_CARLO", MomentRoute::MonteCarlo);

    m.def(
        "moment_E",
        [](const FractionalOrder& order, double gamma, MomentRoute route, std::size_t samples, std::uint64_t seed) {
            MomentOptions opts;
            opts.samples = samples;
            opts.seed = seed;
            const auto r = moment_E(order, gamma, route, opts);
            return py::make_tuple(r.value, r.standard_error);
        },
        py::arg("order"), py::arg("gamma"), py::arg("route") = MomentRoute::ClosedForm, py::arg("samples") = 1'000'000,
        py::arg("seed") = 20240601, "E(beta, gamma) as (value, standard_error).");
    m.def("clock_moment", &clock_moment, py::arg("clock"), py::arg("t"), py::arg("q"));

    m.def("stable_g", [](double beta, double x) { return stable_g(beta, x); }, py::arg("beta"), py::arg("x"));
    m.def("inv_subordinator_density", [](double beta, double t, double x) { return inv_subordinator_density(beta, t, x); },
          py::arg("beta"), py::arg("t"), py::arg("x"));

    m.def("caputo_power", &caputo_power, py::arg("p"), py::arg("beta"), py::arg("t"));
    m.def(
        "caputo_l1",
        [](std::vector<double> values, double t_end, double beta) {
            const auto grid = TimeGrid1D::uniform(t_end, values.size() - 1);
            return caputo_l1(values, grid, beta).values;
        },
        py::arg("values"), py::arg("t_end"), py::arg("beta"),
        "L1 Caputo derivative on the uniform grid of len(values) points over [0, t_end]; entry 0 is NaN.");

    m.def(
        "eval_functional",
        [](const Functional& fn, const Clock& clock, const InitialFunction& f, std::vector<double> t,
           std::vector<double> x, const QuadratureSpec& spec) { return eval_functional(fn, clock, f, t, x, spec); },
        py::arg("functional"), py::arg("clock"), py::arg("f"), py::arg("t"), py::arg("x"),
        py::arg("spec") = QuadratureSpec::defaults(1));
    m.def(
        "oracle_polynomial",
        [](const Functional& fn, const Clock& clock, const InitialFunction& f, std::vector<double> t,
           std::vector<double> x) { return oracle_polynomial(fn, clock, f, t, x); },
        py::arg("functional"), py::arg("clock"), py::arg("f"), py::arg("t"), py::arg("x"));
    m.def(
        "mc_expectation",
        [](const Functional& fn, const Clock& clock, const InitialFunction& f, std::vector<double> t,
           std::vector<double> x, std::size_t samples, std::uint64_t seed) {
            McEstimate e;
            {
                py::gil_scoped_release release;
                e = mc_expectation(clock, f, fn.weight(), fn.active, t, x, samples, RngStream(seed, 0));
            }
            return py::make_tuple(e.estimate, e.standard_error);
        },
        py::arg("functional"), py::arg("clock"), py::arg("f"), py::arg("t"), py::arg("x"), py::arg("samples") = 100'000,
        py::arg("seed") = 20240601, "Monte-Carlo (estimate, standard_error).");

    const auto res_args = [](auto&&... extra) {
        return std::make_tuple(py::arg("clock"), py::arg("f"), py::arg("n") = 1, py::arg("j") = 1,
                               py::arg("other_t") = std::vector<std::vector<double>>{}, py::arg("grid") = VerifyGrid{},
                               py::arg("polynomial_growth") = false, extra...);
    };
    std::apply([&](auto&&... a) { m.def("residual_fourth_order", &residual<&residual_fourth_order>, a...); }, res_args());
    std::apply([&](auto&&... a) { m.def("residual_fractional", &residual<&residual_fractional>, a...); }, res_args());
    std::apply([&](auto&&... a) { m.def("residual_order_2nu", &residual<&residual_order_2nu>, a...); }, res_args());
    std::apply([&](auto&&... a) { m.def("equivalence_residual", &residual<&equivalence_residual>, a...); }, res_args());
}
