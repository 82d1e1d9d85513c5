#include "betamix/certifier.hpp"
#include "betamix/lemma_lab.hpp"
#include "betamix/mixture.hpp"
#include "betamix/special_functions.hpp"
#include "betamix/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace betamix;

namespace {

py::dict certificate_dict(const ConcavityCertificate& c)
{
    py::dict d;
    d["verdict"] = to_string(c.verdict);
    d["criterion"] = c.criterion;
    d["grid_points"] = c.grid_points;
    d["eps"] = c.eps;
    d["tol"] = c.tol;
    d["min_margin_eq10"] = c.min_margin_eq10;
    d["min_logcurv"] = c.min_logcurv;
    d["logcurv_ok"] = c.logcurv_ok;
    d["worst_x"] = c.worst_x;
    d["midpoint_checks"] = c.midpoint_checks;
    d["midpoint_failures"] = c.midpoint_failures;
    if (c.witness) {
        py::dict w;
        w["x"] = c.witness->x;
        w["y"] = c.witness->y;
        w["lambda"] = c.witness->lambda;
        w["log_mid"] = c.witness->log_mid;
        w["log_chord"] = c.witness->log_chord;
        d["witness"] = w;
    } else {
        d["witness"] = py::none();
    }
    return d;
}

Mixture to_mixture(const py::object& obj)
{
    if (py::isinstance<DiscreteMixture>(obj))
        return obj.cast<DiscreteMixture>();
    if (py::isinstance<ContinuousMixture>(obj))
        return obj.cast<ContinuousMixture>();
    throw py::type_error("expected a DiscreteMixture or ContinuousMixture");
}

int which_index(int which)
{
    if (which < 0 || which > 2)
        throw py::value_error("which must be 0, 1 or 2");
    return which;
}

QuadratureConfig quad_config(int panels, int nodes)
{
    QuadratureConfig q;
    q.panels_per_unit = panels;
    q.nodes_per_panel = nodes;
    q.validate();
    return q;
}

} // namespace

PYBIND11_MODULE(betamix, m)
{
    m.doc() = "Mixtures of Beta densities: evaluation, log-concavity certificates and binomial inequality checks";
    m.attr("__version__") = betamix::version;

    py::register_exception<DegenerateMixtureError>(m, "DegenerateMixtureError", PyExc_ValueError);
    py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);

    py::class_<DiscreteMixture>(m, "DiscreteMixture")
        .def(py::init<std::vector<double>>(), py::arg("weights"))
        .def_property_readonly("order", &DiscreteMixture::order)
        .def_property_readonly("weights",
                               [](const DiscreteMixture& d) {
                                   return std::vector<double>(d.weights().begin(), d.weights().end());
                               })
        .def("reversed", &DiscreteMixture::reversed)
        .def("is_zero", &DiscreteMixture::is_zero)
        .def("__repr__", [](const DiscreteMixture& d) { return "DiscreteMixture(M=" + std::to_string(d.order()) + ")"; });

    py::class_<ContinuousMixture>(m, "ContinuousMixture")
        .def(py::init<double, std::vector<double>, std::vector<double>>(), py::arg("order"), py::arg("knots"),
             py::arg("log_alpha"))
        .def_static("constant", &ContinuousMixture::constant, py::arg("order"), py::arg("log_value") = 0.0)
        .def_property_readonly("order", &ContinuousMixture::order)
        .def_property_readonly("knots",
                               [](const ContinuousMixture& c) {
                                   return std::vector<double>(c.knots().begin(), c.knots().end());
                               })
        .def_property_readonly("log_alpha",
                               [](const ContinuousMixture& c) {
                                   return std::vector<double>(c.log_alpha().begin(), c.log_alpha().end());
                               })
        .def("mass", &ContinuousMixture::mass)
        .def("is_zero", &ContinuousMixture::is_zero);

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("x", &EvalResult::x)
        .def_readonly("value", &EvalResult::value)
        .def_readonly("d1", &EvalResult::d1)
        .def_readonly("d2", &EvalResult::d2)
        .def_readonly("log_value", &EvalResult::log_value)
        .def_readonly("log_d1", &EvalResult::log_d1)
        .def_readonly("log_d2", &EvalResult::log_d2);

    m.def("log_gamma", &log_gamma, py::arg("x"));
    m.def("gen_binom", &gen_binom, py::arg("order"), py::arg("index"));

    m.def(
        "density",
        [](const py::object& obj, const std::vector<double>& xs, int panels, int nodes) {
            const Mixture mix = to_mixture(obj);
            const MixtureEvaluator ev(mix, quad_config(panels, nodes));
            std::vector<double> out;
            out.reserve(xs.size());
            for (double x : xs)
                out.push_back(ev.density(x));
            return out;
        },
        py::arg("mixture"), py::arg("x"), py::arg("quad_panels") = 8, py::arg("quad_nodes") = 16);
    m.def(
        "derivs",
        [](const py::object& obj, double x, int panels, int nodes) {
            return MixtureEvaluator(to_mixture(obj), quad_config(panels, nodes)).derivs(x);
        },
        py::arg("mixture"), py::arg("x"), py::arg("quad_panels") = 8, py::arg("quad_nodes") = 16);
    m.def(
        "margin_eq10", [](const py::object& obj, double x) { return margin_eq10(to_mixture(obj), x); }, py::arg("mixture"),
        py::arg("x"));
    m.def(
        "normalization", [](const py::object& obj) { return normalization(to_mixture(obj)); }, py::arg("mixture"));
    m.def(
        "cdf", [](const py::object& obj, double x) { return cdf(to_mixture(obj), x); }, py::arg("mixture"), py::arg("x"));
    m.def(
        "sample",
        [](const py::object& obj, std::size_t count, std::uint64_t seed, int grid) {
            return sample(to_mixture(obj), count, seed, grid);
        },
        py::arg("mixture"), py::arg("count"), py::arg("seed") = 0, py::arg("grid_points") = 4096);

    m.def(
        "certify",
        [](const py::object& obj, int grid_points, double eps, double tol, std::uint64_t seed) {
            CertifyOptions opt;
            opt.grid_points = grid_points;
            opt.eps = eps;
            opt.tol = tol;
            opt.seed = seed;
            return certificate_dict(certify(to_mixture(obj), opt));
        },
        py::arg("mixture"), py::arg("grid_points") = 1024, py::arg("eps") = 1e-6, py::arg("tol") = 1e-9,
        py::arg("seed") = 0);
    m.def("sharpness_check", &sharpness_check, py::arg("order"), py::arg("ratio"), py::arg("grid_points") = 1024,
          py::arg("eps") = 1e-6);
    m.def("kernel_log_curvature", &kernel_log_curvature, py::arg("order"), py::arg("index"), py::arg("x"));
    m.def("find_kernel_failure", &find_kernel_failure, py::arg("order"), py::arg("index"));

    m.def(
        "lemma2_discrete",
        [](long long order, long long n, long long k, int which) {
            const DiscreteLemmaCase c = lemma2_discrete(order, n, k, static_cast<DiscreteInequality>(which_index(which)));
            // Python ints are arbitrary precision, so pass the exact sums as decimal strings.
            return py::make_tuple(py::int_(py::str(c.lhs.str())), py::int_(py::str(c.rhs.str())), c.holds());
        },
        py::arg("order"), py::arg("n"), py::arg("k"), py::arg("which") = 0,
        "Returns (lhs, rhs, holds); which selects the first, second or third inequality (0, 1, 2).");
    m.def(
        "lemma2_continuous",
        [](double order, double n, double q, int which) {
            const ContinuousLemmaCase c =
                lemma2_continuous(order, n, q, static_cast<ContinuousInequality>(which_index(which)));
            return py::make_tuple(c.lhs, c.rhs, c.margin(), c.scale);
        },
        py::arg("order"), py::arg("n"), py::arg("q"), py::arg("which") = 0,
        "Returns (lhs, rhs, margin, scale); which is 0, 1 or 2.");
}
