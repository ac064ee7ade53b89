#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "levyerg/certificates.hpp"
#include "levyerg/cli.hpp"
#include "levyerg/diagnostics.hpp"
#include "levyerg/errors.hpp"
#include "levyerg/rates.hpp"
#include "levyerg/simulator.hpp"

namespace py = pybind11;
using namespace levyerg;

namespace {

KernelComponent make_component(KernelFamily family, double alpha, double c, double theta, double zeta) {
    KernelComponent k;
    k.family = family;
    k.alpha = StateFunction::constant(alpha);
    k.c = StateFunction::constant(c);
    k.theta = theta;
    k.temper_zeta = zeta;
    return k;
}

LevyTypeModel make_model(const Drift& drift, const std::vector<KernelComponent>& components,
                         std::optional<double> sigma, std::optional<double> delta,
                         std::optional<double> exp_alpha) {
    LevyTypeModel m;
    m.drift = drift;
    m.kernel.components = components;
    const auto [s, d] = KernelSpec::implied_indices(components);
    m.kernel.sigma = sigma.value_or(s);
    m.kernel.delta = delta.value_or(std::max(d, m.kernel.sigma));
    m.kernel.exp_alpha = exp_alpha;
    m.validate();
    return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "levyerg core bindings";
    m.attr("__version__") = "0.1.0";

    static py::exception<Error> py_error(m, "LevyergError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py_error((std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        }
    });

    py::enum_<KernelFamily>(m, "KernelFamily")
        .value("StableLike", KernelFamily::StableLike)
        .value("Tempered", KernelFamily::Tempered)
        .value("Pareto", KernelFamily::Pareto);

    py::class_<KernelComponent>(m, "KernelComponent")
        .def_property_readonly("family", [](const KernelComponent& k) { return k.family; })
        .def("density", &KernelComponent::density, py::arg("x"), py::arg("u"))
        .def("tail", [](const KernelComponent& k, double x, double u) { return k.tail(x, u); });

    m.def("stable_like", [](double alpha, double c) { return make_component(KernelFamily::StableLike, alpha, c, 0, 0); },
          py::arg("alpha"), py::arg("c") = 1.0);
    m.def("pareto", [](double alpha, double c) { return make_component(KernelFamily::Pareto, alpha, c, 0, 0); },
          py::arg("alpha"), py::arg("c") = 1.0);
    m.def("tempered",
          [](double alpha, double theta, double c, double zeta) {
              return make_component(KernelFamily::Tempered, alpha, c, theta, zeta);
          },
          py::arg("alpha"), py::arg("theta"), py::arg("c") = 1.0, py::arg("zeta") = 0.0);

    py::class_<Drift>(m, "Drift")
        .def_static("power", &Drift::power, py::arg("A"), py::arg("kappa"))
        .def_static("tabulated", &Drift::tabulated, py::arg("xs"), py::arg("values"))
        .def("__call__", &Drift::operator());

    py::class_<LevyTypeModel>(m, "LevyTypeModel")
        .def(py::init(&make_model), py::arg("drift"), py::arg("components"), py::arg("sigma") = py::none(),
             py::arg("delta") = py::none(), py::arg("exp_alpha") = py::none())
        .def_property_readonly("sigma", [](const LevyTypeModel& mo) { return mo.kernel.sigma; })
        .def_property_readonly("delta", [](const LevyTypeModel& mo) { return mo.kernel.delta; });

    m.def("tail", &tail, py::arg("model"), py::arg("x"), py::arg("u"));

    py::class_<TailConstants>(m, "TailConstants")
        .def_readonly("N_sigma", &TailConstants::N_sigma)
        .def_readonly("N_delta", &TailConstants::N_delta)
        .def_readonly("N_max", &TailConstants::N_max)
        .def_readonly("nu_small", &TailConstants::nu_small);
    m.def("tail_constants", [](const LevyTypeModel& mo) {
        return tail_constants(mo, default_tail_grid(), default_lambda_grid());
    });
    m.def("classify_case", &classify_case, py::arg("sigma"), py::arg("delta"));
    m.def("constant_C", &constant_C, py::arg("case"), py::arg("p"), py::arg("tails"), py::arg("sigma"),
          py::arg("delta"), py::arg("series_tol") = 1e-12);
    m.def("apply_L0", [](const LevyTypeModel& mo, double p, double x) {
        return apply_L0(mo, LyapunovSpec::polynomial(p), x);
    }, py::arg("model"), py::arg("p"), py::arg("x"));

    py::class_<RateFunction>(m, "RateFunction")
        .def_static("linear", &RateFunction::linear, py::arg("C"))
        .def_static("power", &RateFunction::power, py::arg("C"), py::arg("g"))
        .def_static("log_power", &RateFunction::log_power, py::arg("C"), py::arg("beta"), py::arg("q"))
        .def_readonly("C", &RateFunction::C)
        .def_readonly("g", &RateFunction::g)
        .def_readonly("q", &RateFunction::q)
        .def_property_readonly("kind", [](const RateFunction& f) { return std::string(to_string(f.kind)); })
        .def("__call__", &RateFunction::operator());

    py::enum_<Pathway>(m, "Pathway").value("Poly", Pathway::Poly).value("Exp", Pathway::Exp);
    m.def("corollary_rate", &corollary_rate, py::arg("kappa"), py::arg("p"), py::arg("sigma"), py::arg("zeta"),
          py::arg("beta"), py::arg("pathway"), py::arg("C") = 1.0);

    py::class_<Certificate>(m, "Certificate")
        .def_readonly("certified", &Certificate::certified)
        .def_readonly("case_index", &Certificate::case_index)
        .def_readonly("constant", &Certificate::constant)
        .def_readonly("lyapunov_C", &Certificate::lyapunov_C)
        .def_readonly("radius", &Certificate::radius)
        .def_readonly("margin", &Certificate::margin)
        .def_readonly("required_margin", &Certificate::required_margin)
        .def_readonly("f", &Certificate::f)
        .def_readonly("reason", &Certificate::reason);
    m.def("check_theorem1", [](const LevyTypeModel& mo, double p, const RateFunction& f) {
        return check_theorem1(mo, p, f);
    }, py::arg("model"), py::arg("p"), py::arg("f"));
    m.def("check_theorem2", [](const LevyTypeModel& mo, double beta, double zeta, double kappa, const RateFunction& f) {
        return check_theorem2(mo, beta, zeta, kappa, f);
    }, py::arg("model"), py::arg("beta"), py::arg("zeta"), py::arg("kappa"), py::arg("f"));

    py::class_<RatePlan>(m, "RatePlan")
        .def(py::init(&RatePlan::make), py::arg("f"), py::arg("gamma") = 1.0)
        .def("numeric", &RatePlan::numeric)
        .def_property_readonly("closed_form", [](const RatePlan& p) -> std::optional<std::string> {
            if (!p.closed_form) return std::nullopt;
            return std::string(to_string(*p.closed_form));
        });
    m.def("big_F", &big_F, py::arg("plan"), py::arg("t"));
    m.def("inverse_F", &inverse_F, py::arg("plan"), py::arg("y"));
    m.def("psi", &psi, py::arg("plan"), py::arg("t"));

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init([](long n, double t, long N, std::optional<double> eps, std::uint64_t seed, double x0, int threads) {
                 SimConfig c;
                 c.n = n;
                 c.t = t;
                 c.N = N;
                 c.eps = eps;
                 c.seed = seed;
                 c.x0 = x0;
                 c.threads = threads;
                 c.validate();
                 return c;
             }),
             py::arg("n") = 100, py::arg("t") = 1.0, py::arg("N") = 1000, py::arg("eps") = py::none(),
             py::arg("seed") = 1, py::arg("x0") = 0.0, py::arg("threads") = 1)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("x0", &SimConfig::x0);
    m.def("simulate", [](const LevyTypeModel& mo, const SimConfig& cfg) {
        py::gil_scoped_release release;
        return simulate_chain(mo, cfg).endpoints;
    }, py::arg("model"), py::arg("config"));
    m.def("char_exponent", &char_exponent, py::arg("model"), py::arg("x"), py::arg("xi"));

    m.def("empirical_tv", [](const std::vector<double>& a, const std::vector<double>& b, int bins) {
        return empirical_tv(a, b, bins).value;
    }, py::arg("a"), py::arg("b"), py::arg("bins") = 0);
    m.def("empirical_tv_rank", [](const std::vector<double>& a, const std::vector<double>& b, int bins) {
        return empirical_tv_rank(a, b, bins).value;
    }, py::arg("a"), py::arg("b"), py::arg("bins") = 0);

    py::class_<TVPoint>(m, "TVPoint")
        .def_readonly("t", &TVPoint::t)
        .def_readonly("tv", &TVPoint::tv)
        .def_readonly("half_width", &TVPoint::half_width)
        .def_readonly("psi_overlay", &TVPoint::psi_overlay);
    py::class_<TVCurve>(m, "TVCurve")
        .def_readonly("points", &TVCurve::points)
        .def_readonly("reference_horizon", &TVCurve::reference_horizon);
    m.def("convergence_curve",
          [](const LevyTypeModel& mo, const SimConfig& base, double x0, const std::vector<double>& t_grid, double T_ref,
             std::optional<RatePlan> plan, int bootstrap) {
              CurveOptions opt;
              opt.plan = plan;
              opt.bootstrap = bootstrap;
              py::gil_scoped_release release;
              return convergence_curve(mo, base, x0, t_grid, T_ref, opt);
          },
          py::arg("model"), py::arg("config"), py::arg("x0"), py::arg("t_grid"), py::arg("T_ref"),
          py::arg("plan") = py::none(), py::arg("bootstrap") = 200);

    py::class_<RateComparison>(m, "RateComparison")
        .def_readonly("fit", &RateComparison::fit)
        .def_readonly("fitted", &RateComparison::fitted)
        .def_readonly("predicted", &RateComparison::predicted)
        .def_readonly("points_used", &RateComparison::points_used)
        .def_readonly("note", &RateComparison::note)
        .def_property_readonly("verdict", [](const RateComparison& r) { return std::string(to_string(r.verdict)); });
    m.def("rate_comparison", &rate_comparison, py::arg("curve"), py::arg("plan"), py::arg("tolerance") = 2.0);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
            py::gil_scoped_release release;
            code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs a levyerg subcommand; returns (exit_code, stdout, stderr).");
}
