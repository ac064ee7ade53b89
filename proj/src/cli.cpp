#include "levyerg/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "levyerg/certificates.hpp"
#include "levyerg/config.hpp"
#include "levyerg/diagnostics.hpp"
#include "levyerg/errors.hpp"
#include "levyerg/rates.hpp"
#include "levyerg/simulator.hpp"

namespace levyerg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Context {
    RunConfig cfg;
    std::string resolved;  // compact JSON of the resolved config
    std::uint64_t seed = 0;
    fs::path out_dir;
    std::ostream* out = nullptr;

    std::vector<std::string> comments() const {
        return {"config=" + resolved, "seed=" + std::to_string(seed)};
    }
    json stamp() const { return json{{"config", json::parse(resolved)}, {"seed", seed}}; }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Config, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_output(const Context& ctx, const std::string& name) {
    fs::create_directories(ctx.out_dir);
    std::ofstream os(ctx.out_dir / name, std::ios::binary);
    if (!os) throw Error(ErrorKind::Config, "cannot write '" + (ctx.out_dir / name).string() + "'");
    return os;
}

void write_json(const Context& ctx, const std::string& name, const json& j) {
    auto os = open_output(ctx, name);
    os << j.dump(2) << "\n";
}

const ModelConfig& require_model(const Context& ctx) {
    if (!ctx.cfg.model) throw Error(ErrorKind::Config, "config: missing 'model' block");
    return *ctx.cfg.model;
}

const SimulationConfig& require_simulation(const Context& ctx) {
    if (!ctx.cfg.simulation) throw Error(ErrorKind::Config, "config: missing 'simulation' block");
    return *ctx.cfg.simulation;
}

struct CertifyOutcome {
    std::optional<Certificate> cert;
    RateFunction f{};
    bool certified = false;
    std::string reason;
};

RateFunction resolve_f(const CertificateConfig& cc, const LevyTypeModel& model, const CertificateGrid& grid) {
    if (cc.f) return build_rate_function(*cc.f);
    const double kappa = cc.kappa ? *cc.kappa : drift_growth(model.drift, grid.outer).kappa;
    const Pathway pathway = cc.theorem == 1 ? Pathway::Poly : Pathway::Exp;
    return corollary_rate(kappa, cc.p, model.kernel.sigma, cc.zeta, cc.beta, pathway, cc.C);
}

// No inward drift and a violated balance condition are verdicts, not errors.
CertifyOutcome certify(const Context& ctx) {
    const auto model = build_model(require_model(ctx));
    const auto& cc = ctx.cfg.certificate;
    const auto grid = build_grid(cc);
    CertifyOutcome res;
    try {
        res.f = resolve_f(cc, model, grid);
        if (cc.theorem == 1) {
            res.cert = check_theorem1(model, cc.p, res.f, grid);
        } else {
            const double kappa = cc.kappa ? *cc.kappa : drift_growth(model.drift, grid.outer).kappa;
            res.cert = check_theorem2(model, cc.beta, cc.zeta, kappa, res.f, grid);
        }
        res.certified = res.cert->certified;
        res.reason = res.cert->reason;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoInwardDrift && e.kind() != ErrorKind::BalanceViolation) throw;
        res.certified = false;
        res.reason = std::string("not certified: ") + to_string(e.kind()) + ": " + e.what();
    }
    return res;
}

json rate_function_json(const RateFunction& f) {
    return json{{"kind", to_string(f.kind)}, {"C", f.C}, {"g", f.g}, {"beta", f.beta}, {"q", f.q},
                {"constraint", f.constraint}};
}

json certificate_json(const CertifyOutcome& res) {
    json j{{"certified", res.certified}, {"reason", res.reason}};
    if (!res.cert) return j;
    const auto& c = *res.cert;
    json evidence = json::array();
    for (const auto& g : c.evidence) evidence.push_back({{"x", g.x}, {"value", g.value}});
    j.update(json{{"theorem", c.theorem},
                  {"case", c.case_index},
                  {"p", c.p},
                  {"beta", c.beta},
                  {"zeta", c.zeta},
                  {"kappa", c.kappa},
                  {"constant", c.constant},
                  {"tails", {{"N_sigma", c.tails.N_sigma}, {"N_delta", c.tails.N_delta}, {"nu_small", c.tails.nu_small}}},
                  {"c0", c.c0},
                  {"nu_large", c.nu_large},
                  {"f", rate_function_json(c.f)},
                  {"limsup_proxy", c.limsup_proxy},
                  {"required_margin", c.required_margin},
                  {"margin", c.margin},
                  {"lyapunov_C", c.lyapunov_C},
                  {"radius", c.radius ? json(*c.radius) : json(nullptr)},
                  {"evidence", evidence}});
    return j;
}

int cmd_certify(const Context& ctx) {
    const auto res = certify(ctx);
    json j = ctx.stamp();
    j["certificate"] = certificate_json(res);
    write_json(ctx, "certificate.json", j);
    *ctx.out << res.reason << "\n";
    return res.certified ? exit_code::ok : exit_code::not_certified;
}

RatePlan resolve_plan(const Context& ctx, bool need_certificate) {
    const auto& cc = ctx.cfg.certificate;
    RateFunction f;
    if (cc.f) {
        f = build_rate_function(*cc.f);
    } else {
        const auto res = certify(ctx);
        if (need_certificate && !res.certified)
            throw Error(ErrorKind::Precondition, "no certified rate function (" + res.reason +
                                                     "); give certificate.f or set simulation.force");
        if (!res.cert) throw Error(ErrorKind::Precondition, "no rate function available: " + res.reason);
        f = res.f;
    }
    RatePlan plan = RatePlan::make(f, cc.gamma);
    if (ctx.cfg.rate.numeric) plan = plan.numeric();
    return plan;
}

std::string closed_form_tag(const RatePlan& plan) {
    return plan.closed_form ? to_string(*plan.closed_form) : "numeric";
}

int cmd_rate(const Context& ctx) {
    const RatePlan plan = resolve_plan(ctx, true);
    const auto& rc = ctx.cfg.rate;
    const auto ts = log_time_grid(rc.t_min, rc.t_max, rc.points);
    std::ostringstream body;  // fully evaluated before any file is touched
    auto comments = ctx.comments();
    comments.push_back("closed_form=" + closed_form_tag(plan));
    write_psi_csv(body, plan, ts, comments);
    open_output(ctx, "rate.csv") << body.str();
    *ctx.out << "closed form: " << closed_form_tag(plan) << "\n";
    return exit_code::ok;
}

int cmd_simulate(const Context& ctx) {
    const auto model = build_model(require_model(ctx));
    const SimConfig sim = build_sim_config(require_simulation(ctx));
    const ChainSample sample = simulate_chain(model, sim);
    {
        auto os = open_output(ctx, "chain.csv");
        write_chain_csv(os, sample, ctx.comments());
    }
    const Estimate mean = monte_carlo_functional(sample, [](double x) { return x; });
    json j = ctx.stamp();
    j["diagnostics"] = {{"eps", sample.diagnostics.eps},
                        {"steps", sample.diagnostics.steps},
                        {"mean_jumps_per_step", sample.diagnostics.mean_jumps_per_step},
                        {"gaussian_variance_x0", sample.diagnostics.gaussian_variance_x0}};
    j["endpoint_mean"] = {{"value", mean.value}, {"standard_error", mean.standard_error}};
    write_json(ctx, "chain.json", j);
    *ctx.out << "simulated " << sample.endpoints.size() << " replicas over " << sample.diagnostics.steps
             << " steps\n";
    return exit_code::ok;
}

struct ConvergeOutcome {
    TVCurve curve;
    RateComparison comparison;
};

ConvergeOutcome converge(const Context& ctx) {
    const auto model = build_model(require_model(ctx));
    const auto& sc = require_simulation(ctx);
    const RatePlan plan = resolve_plan(ctx, !sc.force);
    const SimConfig base = build_sim_config(sc);
    if (sc.t_grid.empty()) throw Error(ErrorKind::Config, "simulation.t_grid is empty");
    const double T_ref = sc.T_ref.value_or(4.0 * *std::max_element(sc.t_grid.begin(), sc.t_grid.end()));
    CurveOptions opt;
    opt.bins = sc.bins;
    opt.bootstrap = sc.bootstrap;
    opt.plan = plan;
    ConvergeOutcome res;
    res.curve = convergence_curve(model, base, sc.x0, sc.t_grid, T_ref, opt);
    res.comparison = rate_comparison(res.curve, plan, sc.tolerance);
    return res;
}

json comparison_json(const RateComparison& r, const TVCurve& c) {
    return json{{"fit", r.fit},
                {"fitted", r.fitted},
                {"predicted", r.predicted},
                {"ratio", r.ratio},
                {"tolerance", r.tolerance},
                {"points_used", r.points_used},
                {"verdict", to_string(r.verdict)},
                {"note", r.note},
                {"reference_horizon", c.reference_horizon},
                {"reference_size", c.reference_size},
                {"bins", c.bins},
                {"bootstrap", c.bootstrap}};
}

int verdict_code(Verdict v) {
    switch (v) {
        case Verdict::Pass: return exit_code::ok;
        case Verdict::Fail: return exit_code::rate_fail;
        case Verdict::Inconclusive: return exit_code::inconclusive;
    }
    return exit_code::error;
}

void write_converge_outputs(const Context& ctx, const ConvergeOutcome& res) {
    {
        auto os = open_output(ctx, "tv_curve.csv");
        write_curve_csv(os, res.curve, ctx.comments());
    }
    json j = ctx.stamp();
    j["comparison"] = comparison_json(res.comparison, res.curve);
    write_json(ctx, "comparison.json", j);
}

int cmd_converge(const Context& ctx) {
    const auto res = converge(ctx);
    write_converge_outputs(ctx, res);
    *ctx.out << "rate comparison " << to_string(res.comparison.verdict) << ": " << res.comparison.note << "\n";
    return verdict_code(res.comparison.verdict);
}

int cmd_report(const Context& ctx) {
    json j = ctx.stamp();
    const auto cert = certify(ctx);
    j["certificate"] = certificate_json(cert);
    if (cert.certified || ctx.cfg.certificate.f) {
        const RatePlan plan = resolve_plan(ctx, false);
        json rate{{"closed_form", closed_form_tag(plan)}, {"f", rate_function_json(plan.f)}, {"gamma", plan.gamma}};
        json samples = json::array();
        for (double t : {1.0, 10.0, 100.0}) samples.push_back({{"t", t}, {"psi", psi(plan, t)}});
        rate["psi"] = samples;
        j["rate"] = rate;
    }
    if (ctx.cfg.simulation && (cert.certified || ctx.cfg.simulation->force)) {
        const auto res = converge(ctx);
        write_converge_outputs(ctx, res);
        j["convergence"] = comparison_json(res.comparison, res.curve);
    }
    write_json(ctx, "summary.json", j);
    *ctx.out << "report written to " << (ctx.out_dir / "summary.json").string() << "\n";
    return exit_code::ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Foster-Lyapunov certificates, rates and simulation for Levy-type processes", "levyerg"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::string chosen;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"certify", "check the drift condition and write certificate.json"},
        {"rate", "write the certified rate psi(t) to rate.csv"},
        {"simulate", "simulate the Euler chain and write chain.csv"},
        {"converge", "estimate TV convergence and compare it with psi"},
        {"report", "run every stage and write summary.json"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config.output)");
        sub->add_option("--seed", seed, "master seed (overrides simulation.seed)");
        sub->add_option("--threads", threads, "worker threads, 0 = hardware")->check(CLI::NonNegativeNumber);
        sub->callback([&chosen, n = name] { chosen = n; });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "error (usage): " << e.what() << "\n";
        return exit_code::error;
    }

    try {
        Context ctx;
        ctx.out = &out;
        ctx.cfg = parse_config(read_file(config_path));
        if (!out_dir.empty()) ctx.cfg.output = out_dir;
        if (ctx.cfg.simulation) {
            if (seed) ctx.cfg.simulation->seed = *seed;
            if (threads) ctx.cfg.simulation->threads = *threads;
            ctx.seed = ctx.cfg.simulation->seed;
        } else if (seed) {
            ctx.seed = *seed;
        }
        ctx.resolved = serialize_config(ctx.cfg, -1);
        ctx.out_dir = ctx.cfg.output;

        if (chosen == "certify") return cmd_certify(ctx);
        if (chosen == "rate") return cmd_rate(ctx);
        if (chosen == "simulate") return cmd_simulate(ctx);
        if (chosen == "converge") return cmd_converge(ctx);
        return cmd_report(ctx);
    } catch (const ExplosionError& e) {
        err << "error (explosion): " << e.what() << "\n";
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return exit_code::error;
}

}  // namespace levyerg
