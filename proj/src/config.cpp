#include "levyerg/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>

#include "json.hpp"
#include "levyerg/errors.hpp"

namespace levyerg {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::Config, where + ": " + what);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(where, "expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) fail(where, "unknown key '" + k + "'");
}

double num(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where, "must be finite");
    return v;
}

void read(const json& j, const char* key, const std::string& where, double& out) {
    if (j.contains(key)) out = num(j.at(key), where + "." + key);
}

void read(const json& j, const char* key, const std::string& where, std::optional<double>& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = num(j.at(key), where + "." + key);
}

template <class Int>
void read_int(const json& j, const char* key, const std::string& where, Int& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    out = v.get<Int>();
}

void read(const json& j, const char* key, const std::string& where, bool& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_boolean()) fail(where + "." + key, "expected a boolean");
    out = j.at(key).get<bool>();
}

void read(const json& j, const char* key, const std::string& where, std::string& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string()) fail(where + "." + key, "expected a string");
    out = j.at(key).get<std::string>();
}

std::vector<double> num_array(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(num(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

StateFunction state_function(const json& j, const std::string& where) {
    if (j.is_number()) return StateFunction::constant(num(j, where));
    allow_keys(j, where, {"near", "far", "scale"});
    StateFunction s;
    if (!j.contains("near") || !j.contains("far")) fail(where, "needs 'near' and 'far'");
    s.near = num(j.at("near"), where + ".near");
    s.far = num(j.at("far"), where + ".far");
    read(j, "scale", where, s.scale);
    return s;
}

json state_function_json(const StateFunction& s) {
    if (s.is_constant()) return s.near;
    return json{{"near", s.near}, {"far", s.far}, {"scale", s.scale}};
}

KernelFamily kernel_family(const std::string& name, const std::string& where) {
    if (name == "stable_like") return KernelFamily::StableLike;
    if (name == "tempered") return KernelFamily::Tempered;
    if (name == "pareto") return KernelFamily::Pareto;
    fail(where, "unknown kernel family '" + name + "'");
}

KernelComponent component(const json& j, const std::string& where) {
    allow_keys(j, where, {"family", "alpha", "c", "theta", "zeta"});
    KernelComponent k;
    std::string fam = "stable_like";
    read(j, "family", where, fam);
    k.family = kernel_family(fam, where + ".family");
    if (!j.contains("alpha")) fail(where, "missing 'alpha'");
    k.alpha = state_function(j.at("alpha"), where + ".alpha");
    if (j.contains("c")) k.c = state_function(j.at("c"), where + ".c");
    read(j, "theta", where, k.theta);
    read(j, "zeta", where, k.temper_zeta);
    return k;
}

json component_json(const KernelComponent& k) {
    json j{{"family", to_string(k.family)}, {"alpha", state_function_json(k.alpha)}, {"c", state_function_json(k.c)}};
    if (k.family == KernelFamily::Tempered) {
        j["theta"] = k.theta;
        j["zeta"] = k.temper_zeta;
    }
    return j;
}

ModelConfig model_config(const json& j) {
    const std::string w = "model";
    allow_keys(j, w, {"drift", "kernel", "sigma", "delta", "exp_alpha", "exp_zeta"});
    ModelConfig mc;
    if (j.contains("drift")) {
        const auto& d = j.at("drift");
        allow_keys(d, w + ".drift", {"family", "A", "kappa", "x", "a"});
        read(d, "family", w + ".drift", mc.drift.family);
        if (mc.drift.family == "power") {
            read(d, "A", w + ".drift", mc.drift.A);
            read(d, "kappa", w + ".drift", mc.drift.kappa);
        } else if (mc.drift.family == "tabulated") {
            if (!d.contains("x") || !d.contains("a")) fail(w + ".drift", "tabulated drift needs 'x' and 'a'");
            mc.drift.xs = num_array(d.at("x"), w + ".drift.x");
            mc.drift.values = num_array(d.at("a"), w + ".drift.a");
        } else {
            fail(w + ".drift.family", "unknown drift family '" + mc.drift.family + "'");
        }
    }
    if (!j.contains("kernel")) fail(w, "missing 'kernel'");
    const auto& k = j.at("kernel");
    if (k.is_object() && k.contains("components")) {
        allow_keys(k, w + ".kernel", {"components"});
        const auto& cs = k.at("components");
        if (!cs.is_array() || cs.empty()) fail(w + ".kernel.components", "expected a nonempty array");
        for (std::size_t i = 0; i < cs.size(); ++i)
            mc.components.push_back(component(cs[i], w + ".kernel.components[" + std::to_string(i) + "]"));
    } else {
        mc.components.push_back(component(k, w + ".kernel"));
    }
    read(j, "sigma", w, mc.sigma);
    read(j, "delta", w, mc.delta);
    read(j, "exp_alpha", w, mc.exp_alpha);
    read(j, "exp_zeta", w, mc.exp_zeta);
    return mc;
}

json model_json(const ModelConfig& mc) {
    json d{{"family", mc.drift.family}};
    if (mc.drift.family == "power") {
        d["A"] = mc.drift.A;
        d["kappa"] = mc.drift.kappa;
    } else {
        d["x"] = mc.drift.xs;
        d["a"] = mc.drift.values;
    }
    json comps = json::array();
    for (const auto& k : mc.components) comps.push_back(component_json(k));
    json j{{"drift", d}, {"kernel", {{"components", comps}}}};
    if (mc.sigma) j["sigma"] = *mc.sigma;
    if (mc.delta) j["delta"] = *mc.delta;
    if (mc.exp_alpha) j["exp_alpha"] = *mc.exp_alpha;
    if (mc.exp_zeta) j["exp_zeta"] = *mc.exp_zeta;
    return j;
}

RateFunctionConfig rate_function_config(const json& j, const std::string& w) {
    allow_keys(j, w, {"kind", "C", "g", "beta", "q"});
    RateFunctionConfig f;
    read(j, "kind", w, f.kind);
    if (f.kind != "linear" && f.kind != "power" && f.kind != "log_power")
        fail(w + ".kind", "unknown rate function kind '" + f.kind + "'");
    read(j, "C", w, f.C);
    read(j, "g", w, f.g);
    read(j, "beta", w, f.beta);
    read(j, "q", w, f.q);
    return f;
}

CertificateConfig certificate_config(const json& j) {
    const std::string w = "certificate";
    allow_keys(j, w, {"theorem", "p", "beta", "zeta", "kappa", "C", "f", "gamma", "margin_fraction", "outer", "inner"});
    CertificateConfig c;
    read_int(j, "theorem", w, c.theorem);
    if (c.theorem != 1 && c.theorem != 2) fail(w + ".theorem", "must be 1 or 2");
    read(j, "p", w, c.p);
    read(j, "beta", w, c.beta);
    read(j, "zeta", w, c.zeta);
    read(j, "kappa", w, c.kappa);
    read(j, "C", w, c.C);
    if (j.contains("f")) c.f = rate_function_config(j.at("f"), w + ".f");
    read(j, "gamma", w, c.gamma);
    read(j, "margin_fraction", w, c.margin_fraction);
    if (j.contains("outer")) c.outer = num_array(j.at("outer"), w + ".outer");
    if (j.contains("inner")) c.inner = num_array(j.at("inner"), w + ".inner");
    return c;
}

json certificate_json(const CertificateConfig& c) {
    json j{{"theorem", c.theorem}, {"p", c.p},   {"beta", c.beta},   {"zeta", c.zeta},
           {"C", c.C},             {"gamma", c.gamma}, {"margin_fraction", c.margin_fraction}};
    if (c.kappa) j["kappa"] = *c.kappa;
    if (c.f) j["f"] = json{{"kind", c.f->kind}, {"C", c.f->C}, {"g", c.f->g}, {"beta", c.f->beta}, {"q", c.f->q}};
    if (c.outer) j["outer"] = *c.outer;
    if (c.inner) j["inner"] = *c.inner;
    return j;
}

SimulationConfig simulation_config(const json& j) {
    const std::string w = "simulation";
    allow_keys(j, w, {"n", "t", "N", "eps", "seed", "stream", "x0", "threads", "t_grid", "T_ref", "bins",
                      "bootstrap", "tolerance", "force"});
    SimulationConfig s;
    read_int(j, "n", w, s.n);
    read(j, "t", w, s.t);
    read_int(j, "N", w, s.N);
    read(j, "eps", w, s.eps);
    read_int(j, "seed", w, s.seed);
    read_int(j, "stream", w, s.stream);
    read(j, "x0", w, s.x0);
    read_int(j, "threads", w, s.threads);
    if (j.contains("t_grid")) s.t_grid = num_array(j.at("t_grid"), w + ".t_grid");
    read(j, "T_ref", w, s.T_ref);
    read_int(j, "bins", w, s.bins);
    read_int(j, "bootstrap", w, s.bootstrap);
    read(j, "tolerance", w, s.tolerance);
    read(j, "force", w, s.force);
    return s;
}

json simulation_json(const SimulationConfig& s) {
    json j{{"n", s.n},          {"t", s.t},          {"N", s.N},         {"seed", s.seed},
           {"stream", s.stream}, {"x0", s.x0},        {"threads", s.threads}, {"t_grid", s.t_grid},
           {"bins", s.bins},    {"bootstrap", s.bootstrap}, {"tolerance", s.tolerance}, {"force", s.force}};
    if (s.eps) j["eps"] = *s.eps;
    if (s.T_ref) j["T_ref"] = *s.T_ref;
    return j;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
    }
    allow_keys(j, "config", {"model", "certificate", "rate", "simulation", "output"});
    RunConfig cfg;
    try {
        if (j.contains("model")) cfg.model = model_config(j.at("model"));
        if (j.contains("certificate")) cfg.certificate = certificate_config(j.at("certificate"));
        if (j.contains("rate")) {
            const auto& r = j.at("rate");
            allow_keys(r, "rate", {"t_min", "t_max", "points", "numeric"});
            read(r, "t_min", "rate", cfg.rate.t_min);
            read(r, "t_max", "rate", cfg.rate.t_max);
            read_int(r, "points", "rate", cfg.rate.points);
            read(r, "numeric", "rate", cfg.rate.numeric);
        }
        if (j.contains("simulation")) cfg.simulation = simulation_config(j.at("simulation"));
        read(j, "output", "config", cfg.output);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, std::string("config: ") + e.what());
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg, int indent) {
    json j;
    if (cfg.model) j["model"] = model_json(*cfg.model);
    j["certificate"] = certificate_json(cfg.certificate);
    j["rate"] = json{{"t_min", cfg.rate.t_min}, {"t_max", cfg.rate.t_max}, {"points", cfg.rate.points},
                     {"numeric", cfg.rate.numeric}};
    if (cfg.simulation) j["simulation"] = simulation_json(*cfg.simulation);
    j["output"] = cfg.output;
    return j.dump(indent);
}

LevyTypeModel build_model(const ModelConfig& mc) {
    LevyTypeModel m;
    m.drift = mc.drift.family == "tabulated" ? Drift::tabulated(mc.drift.xs, mc.drift.values)
                                             : Drift::power(mc.drift.A, mc.drift.kappa);
    m.kernel.components = mc.components;
    const auto [s, d] = KernelSpec::implied_indices(mc.components);
    m.kernel.sigma = mc.sigma.value_or(s);
    m.kernel.delta = mc.delta.value_or(std::max(d, m.kernel.sigma));
    m.kernel.exp_alpha = mc.exp_alpha;
    m.kernel.exp_zeta = mc.exp_zeta;
    m.validate();
    return m;
}

RateFunction build_rate_function(const RateFunctionConfig& rc) {
    if (rc.kind == "power") return RateFunction::power(rc.C, rc.g);
    if (rc.kind == "log_power") return RateFunction::log_power(rc.C, rc.beta, rc.q);
    return RateFunction::linear(rc.C);
}

CertificateGrid build_grid(const CertificateConfig& cc) {
    CertificateGrid g = CertificateGrid::standard();
    if (cc.outer) g.outer = *cc.outer;
    if (cc.inner) g.inner = *cc.inner;
    g.margin_fraction = cc.margin_fraction;
    return g;
}

SimConfig build_sim_config(const SimulationConfig& sc) {
    SimConfig c;
    c.n = sc.n;
    c.t = sc.t;
    c.N = sc.N;
    c.eps = sc.eps;
    c.seed = sc.seed;
    c.stream = sc.stream;
    c.x0 = sc.x0;
    c.threads = sc.threads;
    c.validate();
    return c;
}

}  // namespace levyerg
