// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "levyerg/certificates.hpp"
#include "levyerg/cli.hpp"
#include "levyerg/diagnostics.hpp"
#include "levyerg/errors.hpp"
#include "levyerg/rates.hpp"
#include "levyerg/series.hpp"
#include "levyerg/simulator.hpp"
#include "support/models.hpp"

using namespace levyerg;
using namespace levyerg::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::vector<double> far_points() { return {1e2, std::pow(10.0, 2.5), 1e3, std::pow(10.0, 3.5), 1e4}; }

Outcome l0_bound() {
    double worst = -1e300;
    bool ok = true;
    for (double alpha : {1.2, 1.5, 1.8}) {
        const double p = 1.0 + (alpha - 1.0) / 2.0;
        const auto m = stable_model(alpha);
        const auto tc = tail_constants(m, default_tail_grid(), default_lambda_grid());
        const double C = constant_C(1, p, tc, alpha, alpha);
        for (double x : far_points()) {
            const double r = apply_L0(m, LyapunovSpec::polynomial(p), x) / scaling_phi(1, p, alpha, x);
            worst = std::max(worst, r / C);
            ok = ok && r <= 1.05 * C;
        }
    }
    return {ok, "max ratio / C^(1) = " + fmt(worst) + " (limit 1.05)"};
}

// Plain partial sum; terms decay like k^{-p-2}, 2e6 terms leave < 1e-16.
double brute_series(double p, double N, double delta) {
    double s = 0.0, b = 1.0;
    for (int k = 1; k <= 2000000; ++k) {
        const double t = 2.0 * k;
        if (k < 40) b = generalized_binomial(p, 2 * k);
        else b *= (p - t + 2.0) * (p - t + 1.0) / ((t - 1.0) * t);
        s += b * (N * t / (t - delta) - N * (t - p) / (t - p + delta));
    }
    return s;
}

Outcome constants_cross_check() {
    const double N = 2.0 / 3.0, p = 1.2, a = 1.5;
    const double oracle = 2.0 * brute_series(p, N, a) + 2.0 * p * N / (a - p);
    TailConstants t;
    t.N_sigma = t.N_delta = N;
    const double C1 = constant_C(1, p, t, a, a);
    const double err1 = std::abs(C1 - oracle);

    TailConstants h;
    h.N_sigma = 0.7;
    h.N_delta = 0.45;
    h.N_max = 0.9;
    h.nu_small = 3.0;
    // 2p(p-1) N_delta; p(p-1)/2 (nu_small + 2 N_max + 4 N_delta/(delta-2)); 2p N_sigma/(sigma-p)
    const double c2_hand = 2.0 * 1.2 * 0.2 * 0.45;
    const bool c2 = std::abs(constant_C(2, 1.2, h, 2.0, 2.0) - c2_hand) <= 1e-15 * c2_hand;
    const double c3_hand = 0.375 * (3.0 + 2.0 * 0.9 + 4.0 * 0.45 / 1.0);
    const bool c3 = std::abs(constant_C(3, 1.5, h, 2.5, 3.0) - c3_hand) <= 1e-15 * c3_hand;
    const double c4_hand = 2.0 * 1.25 * 0.7 / 0.25;
    const bool c4 = std::abs(constant_C(4, 1.25, h, 1.5, 2.5) - c4_hand) <= 1e-15 * c4_hand;
    return {err1 <= 1e-10 && c2 && c3 && c4,
            "|C1 - oracle| = " + fmt(err1) + " (C1 = " + fmt(C1) + "); cases 2/3/4 " +
                (c2 && c3 && c4 ? "match" : "differ")};
}

Outcome rate_calculus() {
    const RatePlan plans[] = {
        RatePlan::make(RateFunction::linear(0.5)),
        RatePlan::make(corollary_rate(0.5, 1.25, 1.5, 0.0, 0.0, Pathway::Poly, 0.7), 2.0),
        RatePlan::make(corollary_rate(-0.5, 1.2, 1.5, -0.5, 1.0, Pathway::Exp, 1.0)),
    };
    double worst = 0.0;
    for (const auto& plan : plans)
        for (double t : {0.1, 1.0, 10.0, 100.0}) {
            const double c = psi(plan, t), n = psi(plan.numeric(), t);
            worst = std::max(worst, std::abs(c - n) / c);
        }
    const double kappa = 0.5, p = 1.25;
    const auto poly = RatePlan::make(corollary_rate(kappa, p, 1.5, 0.0, 0.0, Pathway::Poly, 1.0));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto ts = log_time_grid(1e2, 1e4, 41);
    for (double t : ts) {
        const double lx = std::log(t), ly = std::log(psi(poly, t));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(ts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double predicted = 1.0 - p / (1.0 - kappa);
    const double rel = std::abs(slope / predicted - 1.0);
    return {worst <= 1e-6 && rel <= 0.01, "max closed/numeric rel. diff = " + fmt(worst) + "; poly slope " +
                                              fmt(slope) + " vs " + fmt(predicted)};
}

Outcome sampler_oracle() {
    const double h = 0.01, eps = 0.01;
    const LevyTypeModel models[] = {stable_model(1.2), stable_model(1.8),
                                    model(Drift::power(0.0, 1.0), {tempered(1.5, 2.0)})};
    std::uint64_t seed = 1000;
    double worst = 0.0;
    for (const auto& m : models) {
        const IncrementSampler sampler(m, eps);
        for (double xi : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const auto q = char_exponent(m, 0.0, xi);
            const double target = std::exp(-h * q.real());
            Rng rng(++seed);
            const long count = 100000;
            double s = 0.0, ss = 0.0;
            for (long i = 0; i < count; ++i) {
                const double c = std::cos(xi * sampler(0.0, h, rng));
                s += c;
                ss += c * c;
            }
            const double mean = s / count;
            const double se = std::sqrt((ss / count - mean * mean) / count);
            worst = std::max(worst, std::abs(mean - target) / se);
        }
    }
    return {worst <= 3.0, "max |ecf - exp(-h q)| / se = " + fmt(worst) + " (limit 3)"};
}

std::string curve_text(const TVCurve& c) {
    std::string s;
    for (const auto& p : c.points) s += " " + fmt(p.tv) + "+-" + fmt(p.half_width);
    return s;
}

bool decreasing(const TVCurve& c) {
    for (std::size_t i = 1; i < c.points.size(); ++i)
        if (!(c.points[i].tv < c.points[i - 1].tv)) return false;
    return true;
}

Outcome exponential_scenario() {
    const auto m = stable_model(1.5, Drift::power(1.0, 1.0));
    const auto cert = check_theorem1(m, 1.2, RateFunction::linear(0.5));
    if (!cert.certified) return {false, "not certified: " + cert.reason};
    SimConfig cfg;
    cfg.N = 20000;
    cfg.n = 200;
    cfg.seed = 7;
    cfg.threads = 0;
    CurveOptions opt;
    opt.plan = RatePlan::make(cert.f);
    const auto curve = convergence_curve(m, cfg, 10.0, {0.5, 1.0, 1.5, 2.0, 3.0}, 12.0, opt);
    const auto cmp = rate_comparison(curve, *opt.plan);
    const bool ok = decreasing(curve) && cmp.fitted < 0.0 && cmp.verdict == Verdict::Pass;
    return {ok, "TV" + curve_text(curve) + "; " + cmp.note + ", verdict " + to_string(cmp.verdict)};
}

Outcome polynomial_scenario() {
    const double kappa = 0.5, p = 1.25;
    const auto m = stable_model(1.5, Drift::power(1.0, kappa));
    const auto f = corollary_rate(kappa, p, 1.5, 0.0, 0.0, Pathway::Poly, 0.5);
    const auto cert = check_theorem1(m, p, f);
    if (!cert.certified) return {false, "not certified: " + cert.reason};
    SimConfig cfg;
    cfg.N = 20000;
    cfg.n = 100;
    cfg.seed = 7;
    cfg.threads = 0;
    CurveOptions opt;
    opt.plan = RatePlan::make(cert.f);
    const auto curve = convergence_curve(m, cfg, 10.0, {0.5, 1.0, 2.0, 4.0, 8.0}, 32.0, opt);
    const auto cmp = rate_comparison(curve, *opt.plan);
    const bool shape = decreasing(curve) && cert.f.g == 1.0 + (kappa - 1.0) / p;
    const bool rate = cmp.verdict == Verdict::Inconclusive || (cmp.fitted < 0.0 && cmp.verdict == Verdict::Pass);
    return {shape && rate, "f = " + fmt(cert.f.C) + " x^" + fmt(cert.f.g) + "; TV" + curve_text(curve) + "; " +
                               cmp.note + ", verdict " + to_string(cmp.verdict)};
}

Outcome skeleton_drift() {
    const auto m = stable_model(1.5, Drift::power(1.0, 1.0));
    const auto cert = check_theorem1(m, 1.2, RateFunction::linear(0.5));
    if (!cert.certified) return {false, "not certified"};
    const double h = 0.05;
    bool ok = true;
    std::string detail = "C = " + fmt(cert.lyapunov_C) + ";";
    for (double x : {10.0, 50.0, 100.0}) {
        const auto d = empirical_skeleton_drift(m, LyapunovSpec::polynomial(1.2), x, h, 10000, 200, 3, 0);
        const double bound = -cert.f(std::pow(x, 1.2)) * h + cert.lyapunov_C * h;
        ok = ok && d.estimate + d.half_width <= bound;
        detail += " x=" + fmt(x) + ": " + fmt(d.estimate) + "+" + fmt(d.half_width) + " <= " + fmt(bound);
    }
    return {ok, detail};
}

const char* kConvergeConfig = R"({
  "model": {"drift": {"family": "power", "A": 1, "kappa": 1},
            "kernel": {"family": "stable_like", "alpha": 1.5}},
  "certificate": {"theorem": 1, "p": 1.2, "C": 0.5},
  "simulation": {"n": 100, "N": 5000, "x0": 10, "seed": 42, "threads": 0,
                 "t_grid": [0.5, 1, 1.5, 2, 3], "T_ref": 12}
})";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    std::random_device rd;
    auto dir = fs::temp_directory_path() / ("levyerg_acceptance_" + std::to_string(rd()));
    fs::create_directories(dir);
    return dir;
}

Outcome determinism() {
    const auto dir = scratch_dir();
    std::ofstream(dir / "run.json") << kConvergeConfig;
    std::ostringstream sink;
    const std::vector<std::string> args{"converge", "--config", (dir / "run.json").string(), "--out",
                                        (dir / "out").string()};
    const int c1 = run_cli(args, sink, sink);
    const std::string first = slurp(dir / "out" / "tv_curve.csv");
    const int c2 = run_cli(args, sink, sink);
    const std::string second = slurp(dir / "out" / "tv_curve.csv");
    fs::remove_all(dir);
    const bool same = !first.empty() && first == second;
    return {same && c1 == c2, std::string("exit codes ") + std::to_string(c1) + "/" + std::to_string(c2) + ", " +
                                  std::to_string(first.size()) + " bytes, " + (same ? "identical" : "different")};
}

Outcome negative_controls() {
    // a = 0 through the CLI
    const auto dir = scratch_dir();
    std::string cfg = kConvergeConfig;
    cfg.replace(cfg.find("\"A\": 1"), 6, "\"A\": 0");
    std::ofstream(dir / "zero.json") << cfg;
    std::ostringstream sink;
    const int zero = run_cli({"certify", "--config", (dir / "zero.json").string(), "--out", (dir / "o").string()},
                             sink, sink);
    fs::remove_all(dir);

    bool exploded = false;
    try {
        SimConfig s;
        s.n = 1;
        s.t = 1100.0;
        s.N = 8;
        s.x0 = 1.0;
        simulate_chain(stable_model(1.5, Drift::power(-1.0, 1.0)), s);
    } catch (const ExplosionError&) {
        exploded = true;
    }

    bool mismatch = false;
    try {
        auto m = stable_model(1.5, Drift::power(1.0, 1.0));
        m.kernel.sigma = m.kernel.delta = 2.0;
        tail_constants(m, default_tail_grid(), default_lambda_grid());
    } catch (const Error& e) {
        mismatch = e.kind() == ErrorKind::TailIndexMismatch;
    }
    return {zero == 2 && exploded && mismatch, "a=0 certify exit " + std::to_string(zero) + "; a=+x " +
                                                   (exploded ? "explodes" : "no explosion") + "; sigma=2 " +
                                                   (mismatch ? "tail-index-mismatch" : "accepted")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"L0 V bound, stable-like case 1", l0_bound},
        {"constants cross-check", constants_cross_check},
        {"rate calculus", rate_calculus},
        {"sampler characteristic function", sampler_oracle},
        {"exponential-rate scenario", exponential_scenario},
        {"polynomial-rate scenario", polynomial_scenario},
        {"skeleton drift", skeleton_drift},
        {"determinism", determinism},
        {"negative controls", negative_controls},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("criterion %zu %s: %s (%.1fs): %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
