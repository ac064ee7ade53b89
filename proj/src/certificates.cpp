#include "levyerg/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "levyerg/errors.hpp"

namespace levyerg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_p(double p, double sigma) {
    if (!(p > 1.0 && p < sigma)) {
        std::ostringstream os;
        os << "polynomial exponent p = " << p << " must lie in (1, sigma) with sigma = " << sigma;
        throw Error(ErrorKind::Precondition, os.str());
    }
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<double> symmetric(const std::vector<double>& radii) {
    std::vector<double> xs;
    for (double r : radii) {
        xs.push_back(-r);
        if (r != 0.0) xs.push_back(r);
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

// sup over the inner grid of LV + f(V), clamped at zero.
double lyapunov_constant(const LevyTypeModel& model, const LyapunovSpec& spec, const RateFunction& f,
                         const CertificateGrid& grid) {
    const TestFunction g = TestFunction::lyapunov(spec);
    double sup = 0.0;
    for (double x : symmetric(grid.inner)) {
        const double LV = model.drift(x) * spec.d1(x) + jump_integral(model, x, g, x, grid.quad);
        sup = std::max(sup, LV + std::exp(f.log_eval(std::log(spec.value(x)))));
    }
    return sup;
}

// Smallest grid radius R with f(1 + V(R)) > 2C; V is increasing in |x|.
std::optional<double> compact_radius(const LyapunovSpec& spec, const RateFunction& f, double C,
                                     const CertificateGrid& grid) {
    std::vector<double> radii{0.0};
    radii.insert(radii.end(), grid.inner.begin(), grid.inner.end());
    radii.insert(radii.end(), grid.outer.begin(), grid.outer.end());
    std::sort(radii.begin(), radii.end());
    const double log2C = C > 0.0 ? std::log(2.0 * C) : -kInf;
    for (double r : radii) {
        if (f.log_eval(std::log1p(spec.value(r))) > log2C) return r;
    }
    return std::nullopt;
}

void finish(Certificate& cert, double x_far_drift_scale, double fraction) {
    cert.limsup_proxy = -kInf;
    for (const auto& pt : cert.evidence) cert.limsup_proxy = std::max(cert.limsup_proxy, pt.value);
    cert.required_margin = fraction * x_far_drift_scale;
    cert.margin = -cert.limsup_proxy;
    const bool bracket_ok = cert.required_margin > 0.0 && cert.limsup_proxy <= -cert.required_margin;
    cert.certified = bracket_ok && cert.radius.has_value();

    std::ostringstream os;
    if (!(cert.required_margin > 0.0)) {
        os << "drift term vanishes at x_far: no inward drift to certify";
    } else if (!bracket_ok) {
        os << "limsup proxy " << cert.limsup_proxy << " exceeds -m = " << -cert.required_margin;
    } else if (!cert.radius) {
        os << "no grid radius satisfies f(1 + inf V) > 2C with C = " << cert.lyapunov_C;
    } else {
        os << "certified: limsup proxy " << cert.limsup_proxy << " <= -" << cert.required_margin;
    }
    cert.reason = os.str();
}

void require_symmetric(const LevyTypeModel& model, const CertificateGrid& grid) {
    const auto xs = symmetric(grid.inner);
    const ModelCheck chk = check_model(model, xs);
    if (chk.symmetry_defect > 1e-6) {
        std::ostringstream os;
        os << "kernel is not symmetric (defect " << chk.symmetry_defect << ")";
        throw Error(ErrorKind::Precondition, os.str());
    }
}

}  // namespace

CaseIndex classify_case(double sigma, double delta) {
    require(sigma > 0.0 && sigma <= delta, ErrorKind::Precondition,
            "case classification needs 0 < sigma <= delta");
    if (sigma == 2.0 && delta == 2.0) return 2;
    if (sigma >= 2.0) return 3;  // delta > 2 here
    if (delta >= 2.0) return 4;
    if (sigma > 1.0) return 1;
    std::ostringstream os;
    os << "tail indices (sigma=" << sigma << ", delta=" << delta << ") match no case: need sigma > 1";
    throw Error(ErrorKind::NotApplicable, os.str());
}

double case1_series(double p, double N_delta, double delta, double series_tol) {
    require(p > 1.0 && p < 2.0, ErrorKind::Precondition, "case-1 series needs p in (1, 2)");
    double sum = 0.0;
    double prev_abs = kInf, last = 0.0, before_last = 0.0;
    int rising = 0;
    double binom = 1.0;  // C_p^{2k}, updated in place
    long k = 1;
    for (; k < 100000000; ++k) {
        const double tk = 2.0 * k;
        binom *= (p - tk + 2.0) * (p - tk + 1.0) / ((tk - 1.0) * tk);
        const double term = binom * (N_delta * tk / (tk - delta) - N_delta * (tk - p) / (tk - p + delta));
        if (!std::isfinite(term)) throw Error(ErrorKind::SeriesDivergence, "non-finite series term");
        sum += term;
        rising = std::abs(term) >= prev_abs ? rising + 1 : 0;
        if (rising >= 5) {
            std::ostringstream os;
            os << "case-1 series terms stopped decreasing at k = " << k << " (p = " << p << ")";
            throw Error(ErrorKind::SeriesDivergence, os.str());
        }
        prev_abs = std::abs(term);
        before_last = last;
        last = term;
        if (std::abs(term) < series_tol && k >= 2) break;
    }
    // Remainder of a power-law tail t_j ~ A j^{-s}: t_K (K/(s-1) - 1/2).
    if (before_last != 0.0 && last != 0.0 && k >= 2) {
        const double K = static_cast<double>(k);
        const double s = -std::log(last / before_last) / std::log(K / (K - 1.0));
        if (s > 1.0) sum += last * (K / (s - 1.0) - 0.5);
    }
    return sum;
}

double constant_C(CaseIndex c, double p, const TailConstants& t, double sigma, double delta,
                  double series_tol) {
    require_p(p, sigma);
    switch (c) {
        case 1: {
            const double series = sigma == delta ? case1_series(p, t.N_delta, delta, series_tol) : 0.0;
            return 2.0 * series + 2.0 * p * t.N_sigma / (sigma - p);
        }
        case 2: return 2.0 * p * (p - 1.0) * t.N_delta;
        case 3: {
            const double lead = 0.5 * p * (p - 1.0) * (t.nu_small + 2.0 * t.N_max + 4.0 * t.N_delta / (delta - 2.0));
            return lead + (sigma == 2.0 ? 2.0 * p * t.N_sigma / (sigma - p) : 0.0);
        }
        case 4: return 2.0 * p * t.N_sigma / (sigma - p);
        default: break;
    }
    throw Error(ErrorKind::Precondition, "constant_C covers cases 1-4; use constant_C5 for case 5");
}

double sup_c0(double beta, double alpha, double zeta) {
    if (!(beta < alpha)) {
        std::ostringstream os;
        os << "c0 needs beta < alpha (beta = " << beta << ", alpha = " << alpha << ")";
        throw Error(ErrorKind::Precondition, os.str());
    }
    require(zeta > -1.0 && zeta <= 0.0, ErrorKind::Precondition, "zeta must lie in (-1, 0]");
    const double s = 1.0 + zeta;
    // log of x^2 e^{(beta-alpha) x^s} in t = ln x
    auto neg_log = [&](double t) { return -(2.0 * t + (beta - alpha) * std::exp(s * t)); };
    double hi = 1.0;
    while (neg_log(2.0 * hi) < neg_log(hi) && hi < 700.0) hi *= 2.0;
    const auto r = boost::math::tools::brent_find_minima(neg_log, 0.0, 2.0 * hi, 60);
    return std::exp(-std::min(r.second, neg_log(0.0)));
}

double constant_C5(double beta, double zeta, double alpha, double nu_small, double nu_large) {
    const double c0 = sup_c0(beta, alpha, zeta);
    return 0.5 * beta * beta * (1.0 + zeta) * (1.0 + zeta) * (std::exp(beta) * nu_small + c0 * nu_large);
}

double log_scaling_phi5(double kappa, double beta, double zeta, double x) {
    const double ax = std::abs(x);
    return (kappa + zeta) * std::log(ax) + beta * std::pow(ax, 1.0 + zeta);
}

double scaling_phi(CaseIndex c, double p, double sigma, double x, double kappa, double beta,
                   double zeta) {
    const double ax = std::abs(x);
    require(ax >= 1.0, ErrorKind::Precondition, "scaling functions are used for |x| >= 1");
    switch (c) {
        case 1:
        case 4: return std::pow(ax, p - sigma);
        case 2: return std::pow(ax, p - 2.0) * std::log1p(ax);
        case 3: return std::pow(ax, p - 2.0);
        case 5: return std::exp(log_scaling_phi5(kappa, beta, zeta, ax));
        default: break;
    }
    throw Error(ErrorKind::Precondition, "case index must be 1..5");
}

CertificateGrid CertificateGrid::standard() {
    CertificateGrid g;
    for (int k = 0; k <= 8; ++k) g.outer.push_back(std::pow(10.0, 2.0 + 0.25 * k));
    g.inner = {0.0, 0.5};
    for (int k = 0; k <= 8; ++k) g.inner.push_back(std::pow(10.0, 0.25 * k));
    return g;
}

double CertificateGrid::x_far() const {
    require(!outer.empty(), ErrorKind::Precondition, "outer grid is empty");
    return *std::min_element(outer.begin(), outer.end());
}

Certificate check_theorem1(const LevyTypeModel& model, double p, const RateFunction& f,
                           const CertificateGrid& grid) {
    model.validate();
    const double sigma = model.kernel.sigma;
    const double delta = model.kernel.delta;
    require(sigma > 1.0, ErrorKind::Precondition, "polynomial-V check needs sigma > 1");
    require_p(p, sigma);
    require_symmetric(model, grid);

    Certificate cert;
    cert.theorem = 1;
    cert.p = p;
    cert.f = f;
    cert.tails = tail_constants(model, grid.tail_grid, grid.lambda_grid);
    cert.case_index = classify_case(sigma, delta);
    cert.constant = constant_C(cert.case_index, p, cert.tails, sigma, delta);
    if (model.drift.family() == DriftFamily::Power) cert.kappa = model.drift.kappa();

    const double x_far = grid.x_far();
    const double x_max = *std::max_element(grid.outer.begin(), grid.outer.end());
    check_rate_function(f, p * std::log(x_far), p * std::log(x_max) + 1e-9);

    auto drift_term = [&](double x) {
        return p * model.drift(x) * sign(x) * std::pow(std::abs(x), p - 1.0);
    };
    const auto xs = symmetric(grid.outer);
    for (double x : xs) {
        const double phi = scaling_phi(cert.case_index, p, sigma, x);
        const double fv = std::exp(f.log_eval(p * std::log(std::abs(x))));
        cert.evidence.push_back({x, (drift_term(x) + fv) / phi + cert.constant});
    }
    const double phi_far = scaling_phi(cert.case_index, p, sigma, x_far);
    const double scale = std::max(std::abs(drift_term(x_far)), std::abs(drift_term(-x_far))) / phi_far;

    const LyapunovSpec spec = LyapunovSpec::polynomial(p);
    cert.lyapunov_C = lyapunov_constant(model, spec, f, grid);
    cert.radius = compact_radius(spec, f, cert.lyapunov_C, grid);
    finish(cert, scale, grid.margin_fraction);
    return cert;
}

Certificate check_theorem2(const LevyTypeModel& model, double beta, double zeta, double kappa,
                           const RateFunction& f, const CertificateGrid& grid) {
    model.validate();
    require(model.kernel.exp_alpha.has_value(), ErrorKind::Precondition,
            "exponential-V check needs the kernel's exponential index alpha");
    const double alpha = *model.kernel.exp_alpha;
    require(beta > 0.0, ErrorKind::Precondition, "beta must be positive");
    require(zeta > -1.0 && zeta <= 0.0, ErrorKind::Precondition, "zeta must lie in (-1, 0]");
    if (beta >= alpha) {
        std::ostringstream os;
        os << "exponential-V check needs beta < alpha (beta = " << beta << ", alpha = " << alpha << ")";
        throw Error(ErrorKind::Precondition, os.str());
    }
    require_symmetric(model, grid);

    Certificate cert;
    cert.theorem = 2;
    cert.case_index = 5;
    cert.beta = beta;
    cert.zeta = zeta;
    cert.kappa = kappa;
    cert.f = f;
    for (double x : grid.tail_grid) {
        if (std::abs(x) < 1.0) continue;
        cert.tails.nu_small = std::max(cert.tails.nu_small, small_jump_moment(model, x));
        const ExpMoment em = exp_moment(model, x, alpha, zeta);
        if (em.infinite) {
            std::ostringstream os;
            os << "exponential moment of order (alpha=" << alpha << ", zeta=" << zeta
               << ") is infinite at x = " << x;
            throw Error(ErrorKind::Precondition, os.str());
        }
        cert.nu_large = std::max(cert.nu_large, em.value);
    }
    cert.c0 = sup_c0(beta, alpha, zeta);
    cert.constant = constant_C5(beta, zeta, alpha, cert.tails.nu_small, cert.nu_large);

    const double s = 1.0 + zeta;
    const double x_far = grid.x_far();
    const double x_max = *std::max_element(grid.outer.begin(), grid.outer.end());
    check_rate_function(f, beta * std::pow(x_far, s), beta * std::pow(x_max, s) + 1e-9);

    auto drift_term = [&](double x) {
        return beta * s * model.drift(x) * sign(x) / std::pow(std::abs(x), kappa);
    };
    const auto xs = symmetric(grid.outer);
    for (double x : xs) {
        const double ax = std::abs(x);
        const double fv = std::exp(f.log_eval(beta * std::pow(ax, s)) - log_scaling_phi5(kappa, beta, zeta, ax));
        cert.evidence.push_back({x, drift_term(x) + fv + cert.constant});
    }
    const double scale = std::max(std::abs(drift_term(x_far)), std::abs(drift_term(-x_far)));

    const LyapunovSpec spec = LyapunovSpec::exponential(beta, zeta);
    cert.lyapunov_C = lyapunov_constant(model, spec, f, grid);
    cert.radius = compact_radius(spec, f, cert.lyapunov_C, grid);
    finish(cert, scale, grid.margin_fraction);
    return cert;
}

DriftGrowth drift_growth(const Drift& drift, const std::vector<double>& outer) {
    if (drift.family() == DriftFamily::Power) {
        if (!(drift.A() > 0.0)) {
            std::ostringstream os;
            os << "power drift with A = " << drift.A() << " has no inward component";
            throw Error(ErrorKind::NoInwardDrift, os.str());
        }
        return {drift.kappa(), drift.A()};
    }
    const auto xs = symmetric(outer);
    require(xs.size() >= 2, ErrorKind::Precondition, "drift fit needs at least two grid points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double x : xs) {
        const double as = drift(x) * sign(x);
        if (!(as < 0.0)) {
            std::ostringstream os;
            os << "drift points outward or vanishes at x = " << x << " (a(x) = " << drift(x) << ")";
            throw Error(ErrorKind::NoInwardDrift, os.str());
        }
        const double lx = std::log(std::abs(x)), ly = std::log(-as);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(xs.size());
    const double kappa = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double worst = -kInf;
    for (double x : xs) worst = std::max(worst, drift(x) * sign(x) / std::pow(std::abs(x), kappa));
    return {kappa, -worst};
}

RateFunction corollary_rate(double kappa, double p, double sigma, double zeta, double beta,
                            Pathway pathway, double C) {
    require(C > 0.0, ErrorKind::Precondition, "rate constant C must be positive");
    if (pathway == Pathway::Poly) {
        if (!(kappa + std::min(sigma, 2.0) > 1.0) || kappa < -1.0) {
            std::ostringstream os;
            os << "balance condition kappa + min(sigma, 2) > 1 fails (kappa = " << kappa
               << ", sigma = " << sigma << ")";
            throw Error(ErrorKind::BalanceViolation, os.str());
        }
        require(p > 1.0, ErrorKind::Precondition, "p must exceed 1");
        RateFunction f = kappa >= 1.0 ? RateFunction::linear(C)
                                      : RateFunction::power(C, 1.0 + (kappa - 1.0) / p);
        f.constraint = "C < p * A_kappa";
        return f;
    }
    require(beta > 0.0, ErrorKind::Precondition, "beta must be positive");
    if (kappa >= 0.0) {
        require(zeta == 0.0, ErrorKind::Precondition,
                "exponential pathway with kappa >= 0 needs zeta = 0");
        RateFunction f = RateFunction::linear(C);
        f.constraint = kappa > 0.0 ? "any C > 0" : "-beta * A_0 + C + C5 < 0";
        return f;
    }
    if (!(kappa > -1.0 && zeta > -1.0 && zeta <= kappa)) {
        std::ostringstream os;
        os << "exponential pathway with kappa in (-1, 0) needs zeta in (-1, kappa]; got kappa = "
           << kappa << ", zeta = " << zeta;
        throw Error(ErrorKind::Precondition, os.str());
    }
    RateFunction f = RateFunction::log_power(C, beta, (kappa + zeta) / (1.0 + zeta));
    f.constraint = "-beta * (1 + zeta) * A_kappa + C + C5 < 0";
    return f;
}

double optimal_zeta(double kappa) {
    if (!(kappa > -1.0 && kappa < 0.0)) {
        std::ostringstream os;
        os << "optimal zeta is defined for kappa in (-1, 0), got " << kappa;
        throw Error(ErrorKind::NotApplicable, os.str());
    }
    return kappa;
}

}  // namespace levyerg
