#include "levyerg/rates.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "levyerg/errors.hpp"
#include "levyerg/quadrature.hpp"

namespace levyerg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QuadConfig f_quad() {
    QuadConfig q;
    q.rel_tol = 1e-13;
    q.abs_tol = 1e-17;
    q.max_panels = 50000;
    return q;
}

// dF/ds in the variable s = ln w: w / f(w).
double dF_ds(const RateFunction& f, double s) {
    const double lf = f.log_eval(s);
    if (std::isnan(lf) || lf == -kInf) {
        std::ostringstream os;
        os << "rate function is not positive at w = exp(" << s << ")";
        throw Error(ErrorKind::InvalidRateFunction, os.str());
    }
    return std::exp(s - lf);
}

double F_between(const RateFunction& f, double a, double b) {
    return integrate([&](double s) { return dF_ds(f, s); }, a, b, f_quad()).value;
}

[[noreturn]] void bounded_F(double sup) {
    std::ostringstream os;
    os << "F is bounded (sup F ~ " << sup
       << "), so F^{-1} does not exist beyond it; for kappa > 1 use the linear rate f = C x "
          "with F(t) = ln(t) / C";
    throw Error(ErrorKind::OutOfRange, os.str());
}

double numeric_log_inverse(const RateFunction& f, double y) {
    if (y == 0.0) return 0.0;
    double lo = 0.0, Flo = 0.0, hi = 1.0, Fhi = 0.0;
    for (;;) {
        const double inc = F_between(f, lo, hi);
        Fhi = Flo + inc;
        if (Fhi >= y) break;
        if (hi > 64.0 && inc <= 1e-15 * Fhi) bounded_F(Fhi);
        if (hi > 1e8) bounded_F(Fhi);
        lo = hi;
        Flo = Fhi;
        hi *= 2.0;
    }
    // Safeguarded Newton from the interpolated guess.
    const double base = lo, Fbase = Flo;
    double s = lo + (y - Flo) / (Fhi - Flo) * (hi - lo);
    for (int it = 0; it < 200; ++it) {
        const double Fs = Fbase + F_between(f, base, s);
        const double g = Fs - y;
        if (std::abs(g) <= 1e-15 * (1.0 + y)) break;
        if (g > 0.0) hi = s;
        else lo = s;
        double next = s - g / dF_ds(f, s);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == s || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(s)) break;
        s = next;
    }
    return s;
}

void require_plan(const RatePlan& plan) {
    require(plan.f.C > 0.0, ErrorKind::InvalidRateFunction, "rate constant C must be positive");
    require(plan.gamma > 0.0, ErrorKind::Precondition, "gamma must be positive");
}

}  // namespace

const char* to_string(ClosedForm c) {
    switch (c) {
        case ClosedForm::Exp: return "exp";
        case ClosedForm::Poly: return "poly";
        case ClosedForm::Subexp: return "subexp";
    }
    return "?";
}

RatePlan RatePlan::make(const RateFunction& f, double gamma) {
    RatePlan plan{f, gamma, std::nullopt};
    switch (f.kind) {
        case RateFunction::Kind::Linear: plan.closed_form = ClosedForm::Exp; break;
        case RateFunction::Kind::Power:
            if (f.g == 1.0) plan.closed_form = ClosedForm::Exp;
            else if (f.g < 1.0) plan.closed_form = ClosedForm::Poly;
            break;
        case RateFunction::Kind::LogPower:
            if (f.q < 1.0 && f.beta > 0.0) plan.closed_form = ClosedForm::Subexp;
            break;
    }
    return plan;
}

RatePlan RatePlan::numeric() const {
    RatePlan p = *this;
    p.closed_form.reset();
    return p;
}

double big_F(const RatePlan& plan, double t) {
    require_plan(plan);
    require(t >= 1.0, ErrorKind::Precondition, "F(t) is defined for t >= 1");
    const double C = plan.f.C;
    const double s = std::log(t);
    if (plan.closed_form) {
        switch (*plan.closed_form) {
            case ClosedForm::Exp: return s / C;
            case ClosedForm::Poly: {
                const double r = 1.0 - plan.f.g;
                return std::expm1(r * s) / (C * r);
            }
            case ClosedForm::Subexp: {
                const double r = 1.0 - plan.f.q;
                return std::pow(plan.f.beta, plan.f.q) * std::pow(s, r) / (C * r);
            }
        }
    }
    return F_between(plan.f, 0.0, s);
}

double log_inverse_F(const RatePlan& plan, double y) {
    require_plan(plan);
    require(y >= 0.0, ErrorKind::Precondition, "F^{-1}(y) needs y >= 0");
    const double C = plan.f.C;
    if (plan.closed_form) {
        switch (*plan.closed_form) {
            case ClosedForm::Exp: return C * y;
            case ClosedForm::Poly: {
                const double r = 1.0 - plan.f.g;
                return std::log1p(C * r * y) / r;
            }
            case ClosedForm::Subexp: {
                const double r = 1.0 - plan.f.q;
                return std::pow(C * r * y * std::pow(plan.f.beta, -plan.f.q), 1.0 / r);
            }
        }
    }
    return numeric_log_inverse(plan.f, y);
}

double inverse_F(const RatePlan& plan, double y) { return std::exp(log_inverse_F(plan, y)); }

double psi(const RatePlan& plan, double t) {
    require_plan(plan);
    require(t >= 0.0, ErrorKind::Precondition, "psi(t) needs t >= 0");
    const double C = plan.f.C;
    const double gt = plan.gamma * t;
    if (plan.closed_form) {
        switch (*plan.closed_form) {
            case ClosedForm::Exp: return std::exp(-C * gt) / C;
            case ClosedForm::Poly: {
                const double r = 1.0 - plan.f.g;  // (1 - kappa) / p
                return std::pow(C * gt * r + 1.0, 1.0 - 1.0 / r) / C;
            }
            case ClosedForm::Subexp: {
                // C^{(1+z)/(k-1)} b^{(k+z)/(1-k)} (g r t)^{(k+z)/(k-1)} exp(-(C b^{-q} g r t)^{(1+z)/(1-k)})
                // with q = (k+z)/(1+z), r = 1 - q = (1-k)/(1+z).
                if (gt == 0.0) return plan.f.q < 0.0 ? 0.0 : (plan.f.q == 0.0 ? 1.0 / C : kInf);
                const double q = plan.f.q, r = 1.0 - q, b = plan.f.beta;
                const double lg = -std::log(C) / r + q / r * std::log(b) - q / r * std::log(r * gt) -
                                  std::pow(C * std::pow(b, -q) * r * gt, 1.0 / r);
                return std::exp(lg);
            }
        }
    }
    return std::exp(-plan.f.log_eval(numeric_log_inverse(plan.f, gt)));
}

std::vector<double> log_time_grid(double t_min, double t_max, int n) {
    require(n >= 1, ErrorKind::Precondition, "time grid needs at least one point");
    require(t_min > 0.0 && t_max >= t_min, ErrorKind::Precondition, "time grid needs 0 < t_min <= t_max");
    if (n == 1) return {t_min};
    std::vector<double> ts;
    const double a = std::log(t_min), b = std::log(t_max);
    for (int i = 0; i < n; ++i) ts.push_back(std::exp(a + (b - a) * i / (n - 1)));
    ts.back() = t_max;
    return ts;
}

void write_psi_csv(std::ostream& os, const RatePlan& plan, const std::vector<double>& ts,
                   const std::vector<std::string>& comments) {
    for (const auto& c : comments) os << "# " << c << "\n";
    os << "t,psi\n";
    os << std::setprecision(17);
    for (double t : ts) os << t << "," << psi(plan, t) << "\n";
}

}  // namespace levyerg
