#include "levyerg/rate_function.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "levyerg/errors.hpp"

namespace levyerg {

const char* to_string(RateFunction::Kind kind) {
    switch (kind) {
        case RateFunction::Kind::Linear: return "linear";
        case RateFunction::Kind::Power: return "power";
        case RateFunction::Kind::LogPower: return "log_power";
    }
    return "?";
}

double RateFunction::log_eval(double s) const {
    if (!(C > 0.0)) return -std::numeric_limits<double>::infinity();
    switch (kind) {
        case Kind::Linear: return std::log(C) + s;
        case Kind::Power: return std::log(C) + g * s;
        case Kind::LogPower:
            if (s <= 0.0) return q > 0.0 ? -std::numeric_limits<double>::infinity()
                                         : std::numeric_limits<double>::infinity();
            return std::log(C) + s + q * std::log(s / beta);
    }
    return 0.0;
}

double RateFunction::operator()(double x) const {
    switch (kind) {
        case Kind::Linear: return C * x;
        case Kind::Power: return C * std::pow(x, g);
        case Kind::LogPower: return C * x * std::pow(std::log(x) / beta, q);
    }
    return 0.0;
}

namespace {

double log_add(double a, double b) {
    const double m = std::max(a, b);
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

[[noreturn]] void fail(const RateFunction& f, const char* what, double s) {
    std::ostringstream os;
    os << "rate function " << to_string(f.kind) << " (C=" << f.C << ") is not " << what
       << " near x = exp(" << s << ")";
    throw Error(ErrorKind::InvalidRateFunction, os.str());
}

}  // namespace

void check_rate_function(const RateFunction& f, double s_lo, double s_hi) {
    require(s_hi > s_lo, ErrorKind::Precondition, "rate-function check needs a nonempty range");
    constexpr int n = 64;
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double s = s_lo + (s_hi - s_lo) * i / (n - 1);
        const double lf = f.log_eval(s);
        if (!std::isfinite(lf)) fail(f, "positive and finite", s);
        if (lf < prev - 1e-12 * std::abs(prev)) fail(f, "nondecreasing", s);
        prev = lf;
        if (i + 1 < n) {
            const double s2 = s_lo + (s_hi - s_lo) * (i + 1) / (n - 1);
            // ln((e^s + e^s2) / 2)
            const double smid = log_add(s, s2) - std::log(2.0);
            const double chord = log_add(lf, f.log_eval(s2)) - std::log(2.0);
            if (f.log_eval(smid) < chord - 1e-12 * std::abs(chord)) fail(f, "concave", smid);
        }
    }
}

}  // namespace levyerg
