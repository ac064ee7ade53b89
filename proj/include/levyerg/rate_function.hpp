#pragma once

#include <string>

namespace levyerg {

/// Rate function f of a drift condition LV <= -f(V) + C.
///   Linear    f(x) = C x
///   Power     f(x) = C x^g
///   LogPower  f(x) = C x (ln(x) / beta)^q
/// Values can be astronomically large (f is evaluated at V = exp(beta |x|)),
/// so everything is also available in log form.
struct RateFunction {
    enum class Kind { Linear, Power, LogPower };

    Kind kind = Kind::Linear;
    double C = 1.0;
    double g = 1.0;
    double beta = 1.0;
    double q = 0.0;
    /// Side condition the constant must satisfy, for the suggested rate.
    std::string constraint;

    static RateFunction linear(double C) { return {Kind::Linear, C, 1.0, 1.0, 0.0, {}}; }
    static RateFunction power(double C, double g) { return {Kind::Power, C, g, 1.0, 0.0, {}}; }
    static RateFunction log_power(double C, double beta, double q) {
        return {Kind::LogPower, C, 1.0, beta, q, {}};
    }

    /// ln f(e^s).
    double log_eval(double s) const;
    double operator()(double x) const;

    /// Same function with C replaced.
    RateFunction with_constant(double c) const {
        RateFunction r = *this;
        r.C = c;
        return r;
    }
};

const char* to_string(RateFunction::Kind kind);

/// Grid test of the hypotheses on f over [e^{s_lo}, e^{s_hi}] (64 log-spaced
/// points): positive, nondecreasing, midpoint concave. Throws
/// InvalidRateFunction on failure.
void check_rate_function(const RateFunction& f, double s_lo, double s_hi);

}  // namespace levyerg
