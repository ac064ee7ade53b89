#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "levyerg/rate_function.hpp"

namespace levyerg {

/// Closed forms known for F, F^{-1} and psi:
///   Exp     f = C x
///   Poly    f = C x^g, g < 1
///   Subexp  f = C x (ln x / beta)^q, q < 1
enum class ClosedForm { Exp, Poly, Subexp };

const char* to_string(ClosedForm c);

struct RatePlan {
    RateFunction f{};
    double gamma = 1.0;
    std::optional<ClosedForm> closed_form;

    /// Tags the closed form matching f when one exists.
    static RatePlan make(const RateFunction& f, double gamma = 1.0);
    /// Same plan forced onto the numeric pathway.
    RatePlan numeric() const;
};

/// F(t) = int_1^t dw / f(w), t >= 1.
double big_F(const RatePlan& plan, double t);

/// t >= 1 with F(t) = y. Throws OutOfRange when y is beyond sup F (bounded F).
double inverse_F(const RatePlan& plan, double y);

/// ln F^{-1}(y); stays finite when F^{-1}(y) itself overflows.
double log_inverse_F(const RatePlan& plan, double y);

/// psi(t) = 1 / f(F^{-1}(gamma t)).
double psi(const RatePlan& plan, double t);

/// n points log-spaced on [t_min, t_max]; a single point when n == 1.
std::vector<double> log_time_grid(double t_min, double t_max, int n);

/// Two-column CSV "t,psi". Each comment line is written as "# <line>".
void write_psi_csv(std::ostream& os, const RatePlan& plan, const std::vector<double>& ts,
                   const std::vector<std::string>& comments = {});

}  // namespace levyerg
