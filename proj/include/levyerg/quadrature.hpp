#pragma once

#include <functional>
#include <span>

namespace levyerg {

struct QuadConfig {
    double rel_tol = 1e-6;
    double abs_tol = 1e-12;
    int max_panels = 20000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) integration over a finite interval.
/// The panel with the largest error estimate is bisected until the summed
/// estimate is below max(abs_tol, rel_tol * |value|). Interior breakpoints
/// (kinks, singular points) seed the initial partition; points outside
/// (a, b) are ignored.
///
/// Throws QuadratureError carrying the worst panel when the panel budget
/// is exhausted or the integrand returns a non-finite value.
QuadResult integrate(const Integrand& f, double a, double b, const QuadConfig& cfg = {},
                     std::span<const double> breakpoints = {});

/// Integral over [a, inf) summed over geometric panels [a 2^j, a 2^{j+1}],
/// a > 0. Stops once three consecutive panels each contribute less than
/// rel_tol * 1e-3 of the running total (or less than abs_tol).
QuadResult integrate_to_infinity(const Integrand& f, double a, const QuadConfig& cfg = {},
                                 int max_doublings = 1100);

/// Fixed Gauss-Legendre rule on [a, b]; used where the integrand is known
/// to be smooth (Taylor remainders).
double gauss_legendre(const Integrand& f, double a, double b);

}  // namespace levyerg
