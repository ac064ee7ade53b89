#pragma once

#include <vector>

#include "levyerg/levy_kernel.hpp"
#include "levyerg/quadrature.hpp"

namespace levyerg {

/// C^2 norm-like function: |x| outside [-1, 1], 3/8 + 3x^2/4 - x^4/8 inside.
namespace smooth_norm {
double value(double x);
double d1(double x);
double d2(double x);
}  // namespace smooth_norm

/// Lyapunov test function V built on the smooth norm:
/// polynomial V = phi^p, exponential V = exp(beta phi^{1+zeta}).
struct LyapunovSpec {
    enum class Kind { Polynomial, Exponential };

    Kind kind = Kind::Polynomial;
    double p = 2.0;
    double beta = 0.1;
    double zeta = 0.0;

    static LyapunovSpec polynomial(double p) { return {Kind::Polynomial, p, 0.0, 0.0}; }
    static LyapunovSpec exponential(double beta, double zeta) {
        return {Kind::Exponential, 0.0, beta, zeta};
    }

    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;
};

/// Linear combination of built-in C^2 functions the jump operator can be
/// applied to: the two Lyapunov families plus validation functions.
class TestFunction {
public:
    enum class AtomKind { Cosine, Bump, OddBump, Lyapunov };

    struct Atom {
        AtomKind kind;
        double coef = 1.0;
        double a = 0.0;  // omega | center
        double b = 1.0;  // width
        LyapunovSpec spec{};
    };

    static TestFunction cosine(double omega);
    /// (1 - ((y - center)/width)^2)^3 on |y - center| < width, else 0.
    static TestFunction bump(double center, double width);
    /// y * bump(y) around 0: odd, with odd second derivative.
    static TestFunction odd_bump(double width);
    static TestFunction lyapunov(const LyapunovSpec& spec);

    TestFunction& operator*=(double s);
    TestFunction& operator+=(const TestFunction& other);
    friend TestFunction operator*(double s, TestFunction f) { return f *= s; }
    friend TestFunction operator+(TestFunction f, const TestFunction& g) { return f += g; }

    double value(double y) const;
    double d1(double y) const;
    double d2(double y) const;

    /// Points where the second derivative is not smooth.
    std::vector<double> kinks() const;

    const std::vector<Atom>& atoms() const { return atoms_; }

private:
    std::vector<Atom> atoms_;
};

/// Jump part of the generator for the kernel frozen at state x, applied to g
/// at point y:  int (g(y+u) - g(y) - g'(y) u 1{|u|<=1}) nu(x, du).
///
/// The domain is split as |u| <= 1 (second-order Taylor remainder, which
/// cancels the 1/|u|^{1+alpha} blow-up), 1 < |u| <= U (adaptive quadrature
/// on the symmetrized second difference), and |u| > U with
/// U = max(10 |y|, 1e3) (closed-form power tails through the binomial series,
/// numeric panels for tempered pieces).
double jump_integral(const LevyTypeModel& model, double x, const TestFunction& g, double y,
                     const QuadConfig& quad = {});

/// L_0 V(x). For the polynomial kind the small-jump compensator carries the
/// indicator 1{|u|<=1}; for the exponential kind the compensator is taken
/// over all u, which coincides under symmetry.
double apply_L0(const LevyTypeModel& model, const LyapunovSpec& spec, double x,
                const QuadConfig& quad = {});

/// a(x) V'(x) + L_0 V(x).
double apply_generator(const LevyTypeModel& model, const LyapunovSpec& spec, double x,
                       const QuadConfig& quad = {});

}  // namespace levyerg
