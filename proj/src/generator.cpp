#include "levyerg/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "levyerg/errors.hpp"
#include "levyerg/series.hpp"

namespace levyerg {

namespace smooth_norm {

double value(double x) {
    const double a = std::abs(x);
    if (a > 1.0) return a;
    const double x2 = x * x;
    return 0.375 + 0.75 * x2 - 0.125 * x2 * x2;
}

double d1(double x) {
    if (x > 1.0) return 1.0;
    if (x < -1.0) return -1.0;
    return 1.5 * x - 0.5 * x * x * x;
}

double d2(double x) {
    if (std::abs(x) > 1.0) return 0.0;
    return 1.5 - 1.5 * x * x;
}

}  // namespace smooth_norm

double LyapunovSpec::value(double x) const {
    const double phi = smooth_norm::value(x);
    if (kind == Kind::Polynomial) return std::pow(phi, p);
    return std::exp(beta * std::pow(phi, 1.0 + zeta));
}

double LyapunovSpec::d1(double x) const {
    const double phi = smooth_norm::value(x);
    const double dphi = smooth_norm::d1(x);
    if (kind == Kind::Polynomial) return p * std::pow(phi, p - 1.0) * dphi;
    const double s = 1.0 + zeta;
    return value(x) * beta * s * std::pow(phi, s - 1.0) * dphi;
}

double LyapunovSpec::d2(double x) const {
    const double phi = smooth_norm::value(x);
    const double dphi = smooth_norm::d1(x);
    const double ddphi = smooth_norm::d2(x);
    if (kind == Kind::Polynomial) {
        return p * (p - 1.0) * std::pow(phi, p - 2.0) * dphi * dphi +
               p * std::pow(phi, p - 1.0) * ddphi;
    }
    const double s = 1.0 + zeta;
    const double g1 = beta * s * std::pow(phi, s - 1.0) * dphi;
    const double g2 = beta * s * ((s - 1.0) * std::pow(phi, s - 2.0) * dphi * dphi +
                                  std::pow(phi, s - 1.0) * ddphi);
    return value(x) * (g1 * g1 + g2);
}

namespace {

struct BumpEval {
    double v, d1, d2;
};

BumpEval bump_eval(double y, double center, double width) {
    const double z = (y - center) / width;
    if (std::abs(z) >= 1.0) return {0.0, 0.0, 0.0};
    const double q = 1.0 - z * z;
    return {q * q * q, -6.0 * z * q * q / width, -6.0 * q * (1.0 - 5.0 * z * z) / (width * width)};
}

double atom_value(const TestFunction::Atom& a, double y) {
    switch (a.kind) {
        case TestFunction::AtomKind::Cosine: return std::cos(a.a * y);
        case TestFunction::AtomKind::Bump: return bump_eval(y, a.a, a.b).v;
        case TestFunction::AtomKind::OddBump: return y * bump_eval(y, 0.0, a.b).v;
        case TestFunction::AtomKind::Lyapunov: return a.spec.value(y);
    }
    return 0.0;
}

double atom_d1(const TestFunction::Atom& a, double y) {
    switch (a.kind) {
        case TestFunction::AtomKind::Cosine: return -a.a * std::sin(a.a * y);
        case TestFunction::AtomKind::Bump: return bump_eval(y, a.a, a.b).d1;
        case TestFunction::AtomKind::OddBump: {
            const auto b = bump_eval(y, 0.0, a.b);
            return b.v + y * b.d1;
        }
        case TestFunction::AtomKind::Lyapunov: return a.spec.d1(y);
    }
    return 0.0;
}

double atom_d2(const TestFunction::Atom& a, double y) {
    switch (a.kind) {
        case TestFunction::AtomKind::Cosine: return -a.a * a.a * std::cos(a.a * y);
        case TestFunction::AtomKind::Bump: return bump_eval(y, a.a, a.b).d2;
        case TestFunction::AtomKind::OddBump: {
            const auto b = bump_eval(y, 0.0, a.b);
            return 2.0 * b.d1 + y * b.d2;
        }
        case TestFunction::AtomKind::Lyapunov: return a.spec.d2(y);
    }
    return 0.0;
}

}  // namespace

TestFunction TestFunction::cosine(double omega) {
    TestFunction f;
    f.atoms_.push_back({AtomKind::Cosine, 1.0, omega, 0.0, {}});
    return f;
}

TestFunction TestFunction::bump(double center, double width) {
    require(width > 0.0, ErrorKind::Precondition, "bump width must be positive");
    TestFunction f;
    f.atoms_.push_back({AtomKind::Bump, 1.0, center, width, {}});
    return f;
}

TestFunction TestFunction::odd_bump(double width) {
    require(width > 0.0, ErrorKind::Precondition, "bump width must be positive");
    TestFunction f;
    f.atoms_.push_back({AtomKind::OddBump, 1.0, 0.0, width, {}});
    return f;
}

TestFunction TestFunction::lyapunov(const LyapunovSpec& spec) {
    TestFunction f;
    f.atoms_.push_back({AtomKind::Lyapunov, 1.0, 0.0, 0.0, spec});
    return f;
}

TestFunction& TestFunction::operator*=(double s) {
    for (auto& a : atoms_) a.coef *= s;
    return *this;
}

TestFunction& TestFunction::operator+=(const TestFunction& other) {
    atoms_.insert(atoms_.end(), other.atoms_.begin(), other.atoms_.end());
    return *this;
}

double TestFunction::value(double y) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.coef * atom_value(a, y);
    return s;
}

double TestFunction::d1(double y) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.coef * atom_d1(a, y);
    return s;
}

double TestFunction::d2(double y) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.coef * atom_d2(a, y);
    return s;
}

std::vector<double> TestFunction::kinks() const {
    std::vector<double> k;
    for (const auto& a : atoms_) {
        switch (a.kind) {
            case AtomKind::Cosine: break;
            case AtomKind::Bump:
                k.push_back(a.a - a.b);
                k.push_back(a.a + a.b);
                break;
            case AtomKind::OddBump:
                k.push_back(-a.b);
                k.push_back(a.b);
                break;
            case AtomKind::Lyapunov:
                k.push_back(-1.0);
                k.push_back(1.0);
                break;
        }
    }
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

namespace {

// int_0^1 (1 - s) g''(y + s u) ds, split where y + s u crosses a kink of g''.
double taylor_remainder(const TestFunction& g, const std::vector<double>& kinks, double y, double u) {
    std::vector<double> cuts{0.0};
    if (u != 0.0) {
        for (double k : kinks) {
            const double s = (k - y) / u;
            if (s > 0.0 && s < 1.0) cuts.push_back(s);
        }
    }
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    double r = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        r += gauss_legendre([&](double s) { return (1.0 - s) * g.d2(y + s * u); }, cuts[i], cuts[i + 1]);
    }
    return r;
}

double tail_cutoff(double y) { return std::max(10.0 * std::abs(y), 1e3); }

// Contribution of |u| > U for one atom and one kernel component.
double atom_tail(const TestFunction::Atom& atom, const KernelComponent& comp, double x, double y,
                 double U, const QuadConfig& quad) {
    const double gy = atom_value(atom, y);
    const bool lyap = atom.kind == TestFunction::AtomKind::Lyapunov;

    if (atom.kind == TestFunction::AtomKind::Cosine && comp.has_power_tail()) {
        // cos(w(y+u)) + cos(w(y-u)) = 2 cos(wy) cos(wu); two integration-by-parts
        // terms of int_U^inf cos(wu) u^{-s} du, s = 1 + alpha.
        const double w = atom.a;
        const double s = 1.0 + comp.alpha(x);
        const double osc = -std::sin(w * U) * std::pow(U, -s) / w +
                           s * std::cos(w * U) * std::pow(U, -s - 1.0) / (w * w);
        return 2.0 * gy * comp.c(x) * osc - 2.0 * gy * comp.tail(x, U, quad);
    }
    if (!lyap) return -2.0 * gy * comp.tail(x, U, quad);

    if (!comp.has_power_tail()) {
        QuadConfig q = quad;
        q.abs_tol = 0.0;
        auto h = [&](double u) {
            const double d = atom_value(atom, y + u) + atom_value(atom, y - u) - 2.0 * gy;
            const double dens = comp.density(x, u);
            return dens == 0.0 ? 0.0 : d * dens;
        };
        return integrate_to_infinity(h, U, q).value;
    }

    if (atom.spec.kind == LyapunovSpec::Kind::Exponential) {
        throw Error(ErrorKind::Divergence,
                    "exponential Lyapunov function against a power-tailed kernel: "
                    "the exponential moment is infinite");
    }

    // (u + y)^p + (u - y)^p = 2 sum_k C_p^{2k} y^{2k} u^{p - 2k}, valid for u > |y|.
    const double p = atom.spec.p;
    double sum = 0.0;
    const double y2 = y * y;
    double ypow = 1.0;
    for (int k = 0; k < 64; ++k) {
        const double term = generalized_binomial(p, 2 * k) * ypow * comp.power_moment_tail(x, U, p - 2.0 * k, quad);
        sum += term;
        if (k > 0 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
        ypow *= y2;
    }
    return 2.0 * sum - 2.0 * gy * comp.tail(x, U, quad);
}

}  // namespace

double jump_integral(const LevyTypeModel& model, double x, const TestFunction& g, double y,
                     const QuadConfig& quad) {
    const auto& comps = model.kernel.components;
    bool any = false;
    for (const auto& c : comps) any = any || c.c(x) != 0.0;
    if (!any) return 0.0;

    const std::vector<double> kinks = g.kinks();
    const double ay = std::abs(y);
    const double gy = g.value(y);

    // Small jumps: u^2 (R(y,u) + R(y,-u)) against nu on (0, 1].
    auto small_h = [&](double u) {
        return taylor_remainder(g, kinks, y, u) + taylor_remainder(g, kinks, y, -u);
    };
    double small = 0.0;
    for (const auto& c : comps) small += c.small_weighted(x, small_h, quad);

    // Middle jumps 1 < u <= U on the symmetrized second difference.
    const double U = tail_cutoff(y);
    auto second_difference = [&](double u) {
        if (ay >= 2.0 && u <= 0.5 * ay) return u * u * small_h(u);
        return g.value(y + u) + g.value(y - u) - 2.0 * gy;
    };
    auto mid_h = [&](double u) {
        double dens = 0.0;
        for (const auto& c : comps) dens += c.density(x, u);
        return dens == 0.0 ? 0.0 : second_difference(u) * dens;
    };
    std::vector<double> brk{0.5 * ay, ay - 1.0, ay, ay + 1.0};
    for (double k : kinks) {
        brk.push_back(std::abs(k - y));
        brk.push_back(std::abs(k + y));
    }
    for (double b = 2.0; b < U; b *= 2.0) brk.push_back(b);
    for (const auto& atom : g.atoms()) {
        if (atom.kind != TestFunction::AtomKind::Cosine || atom.a == 0.0) continue;
        // Kronrod error estimates are unreliable over many periods.
        const double step = std::numbers::pi / std::abs(atom.a);
        for (double b = step; b < U; b += step) brk.push_back(b);
    }
    const double mid = integrate(mid_h, 1.0, U, quad, brk).value;

    double tails = 0.0;
    for (const auto& atom : g.atoms())
        for (const auto& c : comps) tails += atom.coef * atom_tail(atom, c, x, y, U, quad);

    return small + mid + tails;
}

namespace {

void check_lyapunov_preconditions(const LevyTypeModel& model, const LyapunovSpec& spec, double x) {
    if (std::abs(x) < 1.0) {
        std::ostringstream os;
        os << "generator evaluation needs |x| >= 1, got x = " << x;
        throw Error(ErrorKind::Precondition, os.str());
    }
    if (spec.kind == LyapunovSpec::Kind::Exponential) {
        require(spec.beta > 0.0 && spec.zeta > -1.0 && spec.zeta <= 0.0, ErrorKind::Precondition,
                "exponential Lyapunov function needs beta > 0 and zeta in (-1, 0]");
        if (model.kernel.exp_alpha && spec.beta >= *model.kernel.exp_alpha) {
            throw Error(ErrorKind::Precondition, "exponential Lyapunov function needs beta < alpha");
        }
    } else {
        require(spec.p > 0.0, ErrorKind::Precondition, "polynomial Lyapunov exponent must be positive");
    }
}

}  // namespace

double apply_L0(const LevyTypeModel& model, const LyapunovSpec& spec, double x, const QuadConfig& quad) {
    check_lyapunov_preconditions(model, spec, x);
    return jump_integral(model, x, TestFunction::lyapunov(spec), x, quad);
}

double apply_generator(const LevyTypeModel& model, const LyapunovSpec& spec, double x,
                       const QuadConfig& quad) {
    return model.drift(x) * spec.d1(x) + apply_L0(model, spec, x, quad);
}

}  // namespace levyerg
