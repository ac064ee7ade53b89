#include "levyerg/levy_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyerg/errors.hpp"

namespace levyerg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_alpha_positive(double alpha) {
    if (!(alpha > 0.0)) {
        std::ostringstream os;
        os << "divergent tail integral: alpha = " << alpha << " must be positive";
        throw Error(ErrorKind::ModelInvalid, os.str());
    }
}

void require_small_moment(double alpha, KernelFamily family) {
    if (alpha >= 2.0) {
        std::ostringstream os;
        os << to_string(family) << " kernel with alpha = " << alpha
           << " >= 2: int_{|u|<=1} u^2 nu(du) diverges (integrand u^{1-alpha})";
        throw Error(ErrorKind::Divergence, os.str());
    }
}

}  // namespace

double StateFunction::operator()(double x) const {
    if (near == far) return far;
    const double z = x / scale;
    return far + (near - far) * std::exp(-z * z);
}

Drift Drift::power(double A, double kappa) {
    Drift d;
    d.family_ = DriftFamily::Power;
    d.A_ = A;
    d.kappa_ = kappa;
    return d;
}

Drift Drift::tabulated(std::vector<double> xs, std::vector<double> values) {
    require(xs.size() >= 2 && xs.size() == values.size(), ErrorKind::ModelInvalid,
            "tabulated drift needs at least two (x, a) pairs of equal length");
    require(std::is_sorted(xs.begin(), xs.end()) &&
                std::adjacent_find(xs.begin(), xs.end()) == xs.end(),
            ErrorKind::ModelInvalid, "tabulated drift abscissae must be strictly increasing");
    Drift d;
    d.family_ = DriftFamily::Tabulated;
    d.xs_ = std::move(xs);
    d.values_ = std::move(values);
    return d;
}

double Drift::operator()(double x) const {
    if (family_ == DriftFamily::Power) {
        if (x == 0.0 || A_ == 0.0) return 0.0;
        const double s = x > 0.0 ? 1.0 : -1.0;
        return -A_ * s * std::pow(std::abs(x), kappa_);
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    i = std::clamp<std::size_t>(i, 1, xs_.size() - 1);
    const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

const char* to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::StableLike: return "stable_like";
        case KernelFamily::Tempered: return "tempered";
        case KernelFamily::Pareto: return "pareto";
    }
    return "unknown";
}

double KernelComponent::density(double x, double u) const {
    const double r = std::abs(u);
    if (r == 0.0) return kInf;
    if (family == KernelFamily::Pareto && r < 1.0) return 0.0;
    const double cx = c(x);
    if (cx == 0.0) return 0.0;
    return std::exp(log_density(x, u));
}

double KernelComponent::log_density(double x, double u) const {
    const double r = std::abs(u);
    if (family == KernelFamily::Pareto && r < 1.0) return -kInf;
    const double cx = c(x);
    if (cx <= 0.0) return -kInf;
    double ld = std::log(cx) - (1.0 + alpha(x)) * std::log(r);
    if (family == KernelFamily::Tempered) ld -= theta * std::pow(r, 1.0 + temper_zeta);
    return ld;
}

double KernelComponent::tail(double x, double u, const QuadConfig& quad) const {
    const double cx = c(x);
    const double a = alpha(x);
    if (cx == 0.0) return 0.0;
    switch (family) {
        case KernelFamily::StableLike:
            require_alpha_positive(a);
            return cx * std::pow(u, -a) / a;
        case KernelFamily::Pareto:
            require_alpha_positive(a);
            return cx * std::pow(std::max(u, 1.0), -a) / a;
        case KernelFamily::Tempered: {
            if (theta <= 0.0) require_alpha_positive(a);
            QuadConfig q = quad;
            q.rel_tol = std::min(q.rel_tol, 1e-10);
            q.abs_tol = 0.0;
            return integrate_to_infinity([&](double r) { return density(x, r); }, u, q).value;
        }
    }
    return 0.0;
}

double KernelComponent::second_moment_below(double x, double eps, const QuadConfig& quad) const {
    const double cx = c(x);
    if (cx == 0.0 || eps <= 0.0) return 0.0;
    const double a = alpha(x);
    switch (family) {
        case KernelFamily::StableLike:
            require_small_moment(a, family);
            return 2.0 * cx * std::pow(eps, 2.0 - a) / (2.0 - a);
        case KernelFamily::Pareto:
            if (eps <= 1.0) return 0.0;
            if (a == 2.0) return 2.0 * cx * std::log(eps);
            return 2.0 * cx * (std::pow(eps, 2.0 - a) - 1.0) / (2.0 - a);
        case KernelFamily::Tempered: {
            require_small_moment(a, family);
            const double k = 1.0 / (2.0 - a);
            QuadConfig q = quad;
            q.rel_tol = std::min(q.rel_tol, 1e-10);
            auto g = [&](double w) {
                const double u = eps * std::pow(w, k);
                return std::exp(-theta * std::pow(u, 1.0 + temper_zeta));
            };
            return 2.0 * cx * std::pow(eps, 2.0 - a) * k * integrate(g, 0.0, 1.0, q).value;
        }
    }
    return 0.0;
}

double KernelComponent::small_weighted(double x, const Integrand& h, const QuadConfig& quad) const {
    const double cx = c(x);
    if (cx == 0.0 || family == KernelFamily::Pareto) return 0.0;
    const double a = alpha(x);
    require_small_moment(a, family);
    const double k = 1.0 / (2.0 - a);
    auto g = [&](double w) {
        const double u = std::pow(w, k);
        double v = h(u);
        if (family == KernelFamily::Tempered) v *= std::exp(-theta * std::pow(u, 1.0 + temper_zeta));
        return v;
    };
    return cx * k * integrate(g, 0.0, 1.0, quad).value;
}

double KernelComponent::power_moment_tail(double x, double U, double q, const QuadConfig& quad) const {
    const double cx = c(x);
    if (cx == 0.0) return 0.0;
    const double a = alpha(x);
    if (family == KernelFamily::Tempered) {
        QuadConfig qc = quad;
        qc.abs_tol = 0.0;
        qc.rel_tol = std::min(qc.rel_tol, 1e-10);
        return integrate_to_infinity([&](double r) { return std::pow(r, q) * density(x, r); }, U, qc)
            .value;
    }
    if (q >= a) {
        std::ostringstream os;
        os << "moment of order " << q << " diverges for a power tail with alpha = " << a;
        throw Error(ErrorKind::Divergence, os.str());
    }
    const double lower = family == KernelFamily::Pareto ? std::max(U, 1.0) : U;
    return cx * std::pow(lower, q - a) / (a - q);
}

std::pair<double, double> KernelSpec::implied_indices(const std::vector<KernelComponent>& comps) {
    double lo = kInf, hi = -kInf;
    for (const auto& c : comps) {
        if (!c.has_power_tail()) continue;
        lo = std::min(lo, c.alpha.inf());
        hi = std::max(hi, c.alpha.sup());
    }
    if (lo == kInf) return {0.0, 0.0};
    return {lo, hi};
}

void LevyTypeModel::validate() const {
    for (const auto& comp : kernel.components) {
        require(comp.c.inf() >= 0.0, ErrorKind::ModelInvalid, "kernel intensity c must be nonnegative");
        require(comp.alpha.inf() > 0.0 || (comp.family == KernelFamily::Tempered && comp.theta > 0.0),
                ErrorKind::ModelInvalid, "divergent tail integral: alpha must be positive");
        require(comp.c.scale > 0.0 && comp.alpha.scale > 0.0, ErrorKind::ModelInvalid,
                "state-function scale must be positive");
        if (comp.family == KernelFamily::Tempered) {
            require(comp.c.is_constant() && comp.alpha.is_constant(), ErrorKind::ModelInvalid,
                    "tempered components take state-independent c and alpha");
            require(comp.theta >= 0.0, ErrorKind::ModelInvalid, "tempering theta must be >= 0");
            require(comp.temper_zeta > -1.0 && comp.temper_zeta <= 0.0, ErrorKind::ModelInvalid,
                    "tempering exponent zeta must lie in (-1, 0]");
        }
    }
    if (kernel.sigma != 0.0 || kernel.delta != 0.0) {
        require(kernel.sigma > 0.0 && kernel.sigma <= kernel.delta, ErrorKind::ModelInvalid,
                "declared tail indices need 0 < sigma <= delta");
    }
    if (kernel.exp_zeta) {
        require(*kernel.exp_zeta > -1.0 && *kernel.exp_zeta <= 0.0, ErrorKind::ModelInvalid,
                "exp_zeta must lie in (-1, 0]");
    }
    if (kernel.exp_alpha) {
        require(*kernel.exp_alpha > 0.0, ErrorKind::ModelInvalid, "exp_alpha must be positive");
    }
}

double panel_mass(const LevyTypeModel& model, double x, double a, double b, const QuadConfig& quad) {
    require(a < b && (a > 0.0 || b < 0.0), ErrorKind::Precondition,
            "panel_mass needs a < b with 0 outside [a, b]");
    double total = 0.0;
    for (const auto& comp : model.kernel.components) {
        const double brk[] = {-1.0, 1.0};
        total += integrate([&](double u) { return comp.density(x, u); }, a, b, quad, brk).value;
    }
    return total;
}

ModelCheck check_model(const LevyTypeModel& model, std::span<const double> grid) {
    ModelCheck out;
    const std::pair<double, double> panels[] = {{0.1, 0.5}, {0.5, 1.0}, {1.0, 4.0}, {4.0, 16.0}};
    for (double x : grid) {
        const double bdd = small_jump_moment(model, x) + 2.0 * tail(model, x, 1.0);
        out.bdd_sup = std::max(out.bdd_sup, bdd);
        for (auto [a, b] : panels) {
            const double pos = panel_mass(model, x, a, b);
            const double neg = panel_mass(model, x, -b, -a);
            const double scale = std::max({std::abs(pos), std::abs(neg), 1e-300});
            out.symmetry_defect = std::max(out.symmetry_defect, std::abs(pos - neg) / scale);
        }
    }
    return out;
}

double tail(const LevyTypeModel& model, double x, double u) {
    require(u > 0.0, ErrorKind::Precondition, "tail needs u > 0");
    double total = 0.0;
    for (const auto& comp : model.kernel.components) total += comp.tail(x, u);
    return total;
}

double small_jump_moment(const LevyTypeModel& model, double x) {
    double total = 0.0;
    for (const auto& comp : model.kernel.components) total += comp.second_moment_below(x, 1.0);
    return total;
}

ExpMoment exp_moment(const LevyTypeModel& model, double x, double alpha, double zeta) {
    require(alpha > 0.0, ErrorKind::Precondition, "exp_moment needs alpha > 0");
    require(zeta > -1.0 && zeta <= 0.0, ErrorKind::Precondition, "exp_moment needs zeta in (-1, 0]");

    QuadConfig quad;
    quad.rel_tol = 1e-10;
    quad.abs_tol = 0.0;
    auto integrand = [&](double u) {
        double v = 0.0;
        for (const auto& comp : model.kernel.components) {
            const double ld = comp.log_density(x, u);
            if (ld == -kInf) continue;
            v += std::exp(alpha * std::pow(u, 1.0 + zeta) + ld);
        }
        return v;
    };

    double total = 0.0, prev = -1.0;
    int decaying = 0, growing = 0;
    double lo = 1.0;
    for (int j = 0; j < 1020; ++j) {
        const double hi = 2.0 * lo;
        double panel = 0.0;
        try {
            panel = integrate(integrand, lo, hi, quad).value;
        } catch (const QuadratureError&) {
            return {kInf, true};
        }
        if (!std::isfinite(panel) || !std::isfinite(total + panel)) return {kInf, true};
        total += panel;
        if (prev >= 0.0) {
            if (panel < prev) {
                ++decaying;
                growing = 0;
            } else if (panel > 0.0) {
                ++growing;
                decaying = 0;
            }
        }
        if (growing >= 3) return {kInf, true};
        if (total == 0.0 && j >= 3) return {0.0, false};
        if (decaying >= 3 && panel <= 1e-16 * total) return {2.0 * total, false};
        prev = panel;
        lo = hi;
    }
    return {kInf, true};
}

std::vector<double> default_tail_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 16; ++k) g.push_back(std::pow(10.0, 0.25 * k));
    return g;
}

std::vector<double> default_lambda_grid() { return {1.5, 2.0, 4.0, 8.0, 16.0}; }

TailConstants tail_constants(const LevyTypeModel& model, std::span<const double> grid,
                             std::span<const double> lambda_grid, const TailRatioCheck& check) {
    const double sigma = model.kernel.sigma;
    const double delta = model.kernel.delta;
    require(sigma > 0.0 && delta >= sigma, ErrorKind::Precondition,
            "tail_constants needs declared tail indices 0 < sigma <= delta");
    double xmax = 0.0;
    for (double x : grid) xmax = std::max(xmax, std::abs(x));
    require(xmax >= 1e3, ErrorKind::Precondition, "tail_constants grid must reach |x| >= 1e3");

    TailConstants out;
    out.N_delta = kInf;
    out.x_cutoff = kInf;
    for (double xs : grid) {
        const double x = std::abs(xs);
        if (x < 1.0) continue;
        out.x_cutoff = std::min(out.x_cutoff, x);
        const double Nxx = tail(model, x, x);
        out.N_sigma = std::max(out.N_sigma, std::pow(x, sigma) * Nxx);
        out.N_delta = std::min(out.N_delta, std::pow(x, delta) * Nxx);
        out.N_max = std::max(out.N_max, tail(model, x, 1.0));
        out.nu_small = std::max(out.nu_small, small_jump_moment(model, x));

        for (double lambda : lambda_grid) {
            require(lambda >= 1.0, ErrorKind::Precondition, "lambda grid must be >= 1");
            double hi = 0.0, lo = kInf;
            for (int j = 0; j <= check.J; ++j) {
                const double u = check.u0 * std::ldexp(1.0, j);
                const double den = tail(model, x, u);
                const double num = tail(model, x, lambda * u);
                const double r = den > 0.0 ? num / den : 0.0;
                hi = std::max(hi, r);
                lo = std::min(lo, r);
            }
            const double upper = std::pow(lambda, -sigma) * (1.0 + check.tolerance);
            const double lower = std::pow(lambda, -delta) * (1.0 - check.tolerance);
            if (hi > upper || lo < lower) {
                std::ostringstream os;
                os << "declared tail indices (sigma=" << sigma << ", delta=" << delta
                   << ") inconsistent with kernel at x=" << x << ", lambda=" << lambda
                   << ": tail ratio range [" << lo << ", " << hi << "] vs allowed [" << lower
                   << ", " << upper << "]";
                throw Error(ErrorKind::TailIndexMismatch, os.str());
            }
        }
    }
    require(out.x_cutoff < kInf, ErrorKind::Precondition, "tail_constants grid has no |x| >= 1");
    return out;
}

}  // namespace levyerg
