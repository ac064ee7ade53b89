#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "levyerg/quadrature.hpp"

namespace levyerg {

/// A coefficient that may depend on the state: far + (near - far) exp(-(x/scale)^2).
/// Constant when near == far.
struct StateFunction {
    double near = 0.0;
    double far = 0.0;
    double scale = 1.0;

    static StateFunction constant(double v) { return {v, v, 1.0}; }

    double operator()(double x) const;
    bool is_constant() const { return near == far; }
    double inf() const { return near < far ? near : far; }
    double sup() const { return near < far ? far : near; }
};

enum class DriftFamily { Power, Tabulated };

/// Drift coefficient a(x). The power family is a(x) = -A sign(x) |x|^kappa
/// (A may be zero or negative); the tabulated family interpolates linearly
/// and extends the end segments linearly.
class Drift {
public:
    static Drift power(double A, double kappa);
    static Drift tabulated(std::vector<double> xs, std::vector<double> values);

    double operator()(double x) const;

    DriftFamily family() const { return family_; }
    double A() const { return A_; }
    double kappa() const { return kappa_; }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& values() const { return values_; }

private:
    DriftFamily family_ = DriftFamily::Power;
    double A_ = 0.0;
    double kappa_ = 1.0;
    std::vector<double> xs_, values_;
};

enum class KernelFamily {
    StableLike,  // c(x) |u|^{-1-alpha(x)}
    Tempered,    // c |u|^{-1-alpha} exp(-theta |u|^{1+zeta})
    Pareto,      // c(x) |u|^{-1-alpha(x)} on |u| >= 1, no small jumps
};

const char* to_string(KernelFamily family);

/// One additive piece of a symmetric jump kernel. Densities are even in u,
/// so every quantity is computed on u > 0 and doubled where needed.
struct KernelComponent {
    KernelFamily family = KernelFamily::StableLike;
    StateFunction c = StateFunction::constant(1.0);
    StateFunction alpha = StateFunction::constant(1.5);
    double theta = 0.0;        // tempered only
    double temper_zeta = 0.0;  // tempered only, exponent 1 + temper_zeta

    double density(double x, double u) const;
    double log_density(double x, double u) const;

    /// nu(x, [u, inf)) for u > 0.
    double tail(double x, double u, const QuadConfig& quad = {}) const;

    /// int_{0 < |u| < eps} u^2 nu(x, du).
    double second_moment_below(double x, double eps, const QuadConfig& quad = {}) const;

    /// int_{0 < u <= 1} u^2 h(u) nu(x, du), positive half only. The
    /// 1/u^{1+alpha} singularity is removed by the substitution
    /// u = w^{1/(2-alpha)}.
    double small_weighted(double x, const Integrand& h, const QuadConfig& quad) const;

    /// int_U^inf u^q nu(x, du), positive half, U >= 1.
    double power_moment_tail(double x, double U, double q, const QuadConfig& quad = {}) const;

    bool has_power_tail() const { return family != KernelFamily::Tempered; }
    bool has_small_jumps() const { return family != KernelFamily::Pareto; }
};

/// nu(x, du) with declared tail metadata.
struct KernelSpec {
    std::vector<KernelComponent> components;
    double sigma = 0.0;  // lower tail index (N1)
    double delta = 0.0;  // upper tail index (N1)
    std::optional<double> exp_alpha;  // exponential-moment index, light tails
    std::optional<double> exp_zeta;

    /// sigma/delta implied by the power-tailed components (inf/sup of alpha).
    static std::pair<double, double> implied_indices(const std::vector<KernelComponent>& comps);
};

struct LevyTypeModel {
    Drift drift = Drift::power(1.0, 1.0);
    KernelSpec kernel;

    /// Structural checks: nonnegative coefficients, alpha > 0, declared
    /// 0 < sigma <= delta, constant parameters for tempered pieces.
    void validate() const;
};

struct ModelCheck {
    double bdd_sup = 0.0;          // sup over grid of int (1 ^ u^2) nu(x, du)
    double symmetry_defect = 0.0;  // max relative |nu(x,[a,b]) - nu(x,[-b,-a])|
};

/// nu(x, [a, b]) by quadrature of the density; a < b, 0 not in [a, b].
double panel_mass(const LevyTypeModel& model, double x, double a, double b,
                  const QuadConfig& quad = {});

/// Numerical check of boundedness (bdd) and symmetry (S) on a state grid.
ModelCheck check_model(const LevyTypeModel& model, std::span<const double> grid);

/// N(x, u) = nu(x, [u, inf)) (equal to nu(x, (-inf, -u]) by symmetry).
double tail(const LevyTypeModel& model, double x, double u);

/// nu_small(x) = int_{|u| <= 1} u^2 nu(x, du).
double small_jump_moment(const LevyTypeModel& model, double x);

struct ExpMoment {
    double value = 0.0;
    bool infinite = false;
};

/// int_{|u| >= 1} exp(alpha |u|^{1+zeta}) nu(x, du), or the infinity flag when
/// panel sums over [2^j, 2^{j+1}] stop decaying.
ExpMoment exp_moment(const LevyTypeModel& model, double x, double alpha, double zeta);

struct TailConstants {
    double N_sigma = 0.0;
    double N_delta = 0.0;
    double N_max = 0.0;
    double nu_small = 0.0;
    double x_cutoff = 0.0;
};

/// Grid proxy for the limsup/liminf in the tail-ratio bounds: u ranges over
/// u0 * 2^j, j = 0..J.
struct TailRatioCheck {
    double u0 = 10.0;
    int J = 10;
    double tolerance = 0.02;
};

std::vector<double> default_tail_grid();    // 1 .. 1e4, four points per decade
std::vector<double> default_lambda_grid();  // 1.5, 2, 4, 8, 16

TailConstants tail_constants(const LevyTypeModel& model, std::span<const double> grid,
                             std::span<const double> lambda_grid,
                             const TailRatioCheck& check = {});

}  // namespace levyerg
