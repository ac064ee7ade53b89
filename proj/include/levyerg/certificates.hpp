#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levyerg/generator.hpp"
#include "levyerg/levy_kernel.hpp"
#include "levyerg/rate_function.hpp"

namespace levyerg {

/// 1: 1 < sigma <= delta < 2;  2: sigma = delta = 2;  3: sigma >= 2, delta > 2;
/// 4: sigma < 2 <= delta;  5: light tails (exponential Lyapunov function).
using CaseIndex = int;

CaseIndex classify_case(double sigma, double delta);

/// C^(1..4). The case-1 series is summed until |term| < series_tol and a
/// power-law estimate of the remainder is added.
double constant_C(CaseIndex c, double p, const TailConstants& tails, double sigma, double delta,
                  double series_tol = 1e-12);

/// Case-1 series part alone: sum_k C_p^{2k} (N 2k/(2k - delta) - N (2k - p)/(2k - p + delta)),
/// without the leading factor 2.
double case1_series(double p, double N_delta, double delta, double series_tol = 1e-12);

/// sup_{x > 1} x^2 exp((beta - alpha) x^{1+zeta}).
double sup_c0(double beta, double alpha, double zeta);

/// C^(5) = beta^2 (1+zeta)^2 / 2 (e^beta nu_small + c0 nu_large).
double constant_C5(double beta, double zeta, double alpha, double nu_small, double nu_large);

/// phi^(i)(x), |x| >= 1. Case 5 uses |x|^{kappa+zeta} exp(beta |x|^{1+zeta}).
double scaling_phi(CaseIndex c, double p, double sigma, double x, double kappa = 0.0,
                   double beta = 0.0, double zeta = 0.0);

/// ln phi^(5)(x).
double log_scaling_phi5(double kappa, double beta, double zeta, double x);

struct CertificateGrid {
    std::vector<double> outer;  // radii, evaluated at +-x
    std::vector<double> inner;  // radii in [0, x_far], evaluated at +-x
    std::vector<double> tail_grid = default_tail_grid();
    std::vector<double> lambda_grid = default_lambda_grid();
    double margin_fraction = 0.05;
    QuadConfig quad{};

    /// outer 10^{2 + k/4}, k = 0..8; inner 0, 0.5, 10^{k/4}, k = 0..8.
    static CertificateGrid standard();
    double x_far() const;
};

struct GridPoint {
    double x = 0.0;
    double value = 0.0;
};

struct Certificate {
    int theorem = 1;
    CaseIndex case_index = 0;
    double p = 0.0;
    double beta = 0.0;
    double zeta = 0.0;
    double kappa = 0.0;
    double constant = 0.0;  // C^(i)
    TailConstants tails{};
    double c0 = 0.0;        // case 5
    double nu_large = 0.0;  // case 5
    RateFunction f{};

    double limsup_proxy = 0.0;     // max of the bracket over the outer grid
    double required_margin = 0.0;  // m
    double margin = 0.0;           // -limsup_proxy
    std::vector<GridPoint> evidence;

    double lyapunov_C = 0.0;
    std::optional<double> radius;  // compact set [-R, R] for the skeleton condition
    bool certified = false;
    std::string reason;
};

/// Drift-condition check for the polynomial V = phi^p. Not certifying is a verdict, not an error.
Certificate check_theorem1(const LevyTypeModel& model, double p, const RateFunction& f,
                           const CertificateGrid& grid = CertificateGrid::standard());

/// Drift-condition check for the exponential V = exp(beta phi^{1+zeta}). The kernel's exponential
/// index is model.kernel.exp_alpha.
Certificate check_theorem2(const LevyTypeModel& model, double beta, double zeta, double kappa,
                           const RateFunction& f,
                           const CertificateGrid& grid = CertificateGrid::standard());

struct DriftGrowth {
    double kappa = 0.0;
    double A = 0.0;
};

/// (kappa, A_kappa) with a(x) sign(x) / |x|^kappa <= -A_kappa on the outer grid.
DriftGrowth drift_growth(const Drift& drift, const std::vector<double>& outer);

enum class Pathway { Poly, Exp };

/// Rate function matched to the drift and tail regime, with the free constant C.
RateFunction corollary_rate(double kappa, double p, double sigma, double zeta, double beta,
                            Pathway pathway, double C = 1.0);

/// Largest admissible zeta for kappa in (-1, 0).
double optimal_zeta(double kappa);

}  // namespace levyerg
