#include <cmath>
#include <vector>

#include "doctest.h"
#include "levyerg/certificates.hpp"
#include "levyerg/errors.hpp"
#include "levyerg/series.hpp"
#include "support/models.hpp"

using namespace levyerg;
using namespace levyerg::testing;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Config;
}

// Brute-force partial sum with binomials from the product formula; the
// terms decay like k^{-p-2}, so 2e6 terms leave < 1e-16.
double brute_series(double p, double N, double delta) {
    double s = 0.0;
    double b = 1.0;
    for (int k = 1; k <= 2000000; ++k) {
        const double t = 2.0 * k;
        if (k < 40) b = generalized_binomial(p, 2 * k);
        else b *= (p - t + 2.0) * (p - t + 1.0) / ((t - 1.0) * t);
        s += b * (N * t / (t - delta) - N * (t - p) / (t - p + delta));
    }
    return s;
}

LevyTypeModel mixture_case4() {
    auto m = model(Drift::power(0.0, 1.0), {pareto(1.5), pareto(2.5)});
    return m;
}

std::vector<double> far_points() { return {1e2, std::pow(10.0, 2.5), 1e3, std::pow(10.0, 3.5), 1e4}; }

double l0_ratio(const LevyTypeModel& m, CaseIndex c, double p, double x) {
    return apply_L0(m, LyapunovSpec::polynomial(p), x) / scaling_phi(c, p, m.kernel.sigma, x);
}

}  // namespace

TEST_CASE("case classification") {
    CHECK(classify_case(1.5, 1.5) == 1);
    CHECK(classify_case(1.2, 1.9) == 1);
    CHECK(classify_case(2.0, 2.0) == 2);
    CHECK(classify_case(2.0, 3.0) == 3);
    CHECK(classify_case(2.5, 2.5) == 3);
    CHECK(classify_case(1.5, 2.5) == 4);
    CHECK(classify_case(1.5, 2.0) == 4);
    CHECK(kind_of([] { classify_case(0.8, 1.5); }) == ErrorKind::NotApplicable);
    CHECK(kind_of([] { classify_case(2.0, 1.5); }) == ErrorKind::Precondition);
}

TEST_CASE("case preimages are disjoint and cover the admissible region") {
    for (double s = 1.05; s < 3.0; s += 0.05) {
        for (double d = s; d < 3.5; d += 0.05) {
            const int c = classify_case(s, d);
            const bool c1 = s > 1 && d < 2, c2 = s == 2 && d == 2, c3 = s >= 2 && d > 2, c4 = s < 2 && d >= 2;
            CHECK(int(c1) + int(c2) + int(c3) + int(c4) == 1);
            CHECK(((c == 1) == c1));
            CHECK(((c == 3) == c3));
            CHECK(((c == 4) == c4));
        }
    }
}

TEST_CASE("case-1 constant against the brute-force series") {
    const double oracle = brute_series(1.2, 2.0 / 3.0, 1.5);
    CHECK(std::abs(case1_series(1.2, 2.0 / 3.0, 1.5) - oracle) < 1e-10);
    CHECK(2.0 * oracle == doctest::Approx(0.6095714989167205).epsilon(1e-14));

    TailConstants t;
    t.N_sigma = t.N_delta = 2.0 / 3.0;
    const double C1 = constant_C(1, 1.2, t, 1.5, 1.5);
    CHECK(std::abs(C1 - (2.0 * oracle + 2.0 * 1.2 * (2.0 / 3.0) / 0.3)) < 1e-10);
    CHECK(C1 == doctest::Approx(5.942904832250052).epsilon(1e-10));
}

TEST_CASE("case-1 series terms are positive for p in (1, 2)") {
    for (double p : {1.05, 1.4, 1.9}) {
        for (int k = 1; k < 200; ++k) CHECK(generalized_binomial(p, 2 * k) > 0.0);
    }
}

TEST_CASE("case-1 indicator removes the series when sigma < delta") {
    TailConstants t;
    t.N_sigma = 0.8;
    t.N_delta = 0.3;
    CHECK(constant_C(1, 1.2, t, 1.4, 1.8) == doctest::Approx(2 * 1.2 * 0.8 / 0.2).epsilon(1e-15));
}

TEST_CASE("closed-form constants for cases 2-4") {
    TailConstants t;
    t.N_sigma = 0.7;
    t.N_delta = 0.45;
    t.N_max = 0.9;
    t.nu_small = 3.0;
    CHECK(constant_C(2, 1.2, t, 2.0, 2.0) == doctest::Approx(0.48 * 0.45).epsilon(1e-15));
    CHECK(constant_C(3, 1.5, t, 2.5, 3.0) ==
          doctest::Approx(0.375 * (3.0 + 1.8 + 4 * 0.45 / 1.0)).epsilon(1e-15));
    CHECK(constant_C(3, 1.5, t, 2.0, 3.0) ==
          doctest::Approx(0.375 * (3.0 + 1.8 + 1.8) + 2 * 1.5 * 0.7 / 0.5).epsilon(1e-15));
    CHECK(constant_C(4, 1.25, t, 1.5, 2.5) == doctest::Approx(2 * 1.25 * 0.7 / 0.25).epsilon(1e-15));
    CHECK(kind_of([&] { constant_C(1, 1.6, t, 1.5, 1.5); }) == ErrorKind::Precondition);
}

TEST_CASE("series divergence is reported") {
    // p = 2.5 lies outside (1, 2); the rising-term guard runs for p close to 2k
    CHECK(kind_of([] { case1_series(2.5, 1.0, 1.5); }) == ErrorKind::Precondition);
}

TEST_CASE("scaling functions") {
    CHECK(scaling_phi(1, 1.2, 1.5, 10.0) == doctest::Approx(std::pow(10.0, -0.3)).epsilon(1e-15));
    CHECK(scaling_phi(2, 1.2, 2.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    double prev = scaling_phi(3, 1.2, 2.0, 1.0);
    for (double x = 2; x < 1e4; x *= 3) {
        const double v = scaling_phi(3, 1.2, 2.0, x);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(scaling_phi(4, 1.25, 1.5, -7.0) == scaling_phi(1, 1.25, 1.5, 7.0));
    CHECK(scaling_phi(5, 0, 0, 3.0, 0.5, 0.2, -0.5) ==
          doctest::Approx(std::pow(3.0, 0.0) * std::exp(0.2 * std::sqrt(3.0))).epsilon(1e-14));
    CHECK_THROWS_AS(scaling_phi(1, 1.2, 1.5, 0.5), Error);
}

TEST_CASE("c0 maximization matches the stationary point") {
    // analytic: x* = (2 / ((alpha - beta)(1 + zeta)))^{1/(1+zeta)}, clamped to x >= 1
    CHECK(sup_c0(0.5, 2.0, 0.0) == doctest::Approx(0.240596059087311452).epsilon(1e-9));
    CHECK(sup_c0(0.3, 1.0, -0.5) == doctest::Approx(19.5285445877382335).epsilon(1e-9));
    CHECK(sup_c0(1.0, 1.2, 0.0) == doctest::Approx(13.5335283236612752).epsilon(1e-9));
    CHECK(sup_c0(0.1, 5.0, 0.0) == doctest::Approx(0.00744658307092434056).epsilon(1e-9));
    CHECK(kind_of([] { sup_c0(2.0, 2.0, 0.0); }) == ErrorKind::Precondition);
    const double c5 = constant_C5(0.5, 0.0, 2.0, 1.3, 0.4);
    CHECK(c5 == doctest::Approx(0.125 * (std::exp(0.5) * 1.3 + 0.240596059087311452 * 0.4)).epsilon(1e-9));
}

TEST_CASE("asymptotic L0 V bound, case 1, stable-like kernel") {
    const auto m = stable_model(1.5);
    const auto tc = tail_constants(m, default_tail_grid(), default_lambda_grid());
    const double C = constant_C(1, 1.2, tc, 1.5, 1.5);
    for (double x : far_points()) CHECK(l0_ratio(m, 1, 1.2, x) <= 1.05 * C);
}

TEST_CASE("asymptotic L0 V bound, case 3, Pareto tails") {
    for (double alpha : {2.5, 3.0}) {
        const auto m = model(Drift::power(0.0, 1.0), {pareto(alpha)});
        const auto tc = tail_constants(m, default_tail_grid(), default_lambda_grid());
        const double C = constant_C(3, 1.5, tc, alpha, alpha);
        for (double x : far_points()) CHECK(l0_ratio(m, 3, 1.5, x) <= 1.05 * C);
    }
}

TEST_CASE("asymptotic L0 V bound, case 4, two Pareto pieces") {
    const auto m = mixture_case4();
    const auto tc = tail_constants(m, default_tail_grid(), default_lambda_grid());
    const double C = constant_C(4, 1.25, tc, 1.5, 2.5);
    CHECK(C == doctest::Approx(2 * 1.25 * (1 / 1.5 + 1 / 2.5) / 0.25).epsilon(1e-12));
    for (double x : far_points()) CHECK(l0_ratio(m, 4, 1.25, x) <= 1.05 * C);
}

TEST_CASE("asymptotic L0 V bound, case 2 ratio decreases toward the constant") {
    const auto m = model(Drift::power(0.0, 1.0), {pareto(2.0)});
    const auto tc = tail_constants(m, default_tail_grid(), default_lambda_grid());
    const double C = constant_C(2, 1.5, tc, 2.0, 2.0);
    CHECK(C == doctest::Approx(0.75));
    double prev = 1e300;
    for (double x : far_points()) {
        const double r = l0_ratio(m, 2, 1.5, x);
        CHECK(r < prev);
        CHECK(r > C);
        prev = r;
    }
    // the excess shrinks roughly like 1/ln x
    const double e2 = l0_ratio(m, 2, 1.5, 1e2) - C, e4 = l0_ratio(m, 2, 1.5, 1e4) - C;
    CHECK(e4 < 0.6 * e2);
}

TEST_CASE("asymptotic L0 V bound, case 2 literal 5% bound on the desk grid" * doctest::should_fail()) {
    // The bound is asymptotic with logarithmic convergence; at x <= 1e4 the
    // ratio is still 10-50% above C^(2).
    const auto m = model(Drift::power(0.0, 1.0), {pareto(2.0)});
    const double C = 0.75;
    for (double x : far_points()) CHECK(l0_ratio(m, 2, 1.5, x) <= 1.05 * C);
}

TEST_CASE("polynomial certificate: exponential-rate scenario certifies") {
    const auto m = stable_model(1.5, Drift::power(1.0, 1.0));
    const auto cert = check_theorem1(m, 1.2, RateFunction::linear(0.5));
    CHECK(cert.certified);
    CHECK(cert.case_index == 1);
    CHECK(cert.margin > cert.required_margin);
    CHECK(cert.required_margin > 0.0);
    CHECK(cert.radius.has_value());
    CHECK(cert.constant == doctest::Approx(5.942904832250052).epsilon(1e-9));
    CHECK(cert.evidence.size() == 18);
    // bracket = -0.7 |x|^{1.5} + C^(1) for this model
    for (const auto& pt : cert.evidence)
        CHECK(pt.value == doctest::Approx(-0.7 * std::pow(std::abs(pt.x), 1.5) + cert.constant).epsilon(1e-9));
}

TEST_CASE("polynomial certificate: no drift, no certificate") {
    const auto m = stable_model(1.5, Drift::power(0.0, 1.0));
    const auto cert = check_theorem1(m, 1.2, RateFunction::linear(1.0));
    CHECK_FALSE(cert.certified);
    CHECK(cert.limsup_proxy > 0.0);
}

TEST_CASE("polynomial certificate: balance violation is not certified") {
    const auto m = stable_model(1.5, Drift::power(1.0, -2.0));
    CHECK_FALSE(check_theorem1(m, 1.2, RateFunction::linear(0.5)).certified);
}

TEST_CASE("polynomial certificate: invalid rate function") {
    const auto m = stable_model(1.5, Drift::power(1.0, 1.0));
    CHECK(kind_of([&] { check_theorem1(m, 1.2, RateFunction::power(1.0, 1.5)); }) ==
          ErrorKind::InvalidRateFunction);
    CHECK(kind_of([&] { check_theorem1(m, 1.2, RateFunction::power(1.0, -0.5)); }) ==
          ErrorKind::InvalidRateFunction);
    CHECK(kind_of([&] { check_theorem1(m, 1.6, RateFunction::linear(0.5)); }) == ErrorKind::Precondition);
}

TEST_CASE("certificate monotonicity in f") {
    const auto m = stable_model(1.5, Drift::power(1.0, 0.5));
    const double p = 1.25;
    const auto f2 = corollary_rate(0.5, p, 1.5, 0.0, 0.0, Pathway::Poly, 0.8);
    const auto f1 = f2.with_constant(0.4);
    const auto c2 = check_theorem1(m, p, f2);
    const auto c1 = check_theorem1(m, p, f1);
    REQUIRE(c2.certified);
    CHECK(c1.certified);
    CHECK(c1.margin >= c2.margin);
}

TEST_CASE("scale coherence of the bracket") {
    const auto m = stable_model(1.5, Drift::power(1.0, 0.5));
    const double p = 1.25, g = 1.0 + (0.5 - 1.0) / p;
    const auto a = check_theorem1(m, p, RateFunction::power(0.3, g));
    const auto b = check_theorem1(m, p, RateFunction::power(0.6, g));
    for (std::size_t i = 0; i < a.evidence.size(); ++i) {
        const double x = a.evidence[i].x;
        const double shift = 0.3 * std::pow(std::abs(x), p * g) / scaling_phi(1, p, 1.5, x);
        CHECK(b.evidence[i].value - a.evidence[i].value == doctest::Approx(shift).epsilon(1e-10));
    }
}

TEST_CASE("exponential certificate: light-tailed kernel with linear drift") {
    auto m = model(Drift::power(1.0, 1.0), {tempered(1.5, 4.0)});
    m.kernel.exp_alpha = 2.0;
    m.kernel.exp_zeta = 0.0;
    const auto cert = check_theorem2(m, 0.5, 0.0, 1.0, RateFunction::linear(0.1));
    CHECK(cert.certified);
    CHECK(cert.case_index == 5);
    CHECK(cert.c0 == doctest::Approx(0.240596059087311452).epsilon(1e-9));
    // bracket = -beta + C / |x| + C^(5) for f = C x and kappa = 1
    for (const auto& pt : cert.evidence)
        CHECK(pt.value == doctest::Approx(-0.5 + 0.1 / std::abs(pt.x) + cert.constant).epsilon(1e-9));

    CHECK(kind_of([&] { check_theorem2(m, 2.0, 0.0, 1.0, RateFunction::linear(0.1)); }) ==
          ErrorKind::Precondition);
    const auto heavy = stable_model(1.5, Drift::power(1.0, 1.0));
    auto heavy_exp = heavy;
    heavy_exp.kernel.exp_alpha = 1.0;
    CHECK(kind_of([&] { check_theorem2(heavy_exp, 0.5, 0.0, 1.0, RateFunction::linear(0.1)); }) ==
          ErrorKind::Precondition);
}

TEST_CASE("exponential certificate runs for zeta outside the suggested range") {
    auto m = model(Drift::power(1.0, 0.0), {tempered(1.5, 4.0, 1.0, -0.5)});
    m.kernel.exp_alpha = 2.0;
    m.kernel.exp_zeta = -0.5;
    CHECK(kind_of([] { corollary_rate(0.0, 1.2, 1.5, -0.5, 1.0, Pathway::Exp); }) == ErrorKind::Precondition);
    const auto cert = check_theorem2(m, 0.5, -0.5, 0.0, RateFunction::linear(0.1));
    CHECK(cert.evidence.size() == 18);
}

TEST_CASE("drift growth") {
    const auto outer = CertificateGrid::standard().outer;
    auto g = drift_growth(Drift::power(1.0, 1.0), outer);
    CHECK(g.kappa == 1.0);
    CHECK(g.A == 1.0);
    g = drift_growth(Drift::power(2.0, 0.5), outer);
    CHECK(g.kappa == 0.5);
    CHECK(g.A == 2.0);
    CHECK(kind_of([&] { drift_growth(Drift::power(-1.0, 1.0), outer); }) == ErrorKind::NoInwardDrift);

    std::vector<double> xs{0.0}, vs{0.0};
    for (int k = 0; k <= 100; ++k) {
        const double x = std::pow(10.0, k / 20.0);
        xs.insert(xs.begin(), -x);
        vs.insert(vs.begin(), 2.0 * std::sqrt(x));
        xs.push_back(x);
        vs.push_back(-2.0 * std::sqrt(x));
    }
    g = drift_growth(Drift::tabulated(xs, vs), outer);
    CHECK(g.kappa == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(g.A == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(g.A > 0.0);
    std::vector<double> up;
    for (double x : xs) up.push_back(x);
    CHECK(kind_of([&] { drift_growth(Drift::tabulated(xs, up), outer); }) == ErrorKind::NoInwardDrift);
}

TEST_CASE("suggested rate functions") {
    auto f = corollary_rate(1.0, 1.3, 1.5, 0.0, 0.0, Pathway::Poly, 2.0);
    CHECK(f.kind == RateFunction::Kind::Linear);
    CHECK(f(3.0) == 6.0);
    f = corollary_rate(0.0, 1.2, 1.5, 0.0, 0.0, Pathway::Poly);
    CHECK(f.kind == RateFunction::Kind::Power);
    CHECK(f.g == doctest::Approx(1.0 / 6.0));
    f = corollary_rate(-0.5, 1.2, 1.5, -0.5, 1.0, Pathway::Exp);
    CHECK(f.kind == RateFunction::Kind::LogPower);
    CHECK(f.q == doctest::Approx(-2.0));
    CHECK(f(std::exp(2.0)) == doctest::Approx(std::exp(2.0) / 4.0));
    f = corollary_rate(0.5, 1.2, 1.5, 0.0, 1.0, Pathway::Exp);
    CHECK(f.kind == RateFunction::Kind::Linear);
    CHECK(kind_of([] { corollary_rate(-0.6, 1.2, 1.5, 0, 0, Pathway::Poly); }) == ErrorKind::BalanceViolation);
    CHECK(kind_of([] { corollary_rate(-1.0, 1.2, 2.0, 0, 0, Pathway::Poly); }) == ErrorKind::BalanceViolation);
}

TEST_CASE("optimal zeta") {
    CHECK(optimal_zeta(-0.5) == -0.5);
    CHECK(optimal_zeta(-0.9) == -0.9);
    CHECK(kind_of([] { optimal_zeta(0.5); }) == ErrorKind::NotApplicable);
}

TEST_CASE("rate function grid checks") {
    CHECK_NOTHROW(check_rate_function(RateFunction::linear(0.5), 0.0, 20.0));
    CHECK_NOTHROW(check_rate_function(RateFunction::power(0.5, 0.3), 0.0, 2000.0));
    CHECK_NOTHROW(check_rate_function(RateFunction::log_power(1.0, 0.5, -2.0), 10.0, 5000.0));
    CHECK_THROWS_AS(check_rate_function(RateFunction::power(1.0, 2.0), 0.0, 5.0), Error);
    CHECK_THROWS_AS(check_rate_function(RateFunction::linear(-1.0), 0.0, 5.0), Error);
}
