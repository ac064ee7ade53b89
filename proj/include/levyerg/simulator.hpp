#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "levyerg/generator.hpp"
#include "levyerg/levy_kernel.hpp"

namespace levyerg {

using Rng = std::mt19937_64;

/// Seed of replica `replica` in stream `stream`, derived with splitmix64 so
/// that neighbouring indices give unrelated generators.
std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t replica);

struct SimConfig {
    long n = 100;            // steps per unit time
    double t = 1.0;          // horizon
    long N = 1000;           // replicas
    std::optional<double> eps;  // small-jump cutoff; default sqrt(1/n) clamped to [1e-4, 1]
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    double x0 = 0.0;
    int threads = 1;         // 0 = hardware concurrency

    long steps() const;  // floor(n t)
    double h() const { return 1.0 / static_cast<double>(n); }
    double cutoff() const;
    void validate() const;
};

struct ChainDiagnostics {
    double eps = 0.0;
    long steps = 0;
    double mean_jumps_per_step = 0.0;
    double gaussian_variance_x0 = 0.0;  // h * int_{|u|<eps} u^2 nu(x0, du)
};

struct ChainSample {
    std::vector<double> endpoints;
    std::vector<std::uint64_t> seeds;
    SimConfig config;
    ChainDiagnostics diagnostics;
    /// Optional intermediate states: snapshots[k][i] is replica i after checkpoints[k] steps.
    std::vector<long> checkpoints;
    std::vector<std::vector<double>> snapshots;
};

/// q(x, xi) = -i a(x) xi + int (1 - cos(xi u)) nu(x, du) for a symmetric kernel.
std::complex<double> char_exponent(const LevyTypeModel& model, double x, double xi);

/// Draws from the frozen-coefficient law: a(x) h + Gaussian substitute for
/// |u| < eps + compound Poisson for |u| >= eps. Tempered pieces use a
/// tabulated inverse tail built once at construction.
class IncrementSampler {
public:
    IncrementSampler(const LevyTypeModel& model, double eps);

    double operator()(double x, double h, Rng& rng) const;
    /// Same, also adding the number of jumps drawn to `jumps`.
    double draw(double x, double h, Rng& rng, long& jumps) const;

    /// h-free rates at state x: Gaussian variance per unit time and jump intensity.
    double small_variance_rate(double x) const;
    double jump_rate(double x) const;

    double eps() const { return eps_; }

private:
    struct Table {
        std::vector<double> log_u, log_tail;  // decreasing log_tail
        double mass = 0.0;                    // two-sided
        double small_var = 0.0;               // two-sided
    };

    double sample_size(std::size_t comp, double x, Rng& rng) const;

    const LevyTypeModel* model_;
    double eps_;
    std::vector<std::optional<Table>> tables_;
};

/// One increment from a freshly built sampler.
double sample_increment(const LevyTypeModel& model, double x, double h, double eps, Rng& rng);

/// floor(n t) frozen-coefficient steps from x0 for N independent replicas.
/// `checkpoints` (step counts <= floor(n t)) record intermediate states.
ChainSample simulate_chain(const LevyTypeModel& model, const SimConfig& cfg,
                           const std::vector<long>& checkpoints = {});

struct Estimate {
    double value = 0.0;
    double standard_error = 0.0;
};

/// Replica mean of u at the endpoints and its standard error.
Estimate monte_carlo_functional(const LevyTypeModel& model, const std::function<double(double)>& u,
                                const SimConfig& cfg);
Estimate monte_carlo_functional(const ChainSample& sample, const std::function<double(double)>& u);

struct SkeletonDrift {
    double estimate = 0.0;
    double half_width = 0.0;  // 95%, possibly widened
    double kurtosis = 0.0;
    bool widened = false;     // heavy-tail guard triggered
};

/// (1/M) sum V(Y(floor(n h))) - V(x), started at x, with a 95% half-width.
/// The half-width is multiplied by 1 + 2 sqrt((kurt - 1) / (4M)), the relative
/// uncertainty of the sample standard deviation; `widened` flags kurtosis > 9.
SkeletonDrift empirical_skeleton_drift(const LevyTypeModel& model, const LyapunovSpec& spec, double x,
                                       double h, long M, long n = 200, std::uint64_t seed = 1,
                                       int threads = 1);

/// CSV "replica_index,endpoint" preceded by "# <comment>" lines.
void write_chain_csv(std::ostream& os, const ChainSample& sample,
                     const std::vector<std::string>& comments = {});

}  // namespace levyerg
