#include "levyerg/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "levyerg/errors.hpp"

namespace levyerg {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform on (0, 1].
double open_uniform(Rng& rng) { return 1.0 - std::generate_canonical<double, 64>(rng); }

int resolve_threads(int requested, long work) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    t = std::max(t, 1);
    return static_cast<int>(std::min<long>(t, std::max<long>(work, 1)));
}

// Runs body(i) for i in [0, count) on `threads` workers with contiguous blocks.
// The first exception (by index) is rethrown after all workers finish.
template <class Body>
void parallel_for(long count, int threads, Body&& body) {
    threads = resolve_threads(threads, count);
    if (threads == 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const long block = (count + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            const long lo = w * block, hi = std::min(count, lo + block);
            try {
                for (long i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t replica) {
    return splitmix64(splitmix64(seed ^ splitmix64(stream + 0x51ED270B27A4ULL)) + replica);
}

long SimConfig::steps() const { return static_cast<long>(std::floor(static_cast<double>(n) * t + 1e-9)); }

double SimConfig::cutoff() const {
    if (eps) return *eps;
    return std::clamp(std::sqrt(h()), 1e-4, 1.0);
}

void SimConfig::validate() const {
    require(n >= 1, ErrorKind::Precondition, "n must be a positive integer");
    require(std::isfinite(t) && t > 0.0, ErrorKind::Precondition, "horizon t must be positive");
    require(steps() >= 1, ErrorKind::Precondition, "floor(n t) must be at least 1");
    require(N >= 1, ErrorKind::Precondition, "replica count N must be positive");
    const double e = cutoff();
    require(e > 0.0 && e <= 1.0, ErrorKind::Precondition, "small-jump cutoff eps must lie in (0, 1]");
    require(std::isfinite(x0), ErrorKind::Precondition, "x0 must be finite");
}

std::complex<double> char_exponent(const LevyTypeModel& model, double x, double xi) {
    if (xi == 0.0) return {0.0, 0.0};
    const double re = -jump_integral(model, x, TestFunction::cosine(xi), 0.0);
    return {re, -model.drift(x) * xi};
}

IncrementSampler::IncrementSampler(const LevyTypeModel& model, double eps)
    : model_(&model), eps_(eps), tables_(model.kernel.components.size()) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw Error(ErrorKind::Cutoff, "small-jump cutoff must be positive and finite");
    }
    const auto& comps = model.kernel.components;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto& c = comps[i];
        if (c.family != KernelFamily::Tempered) continue;
        Table t;
        const double x = 0.0;  // tempered pieces are state independent
        t.small_var = c.second_moment_below(x, eps);
        const double total = c.tail(x, eps);
        if (!std::isfinite(total)) throw Error(ErrorKind::Cutoff, "infinite kernel mass above the cutoff");
        t.mass = 2.0 * total;
        if (total > 0.0) {
            double umax = std::max(2.0 * eps, 1.0);
            while (c.tail(x, umax) > 1e-13 * total && umax < 1e12) umax *= 2.0;
            constexpr int n = 1024;
            const double la = std::log(eps), lb = std::log(umax);
            t.log_u.resize(n);
            std::vector<double> tail(n);
            for (int k = 0; k < n; ++k) t.log_u[k] = la + (lb - la) * k / (n - 1);
            tail[n - 1] = c.tail(x, umax);
            QuadConfig q;
            q.rel_tol = 1e-10;
            q.abs_tol = 0.0;
            for (int k = n - 2; k >= 0; --k) {
                const double a = std::exp(t.log_u[k]), b = std::exp(t.log_u[k + 1]);
                tail[k] = tail[k + 1] + integrate([&](double u) { return c.density(x, u); }, a, b, q).value;
            }
            const double scale = total / tail[0];  // absorb the last-digit mismatch
            t.log_tail.resize(n);
            for (int k = 0; k < n; ++k) t.log_tail[k] = std::log(std::max(tail[k] * scale, 1e-300));
        }
        tables_[i] = std::move(t);
    }
}

double IncrementSampler::small_variance_rate(double x) const {
    double v = 0.0;
    const auto& comps = model_->kernel.components;
    for (std::size_t i = 0; i < comps.size(); ++i)
        v += tables_[i] ? tables_[i]->small_var : comps[i].second_moment_below(x, eps_);
    return v;
}

double IncrementSampler::jump_rate(double x) const {
    double m = 0.0;
    const auto& comps = model_->kernel.components;
    for (std::size_t i = 0; i < comps.size(); ++i)
        m += tables_[i] ? tables_[i]->mass : 2.0 * comps[i].tail(x, eps_);
    return m;
}

double IncrementSampler::sample_size(std::size_t i, double x, Rng& rng) const {
    const auto& c = model_->kernel.components[i];
    const double U = open_uniform(rng);
    switch (c.family) {
        case KernelFamily::StableLike: return eps_ * std::pow(U, -1.0 / c.alpha(x));
        case KernelFamily::Pareto: return std::max(eps_, 1.0) * std::pow(U, -1.0 / c.alpha(x));
        case KernelFamily::Tempered: {
            const Table& t = *tables_[i];
            // Solve tail(u) = U tail(eps) on the table, log-linear between nodes.
            const double target = t.log_tail[0] + std::log(U);
            const auto it = std::lower_bound(t.log_tail.begin(), t.log_tail.end(), target,
                                             [](double a, double b) { return a > b; });
            std::size_t k = static_cast<std::size_t>(it - t.log_tail.begin());
            if (k == 0) return std::exp(t.log_u[0]);
            if (k >= t.log_tail.size()) k = t.log_tail.size() - 1;
            const double y0 = t.log_tail[k - 1], y1 = t.log_tail[k];
            const double w = y1 == y0 ? 0.0 : (target - y0) / (y1 - y0);
            return std::exp(t.log_u[k - 1] + w * (t.log_u[k] - t.log_u[k - 1]));
        }
    }
    return 0.0;
}

double IncrementSampler::draw(double x, double h, Rng& rng, long& jumps) const {
    double dy = model_->drift(x) * h;
    const double var = h * small_variance_rate(x);
    if (var > 0.0) dy += std::sqrt(var) * std::normal_distribution<double>(0.0, 1.0)(rng);

    const auto& comps = model_->kernel.components;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const double mass = tables_[i] ? tables_[i]->mass : 2.0 * comps[i].tail(x, eps_);
        if (!std::isfinite(mass)) {
            std::ostringstream os;
            os << "kernel mass above eps = " << eps_ << " is infinite at x = " << x;
            throw Error(ErrorKind::Cutoff, os.str());
        }
        if (mass <= 0.0) continue;
        const long k = std::poisson_distribution<long>(h * mass)(rng);
        jumps += k;
        for (long j = 0; j < k; ++j) {
            const double r = sample_size(i, x, rng);
            dy += (std::generate_canonical<double, 64>(rng) < 0.5) ? -r : r;
        }
    }
    return dy;
}

double IncrementSampler::operator()(double x, double h, Rng& rng) const {
    long jumps = 0;
    return draw(x, h, rng, jumps);
}

double sample_increment(const LevyTypeModel& model, double x, double h, double eps, Rng& rng) {
    require(h > 0.0, ErrorKind::Precondition, "time step h must be positive");
    return IncrementSampler(model, eps)(x, h, rng);
}

ChainSample simulate_chain(const LevyTypeModel& model, const SimConfig& cfg,
                           const std::vector<long>& checkpoints) {
    model.validate();
    cfg.validate();
    const long steps = cfg.steps();
    for (long c : checkpoints)
        require(c >= 0 && c <= steps, ErrorKind::Precondition, "checkpoint beyond the step count");
    std::vector<long> cps = checkpoints;
    std::sort(cps.begin(), cps.end());

    const IncrementSampler sampler(model, cfg.cutoff());
    const double h = cfg.h();

    ChainSample out;
    out.config = cfg;
    out.endpoints.assign(cfg.N, 0.0);
    out.seeds.resize(cfg.N);
    out.checkpoints = cps;
    out.snapshots.assign(cps.size(), std::vector<double>(cfg.N, 0.0));
    std::vector<long> jump_counts(cfg.N, 0);

    parallel_for(cfg.N, cfg.threads, [&](long i) {
        const std::uint64_t s = replica_seed(cfg.seed, cfg.stream, static_cast<std::uint64_t>(i));
        out.seeds[i] = s;
        Rng rng(s);
        double y = cfg.x0;
        long jumps = 0;
        std::size_t next = 0;
        while (next < cps.size() && cps[next] == 0) out.snapshots[next++][i] = y;
        for (long k = 1; k <= steps; ++k) {
            y += sampler.draw(y, h, rng, jumps);
            if (!(std::abs(y) <= 1e300)) {
                std::ostringstream os;
                os << "chain exploded at step " << k << " of replica " << i << " (state " << y
                   << "); the model is likely not ergodic";
                throw ExplosionError(os.str(), k, i, y);
            }
            while (next < cps.size() && cps[next] == k) out.snapshots[next++][i] = y;
        }
        out.endpoints[i] = y;
        jump_counts[i] = jumps;
    });

    double total_jumps = 0.0;
    for (long j : jump_counts) total_jumps += static_cast<double>(j);
    out.diagnostics.eps = sampler.eps();
    out.diagnostics.steps = steps;
    out.diagnostics.mean_jumps_per_step = total_jumps / (static_cast<double>(cfg.N) * steps);
    out.diagnostics.gaussian_variance_x0 = h * sampler.small_variance_rate(cfg.x0);
    return out;
}

Estimate monte_carlo_functional(const ChainSample& sample, const std::function<double(double)>& u) {
    const auto& ys = sample.endpoints;
    require(!ys.empty(), ErrorKind::Precondition, "empty chain sample");
    double mean = 0.0;
    for (double y : ys) mean += u(y);
    mean /= static_cast<double>(ys.size());
    double ss = 0.0;
    for (double y : ys) ss += (u(y) - mean) * (u(y) - mean);
    const double n = static_cast<double>(ys.size());
    const double se = ys.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return {mean, se};
}

Estimate monte_carlo_functional(const LevyTypeModel& model, const std::function<double(double)>& u,
                                const SimConfig& cfg) {
    return monte_carlo_functional(simulate_chain(model, cfg), u);
}

SkeletonDrift empirical_skeleton_drift(const LevyTypeModel& model, const LyapunovSpec& spec, double x,
                                       double h, long M, long n, std::uint64_t seed, int threads) {
    if (std::abs(x) < 1.0) {
        std::ostringstream os;
        os << "skeleton drift is evaluated for |x| >= 1, got x = " << x;
        throw Error(ErrorKind::Precondition, os.str());
    }
    require(M >= 2, ErrorKind::Precondition, "skeleton drift needs at least two replicas");
    SimConfig cfg;
    cfg.n = n;
    cfg.t = h;
    cfg.N = M;
    cfg.seed = seed;
    cfg.x0 = x;
    cfg.threads = threads;
    const ChainSample s = simulate_chain(model, cfg);

    const double vx = spec.value(x);
    const double m = static_cast<double>(M);
    double mean = 0.0;
    for (double y : s.endpoints) mean += spec.value(y) - vx;
    mean /= m;
    double m2 = 0.0, m4 = 0.0;
    for (double y : s.endpoints) {
        const double d = spec.value(y) - vx - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= m;
    m4 /= m;
    SkeletonDrift out;
    out.estimate = mean;
    out.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    const double sd = std::sqrt(m2 * m / (m - 1.0));
    const double widen = 1.0 + 2.0 * std::sqrt(std::max(out.kurtosis - 1.0, 0.0) / (4.0 * m));
    out.half_width = 1.959963984540054 * sd / std::sqrt(m) * widen;
    out.widened = out.kurtosis > 9.0;
    return out;
}

void write_chain_csv(std::ostream& os, const ChainSample& sample, const std::vector<std::string>& comments) {
    for (const auto& c : comments) os << "# " << c << "\n";
    os << "replica_index,endpoint\n" << std::setprecision(17);
    for (std::size_t i = 0; i < sample.endpoints.size(); ++i) os << i << "," << sample.endpoints[i] << "\n";
}

}  // namespace levyerg
