#include "levyerg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "levyerg/errors.hpp"

namespace levyerg {
namespace {

void require_samples(const std::vector<double>& a, const std::vector<double>& b, int bins) {
    require(!a.empty() && !b.empty(), ErrorKind::Precondition, "TV needs two nonempty samples");
    require(bins == 0 || bins >= 2, ErrorKind::Precondition, "TV needs at least two bins");
}

double tv_from_counts(const std::vector<long>& ca, const std::vector<long>& cb, double na, double nb) {
    double s = 0.0;
    for (std::size_t k = 0; k < ca.size(); ++k) s += std::abs(ca[k] / na - cb[k] / nb);
    return std::min(1.0, 0.5 * s);
}

// Quantile edges of the pooled sample, deduplicated; bin of v = #edges <= v.
std::vector<double> rank_edges(const std::vector<double>& a, const std::vector<double>& b, int bins) {
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> edges;
    const std::size_t n = pooled.size();
    for (int j = 1; j < bins; ++j) edges.push_back(pooled[static_cast<std::size_t>(j) * n / bins]);
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

std::vector<int> bin_index(const std::vector<double>& xs, const std::vector<double>& edges) {
    std::vector<int> idx(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        idx[i] = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), xs[i]) - edges.begin());
    return idx;
}

bool all_equal(const std::vector<double>& a, const std::vector<double>& b) {
    const double v = a.front();
    return std::all_of(a.begin(), a.end(), [v](double x) { return x == v; }) &&
           std::all_of(b.begin(), b.end(), [v](double x) { return x == v; });
}

struct LinearFit {
    double slope = 0.0, intercept = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

}  // namespace

int default_bins(std::size_t na, std::size_t nb) {
    const double m = static_cast<double>(std::min(na, nb));
    return std::max(2, static_cast<int>(std::ceil(std::cbrt(m) - 1e-9)));
}

TVResult empirical_tv(const std::vector<double>& a, const std::vector<double>& b, int bins) {
    require_samples(a, b, bins);
    const int k = bins > 0 ? bins : default_bins(a.size(), b.size());
    TVResult out;
    out.bins = k;
    if (all_equal(a, b)) {
        out.degenerate = true;
        return out;
    }
    const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
    const auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
    const double lo = std::min(*amin, *bmin), hi = std::max(*amax, *bmax);
    const double w = (hi - lo) / k;
    auto fill = [&](const std::vector<double>& xs) {
        std::vector<long> c(k, 0);
        for (double x : xs) {
            int j = w > 0.0 ? static_cast<int>((x - lo) / w) : 0;
            c[std::clamp(j, 0, k - 1)]++;
        }
        return c;
    };
    out.value = tv_from_counts(fill(a), fill(b), static_cast<double>(a.size()), static_cast<double>(b.size()));
    return out;
}

TVResult empirical_tv_rank(const std::vector<double>& a, const std::vector<double>& b, int bins) {
    require_samples(a, b, bins);
    const int k = bins > 0 ? bins : default_bins(a.size(), b.size());
    TVResult out;
    out.bins = k;
    if (all_equal(a, b)) {
        out.degenerate = true;
        return out;
    }
    const auto edges = rank_edges(a, b, k);
    const std::size_t nb = edges.size() + 1;
    std::vector<long> ca(nb, 0), cb(nb, 0);
    for (int j : bin_index(a, edges)) ca[j]++;
    for (int j : bin_index(b, edges)) cb[j]++;
    out.value = tv_from_counts(ca, cb, static_cast<double>(a.size()), static_cast<double>(b.size()));
    return out;
}

TVCurve convergence_curve(const LevyTypeModel& model, const SimConfig& base, double x0,
                          const std::vector<double>& t_grid, double T_ref, const CurveOptions& options) {
    require(!t_grid.empty(), ErrorKind::Precondition, "t grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        require(t_grid[i] > 0.0, ErrorKind::Precondition, "t grid must be positive");
        if (i > 0) require(t_grid[i] > t_grid[i - 1], ErrorKind::Precondition, "t grid must be strictly increasing");
    }
    const double t_max = t_grid.back();
    require(T_ref >= 4.0 * t_max, ErrorKind::Precondition, "reference horizon must be at least 4 max(t)");
    require(options.bootstrap >= 2, ErrorKind::Precondition, "bootstrap needs at least two resamples");

    SimConfig ref_cfg = base;
    ref_cfg.x0 = x0;
    ref_cfg.t = T_ref;
    ref_cfg.stream = base.stream + 1;
    const ChainSample reference = simulate_chain(model, ref_cfg);

    SimConfig path_cfg = base;
    path_cfg.x0 = x0;
    path_cfg.t = t_max;
    std::vector<long> cps;
    for (double t : t_grid) {
        SimConfig probe = base;
        probe.t = t;
        require(probe.steps() >= 1, ErrorKind::Precondition, "every grid time needs floor(n t) >= 1");
        cps.push_back(probe.steps());
    }
    const ChainSample paths = simulate_chain(model, path_cfg, cps);

    TVCurve curve;
    curve.reference_horizon = T_ref;
    curve.reference_size = static_cast<long>(reference.endpoints.size());
    curve.bootstrap = options.bootstrap;
    const auto& R = reference.endpoints;
    curve.bins = options.bins > 0 ? options.bins : default_bins(base.N, R.size());

    Rng boot(replica_seed(base.seed, base.stream + 2, 0));
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        const auto& A = paths.snapshots[k];
        TVPoint pt;
        pt.t = t_grid[k];
        const TVResult tv = empirical_tv_rank(A, R, curve.bins);
        pt.tv = tv.value;
        if (!tv.degenerate) {
            const auto edges = rank_edges(A, R, curve.bins);
            const auto ia = bin_index(A, edges), ir = bin_index(R, edges);
            const std::size_t nb = edges.size() + 1;
            std::uniform_int_distribution<std::size_t> pick_a(0, ia.size() - 1), pick_r(0, ir.size() - 1);
            double s = 0.0, ss = 0.0;
            for (int rep = 0; rep < options.bootstrap; ++rep) {
                std::vector<long> ca(nb, 0), cr(nb, 0);
                for (std::size_t i = 0; i < ia.size(); ++i) ca[ia[pick_a(boot)]]++;
                for (std::size_t i = 0; i < ir.size(); ++i) cr[ir[pick_r(boot)]]++;
                const double v = tv_from_counts(ca, cr, static_cast<double>(ia.size()), static_cast<double>(ir.size()));
                s += v;
                ss += v * v;
            }
            const double m = s / options.bootstrap;
            const double var = (ss - options.bootstrap * m * m) / (options.bootstrap - 1);
            pt.half_width = 1.959963984540054 * std::sqrt(std::max(var, 0.0));
        }
        curve.points.push_back(pt);
    }

    if (options.plan) {
        curve.pathway = options.plan->closed_form;
        const double anchor = psi(*options.plan, curve.points.front().t);
        const double scale = anchor > 0.0 ? curve.points.front().tv / anchor : 0.0;
        for (auto& pt : curve.points) pt.psi_overlay = scale * psi(*options.plan, pt.t);
        curve.points.front().psi_overlay = curve.points.front().tv;
    }
    return curve;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

RateComparison rate_comparison(const TVCurve& curve, const RatePlan& plan, double tolerance) {
    require(tolerance > 1.0, ErrorKind::Precondition, "tolerance factor must exceed 1");
    RateComparison out;
    out.tolerance = tolerance;

    std::vector<double> ts, tvs;
    for (const auto& pt : curve.points) {
        if (pt.tv > 3.0 * pt.half_width && pt.tv > 0.0) {
            ts.push_back(pt.t);
            tvs.push_back(pt.tv);
        }
    }
    out.points_used = static_cast<int>(ts.size());

    std::vector<double> xs, ys;
    const auto form = plan.closed_form;
    const double C = plan.f.C, gamma = plan.gamma;
    if (!form || *form == ClosedForm::Poly) {
        out.fit = "log-log";
        for (std::size_t i = 0; i < ts.size(); ++i) {
            xs.push_back(std::log(ts[i]));
            ys.push_back(std::log(tvs[i]));
        }
        if (form) {
            const double r = 1.0 - plan.f.g;  // (1 - kappa) / p
            out.predicted = 1.0 - 1.0 / r;
        } else if (!ts.empty()) {
            std::vector<double> lp;
            for (double t : ts) lp.push_back(std::log(psi(plan, t)));
            out.predicted = ts.size() >= 2 ? least_squares(xs, lp).slope : 0.0;
        }
    } else if (*form == ClosedForm::Exp) {
        out.fit = "log-linear";
        xs = ts;
        for (double v : tvs) ys.push_back(std::log(v));
        out.predicted = -C * gamma;
    } else {
        // ln psi ~ -(C beta^{-q} gamma r t)^{1/r}: linear in t^{1/r}
        out.fit = "log-stretched";
        const double q = plan.f.q, r = 1.0 - q;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            xs.push_back(std::pow(ts[i], 1.0 / r));
            ys.push_back(std::log(tvs[i]));
        }
        out.predicted = -std::pow(C * std::pow(plan.f.beta, -q) * gamma * r, 1.0 / r);
    }

    std::ostringstream note;
    if (ts.size() < 4) {
        note << "only " << ts.size() << " of " << curve.points.size()
             << " points lie above the noise floor (tv > 3 half-width)";
        out.note = note.str();
        out.verdict = Verdict::Inconclusive;
        return out;
    }
    out.fitted = least_squares(xs, ys).slope;
    out.ratio = out.predicted != 0.0 ? out.fitted / out.predicted : 0.0;
    const bool same_sign = (out.fitted < 0.0) == (out.predicted < 0.0) && out.fitted != 0.0;
    const bool within = out.ratio >= 1.0 / tolerance && out.ratio <= tolerance;
    out.verdict = same_sign && within ? Verdict::Pass : Verdict::Fail;
    note << out.fit << " fit on " << ts.size() << " points: fitted " << out.fitted << ", predicted "
         << out.predicted;
    if (!same_sign) note << " (sign mismatch)";
    out.note = note.str();
    return out;
}

void write_curve_csv(std::ostream& os, const TVCurve& curve, const std::vector<std::string>& comments) {
    for (const auto& c : comments) os << "# " << c << "\n";
    os << "t,tv,half_width,psi_overlay\n" << std::setprecision(17);
    for (const auto& p : curve.points) os << p.t << "," << p.tv << "," << p.half_width << "," << p.psi_overlay << "\n";
}

}  // namespace levyerg
