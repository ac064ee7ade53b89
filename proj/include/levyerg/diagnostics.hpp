#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "levyerg/levy_kernel.hpp"
#include "levyerg/rates.hpp"
#include "levyerg/simulator.hpp"

namespace levyerg {

struct TVResult {
    double value = 0.0;
    bool degenerate = false;  // every point equal in both samples
    int bins = 0;
};

/// ceil(min(|A|, |B|)^{1/3}), at least 2.
int default_bins(std::size_t na, std::size_t nb);

/// Histogram TV with equal-width bins on the common range. bins = 0 picks the default.
TVResult empirical_tv(const std::vector<double>& a, const std::vector<double>& b, int bins = 0);

/// Histogram TV with bins at quantiles of the pooled sample. Invariant under
/// a common strictly increasing transform; robust to heavy tails.
TVResult empirical_tv_rank(const std::vector<double>& a, const std::vector<double>& b, int bins = 0);

struct TVPoint {
    double t = 0.0;
    double tv = 0.0;
    double half_width = 0.0;  // 1.96 x bootstrap standard deviation
    double psi_overlay = 0.0;
};

struct TVCurve {
    std::vector<TVPoint> points;
    double reference_horizon = 0.0;
    long reference_size = 0;
    int bins = 0;
    int bootstrap = 0;
    std::optional<ClosedForm> pathway;
};

struct CurveOptions {
    int bins = 0;         // 0 = default rule
    int bootstrap = 200;
    std::optional<RatePlan> plan;  // psi overlay
};

/// TV between the chain law at each t in t_grid and a reference sample at
/// T_ref (independent stream) standing in for the invariant law. One path set
/// with checkpoints serves the whole grid.
TVCurve convergence_curve(const LevyTypeModel& model, const SimConfig& base, double x0,
                          const std::vector<double>& t_grid, double T_ref,
                          const CurveOptions& options = {});

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v);

struct RateComparison {
    std::string fit;          // "log-linear", "log-log", "log-stretched"
    double fitted = 0.0;
    double predicted = 0.0;
    double ratio = 0.0;       // fitted / predicted
    double tolerance = 2.0;
    int points_used = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

/// Fits the decay family implied by the plan to the points above the noise
/// floor (tv > 3 half-width) and compares the exponent with the prediction.
RateComparison rate_comparison(const TVCurve& curve, const RatePlan& plan, double tolerance = 2.0);

/// CSV "t,tv,half_width,psi_overlay" preceded by "# <comment>" lines.
void write_curve_csv(std::ostream& os, const TVCurve& curve, const std::vector<std::string>& comments = {});

}  // namespace levyerg
