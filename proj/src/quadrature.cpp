#include "levyerg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levyerg/errors.hpp"

namespace levyerg {
namespace {

struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const Integrand& f, double lo, double hi) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lo, hi, 0, 0.0, &err);
    if (!std::isfinite(v) || !std::isfinite(err)) {
        std::ostringstream os;
        os << "non-finite integrand on panel [" << lo << ", " << hi << "]";
        throw QuadratureError(os.str(), lo, hi, err);
    }
    return {lo, hi, v, err};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadConfig& cfg,
                     std::span<const double> breakpoints) {
    if (a == b) return {};
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = evaluate_panel(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    int panels = static_cast<int>(heap.size());
    while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (panels >= cfg.max_panels || mid <= worst.lo || mid >= worst.hi) {
            std::ostringstream os;
            os << "adaptive quadrature did not converge on [" << a << ", " << b
               << "]: error " << total_err << " after " << panels << " panels; worst panel ["
               << worst.lo << ", " << worst.hi << "]";
            throw QuadratureError(os.str(), worst.lo, worst.hi, worst.error);
        }
        heap.pop();
        Panel left = evaluate_panel(f, worst.lo, mid);
        Panel right = evaluate_panel(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    // Re-sum to shed the drift of incremental updates.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    return {sign * total, total_err, panels};
}

QuadResult integrate_to_infinity(const Integrand& f, double a, const QuadConfig& cfg,
                                 int max_doublings) {
    require(a > 0.0, ErrorKind::Precondition, "integrate_to_infinity needs a > 0");
    QuadResult out;
    int quiet = 0;
    double lo = a;
    for (int j = 0; j < max_doublings; ++j) {
        const double hi = 2.0 * lo;
        if (!std::isfinite(hi)) break;
        QuadResult r = integrate(f, lo, hi, cfg);
        out.value += r.value;
        out.error += r.error;
        out.panels += r.panels;
        const bool small = std::abs(r.value) <= cfg.abs_tol ||
                           std::abs(r.value) <= 1e-3 * cfg.rel_tol * std::abs(out.value);
        quiet = small ? quiet + 1 : 0;
        if (quiet >= 3) return out;
        lo = hi;
    }
    std::ostringstream os;
    os << "integral over [" << a << ", inf) did not settle";
    throw QuadratureError(os.str(), lo, INFINITY, out.error);
}

double gauss_legendre(const Integrand& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

}  // namespace levyerg
