// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/quadrature.hpp"

#include "shadowsec/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace shadowsec {

namespace {

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
    unsigned depth = 0;
    bool operator<(const Panel& other) const { return error < other.error; }
};

// One 61-point Kronrod panel with its embedded 30-point Gauss rule. The error
// estimate is |K - G| with a roundoff floor proportional to the panel's L1 norm.
Panel make_panel(const std::function<double(double)>& f, double a, double b, unsigned depth) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
    using gauss = boost::math::quadrature::gauss<double, 30>;
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double k = f0 * wk[0];
    double l1 = std::fabs(f0) * wk[0];
    double g = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fp = f(mid + half * x[i]);
        const double fm = f(mid - half * x[i]);
        k += (fp + fm) * wk[i];
        l1 += (std::fabs(fp) + std::fabs(fm)) * wk[i];
        // Odd Kronrod nodes are the Gauss nodes.
        if (i % 2 == 1)
            g += (fp + fm) * wg[i / 2];
    }
    Panel p{a, b, k * half, 0.0, l1 * std::fabs(half), depth};
    p.error = std::max(std::fabs((k - g) * half), 50.0 * std::numeric_limits<double>::epsilon() * p.l1);
    return p;
}

// Global adaptive bisection: always split the panel with the largest error.
QuadratureResult adaptive(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opts) {
    constexpr std::size_t max_panels = 4000;
    std::priority_queue<Panel> queue;
    queue.push(make_panel(f, a, b, 0));
    double value = queue.top().value;
    double error = queue.top().error;
    double l1 = queue.top().l1;
    // Refinement stops at the relative target or well below the acceptance threshold.
    const double floor = 1e-3 * opts.abs_tol;
    std::vector<Panel> done;
    while (!queue.empty() && queue.size() + done.size() < max_panels) {
        if (error <= std::max(opts.rel_tol * std::max(std::fabs(value), l1), floor))
            break;
        Panel worst = queue.top();
        queue.pop();
        if (worst.depth >= opts.max_depth) {
            done.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = make_panel(f, worst.a, mid, worst.depth + 1);
        const Panel right = make_panel(f, mid, worst.b, worst.depth + 1);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        queue.push(left);
        queue.push(right);
    }
    // Re-sum to drop the drift of the running totals.
    value = 0.0;
    error = 0.0;
    for (const auto& p : done) {
        value += p.value;
        error += p.error;
    }
    while (!queue.empty()) {
        value += queue.top().value;
        error += queue.top().error;
        queue.pop();
    }
    if (!std::isfinite(value))
        throw NumericalError("quadrature produced a non-finite value");
    const double accept = std::max(opts.abs_tol, opts.rel_tol * std::fabs(value));
    if (!(error <= accept)) {
        std::ostringstream msg;
        msg << "quadrature did not converge: estimate " << value << " +/- " << error << " (bracket ["
            << value - error << ", " << value + error << "]), required " << accept;
        throw NumericalError(msg.str());
    }
    return {value, error};
}

} // namespace

QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts) {
    if (a == b)
        return {};
    return adaptive(f, a, b, opts);
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double scale,
                                         const QuadratureOptions& opts) {
    if (!(scale > 0.0))
        throw DomainError("integrate_semi_infinite requires a positive scale");
    auto mapped = [&](double t) {
        if (t >= 1.0)
            return 0.0;
        const double one_minus = 1.0 - t;
        const double x = scale * t / one_minus;
        const double v = f(x);
        if (v == 0.0)
            return 0.0;
        return v * scale / (one_minus * one_minus);
    };
    return adaptive(mapped, 0.0, 1.0, opts);
}

} // namespace shadowsec
