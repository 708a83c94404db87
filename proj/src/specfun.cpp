// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/specfun.hpp"

#include "shadowsec/errors.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <math.h>

namespace shadowsec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 200000;

constexpr int kFactorialTable = 4096;

const std::array<double, kFactorialTable>& factorial_table() {
    static const auto table = [] {
        std::array<double, kFactorialTable> t{};
        t[0] = 0.0;
        for (int n = 1; n < kFactorialTable; ++n)
            t[n] = t[n - 1] + std::log(static_cast<double>(n));
        return t;
    }();
    return table;
}

// Lower series sum for gamma(s, x) * e^x * x^-s.
double lower_series(double s, double x) {
    double ap = s;
    double term = 1.0 / s;
    double sum = term;
    for (int i = 0; i < kMaxIterations; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps)
            return sum;
    }
    throw NumericalError("incomplete gamma series did not converge for s=" + std::to_string(s) +
                         ", x=" + std::to_string(x));
}

// Continued fraction for Gamma(s, x) * e^x * x^-s (modified Lentz).
double upper_fraction(double s, double x) {
    double b = x + 1.0 - s;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny)
            d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            return h;
    }
    throw NumericalError("incomplete gamma continued fraction did not converge for s=" + std::to_string(s) +
                         ", x=" + std::to_string(x));
}

void check_gamma_args(double s, double x) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw DomainError("incomplete gamma requires s > 0, got " + std::to_string(s));
    if (!(x >= 0.0))
        throw DomainError("incomplete gamma requires x >= 0, got " + std::to_string(x));
}

// e^x E_n(x) by continued fraction; valid for x > 0, fastest for x > 1.
double expint_fraction(int n, double x) {
    double b = x + n;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -static_cast<double>(i) * (n - 1 + i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            return h;
    }
    throw NumericalError("exponential integral continued fraction did not converge");
}

// Shared driver: log_ratio(d) is ln(t_{d+1} / t_d) without the ln z factor.
SeriesResult hypergeometric_series(double z, const SeriesConfig& trunc, auto&& log_ratio) {
    SeriesResult out;
    out.terms.push_back(LogNum::one());
    LogAccumulator sum;
    sum.add(LogNum::one());
    if (z == 0.0) {
        out.value = LogNum::one();
        return out;
    }
    const double log_z = std::log(z);
    double log_term = 0.0;
    for (int d = 0;; ++d) {
        const double step = log_ratio(d) + log_z;
        const int kept = d + 1;
        const double rel = log_term - sum.total().log_magnitude;
        if (kept >= trunc.depth && rel < std::log(trunc.prune) && step < 0.0) {
            // Geometric bound on the remaining tail with the last term ratio.
            const double rho = std::exp(step);
            out.tail_estimate = std::exp(rel) * rho / (1.0 - rho);
            break;
        }
        if (kept >= trunc.max_depth) {
            const double rho = std::exp(step);
            out.converged = rho < 1.0;
            out.tail_estimate = rho < 1.0 ? std::exp(rel) * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
            out.warnings.push_back("series truncated at max_depth=" + std::to_string(trunc.max_depth) +
                                   (rho >= 1.0 ? " with term ratio >= 1" : ""));
            break;
        }
        log_term += step;
        out.terms.push_back(LogNum::from_log(log_term));
        sum.add(LogNum::from_log(log_term));
    }
    out.value = sum.total();
    return out;
}

} // namespace

double ln_gamma(double s) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw DomainError("ln_gamma requires s > 0, got " + std::to_string(s));
    int sign = 1;
    return ::lgamma_r(s, &sign);
}

double ln_factorial(int n) {
    if (n < 0)
        throw DomainError("ln_factorial requires n >= 0");
    if (n < kFactorialTable)
        return factorial_table()[static_cast<std::size_t>(n)];
    return ln_gamma(n + 1.0);
}

double ln_binomial(int n, int k) {
    if (k < 0 || k > n)
        return -std::numeric_limits<double>::infinity();
    return ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
}

LogNum upper_inc_gamma(double s, double x) {
    check_gamma_args(s, x);
    const double lg = ln_gamma(s);
    if (x == 0.0)
        return LogNum::from_log(lg);
    const double log_scale = -x + s * std::log(x);
    if (x > s + 1.0)
        return LogNum::from_log(log_scale + std::log(upper_fraction(s, x)));
    const double lower = std::exp(log_scale + std::log(lower_series(s, x)) - lg);
    if (lower >= 1.0)
        return LogNum::zero();
    return LogNum::from_log(lg + std::log1p(-lower));
}

double regularized_upper_gamma(double s, double x) {
    check_gamma_args(s, x);
    if (x == 0.0)
        return 1.0;
    const double log_scale = -x + s * std::log(x) - ln_gamma(s);
    if (x > s + 1.0)
        return std::min(1.0, std::exp(log_scale + std::log(upper_fraction(s, x))));
    return std::max(0.0, 1.0 - std::exp(log_scale + std::log(lower_series(s, x))));
}

double regularized_lower_gamma(double s, double x) {
    check_gamma_args(s, x);
    if (x == 0.0)
        return 0.0;
    const double log_scale = -x + s * std::log(x) - ln_gamma(s);
    if (x > s + 1.0)
        return std::max(0.0, 1.0 - std::exp(log_scale + std::log(upper_fraction(s, x))));
    return std::min(1.0, std::exp(log_scale + std::log(lower_series(s, x))));
}

SeriesResult kummer_1f1_series(double a, double b, double z, const SeriesConfig& trunc) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("kummer_1f1_series requires a > 0 and b > 0");
    if (!(z >= 0.0))
        throw DomainError("kummer_1f1_series requires z >= 0");
    return hypergeometric_series(z, trunc, [a, b](int d) {
        return std::log((a + d) / ((b + d) * (d + 1.0)));
    });
}

SeriesResult hyp0f1_series(double b, double z, const SeriesConfig& trunc) {
    if (!(b > 0.0))
        throw DomainError("hyp0f1_series requires b > 0");
    if (!(z >= 0.0))
        throw DomainError("hyp0f1_series requires z >= 0");
    return hypergeometric_series(z, trunc, [b](int d) { return -std::log((b + d) * (d + 1.0)); });
}

double expint_ei(double x) {
    if (!(x < 0.0))
        throw DomainError("expint_ei is only provided for x < 0, got " + std::to_string(x));
    const double y = -x;
    if (y > 20.0)
        return -std::exp(-y) * expint_fraction(1, y);
    // Ramanujan's series: every summand has the same sign for negative x.
    double term = 1.0; // y^n / (n! 2^(n-1)) at n = 0 scaled by 2
    double inner = 0.0;
    double sum = 0.0;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= (n == 1 ? y : y / (2.0 * n));
        if ((n - 1) % 2 == 0)
            inner += 1.0 / n;
        const double add = term * inner;
        sum += add;
        if (add < sum * kEps && n > y)
            break;
    }
    return euler_gamma + std::log(y) - std::exp(-y / 2.0) * sum;
}

double scaled_expint_en(int n, double x) {
    if (n < 1)
        throw DomainError("scaled_expint_en requires n >= 1");
    if (!(x > 0.0))
        throw DomainError("scaled_expint_en requires x > 0");
    if (x > 1.0)
        return expint_fraction(n, x);
    double m = -std::exp(x) * expint_ei(-x);
    for (int k = 1; k < n; ++k)
        m = (1.0 - x * m) / k;
    return m;
}

std::vector<double> scaled_expint_table(int count, double x) {
    if (!(x > 0.0))
        throw DomainError("scaled_expint_table requires x > 0");
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
    if (count <= 0)
        return out;
    if (x <= 1.0) {
        out[0] = -std::exp(x) * expint_ei(-x);
        for (int j = 1; j < count; ++j)
            out[j] = (1.0 - x * out[j - 1]) / j;
        return out;
    }
    // Anchor near j = x: backward recurrence is stable below it, forward above.
    const int anchor = std::min(count - 1, static_cast<int>(std::floor(x)));
    out[anchor] = anchor == 0 ? -std::exp(x) * expint_ei(-x) : expint_fraction(anchor + 1, x);
    for (int j = anchor; j >= 1; --j)
        out[j - 1] = (1.0 - j * out[j]) / x;
    for (int j = anchor + 1; j < count; ++j)
        out[j] = (1.0 - x * out[j - 1]) / j;
    return out;
}

void SeriesConfig::validate() const {
    if (depth < 1)
        throw ConfigError("series.depth must be >= 1");
    if (!(prune >= 0.0))
        throw ConfigError("series.prune must be >= 0");
    if (max_depth < depth)
        throw ConfigError("series.max_depth must be >= series.depth");
    if (composition_budget == 0)
        throw ConfigError("series.composition_budget must be >= 1");
    if (!(inf_m_surrogate >= 0.0))
        throw ConfigError("series.inf_m_surrogate must be >= 0");
}

} // namespace shadowsec
