// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shadowsec/lognum.hpp"
#include "shadowsec/series_config.hpp"

#include <string>
#include <vector>

namespace shadowsec {

// ln Gamma(s) for s > 0.
double ln_gamma(double s);

// ln(n!) from a cached table for small n, ln_gamma otherwise.
double ln_factorial(int n);

// ln C(n, k).
double ln_binomial(int n, int k);

// Gamma(s, x) = int_x^inf t^(s-1) e^-t dt, in log domain. Continued fraction
// for x > s + 1, lower-series complement otherwise.
LogNum upper_inc_gamma(double s, double x);

// Q(s, x) = Gamma(s, x) / Gamma(s).
double regularized_upper_gamma(double s, double x);

// P(s, x) = 1 - Q(s, x), computed without cancellation for small x.
double regularized_lower_gamma(double s, double x);

struct SeriesResult {
    LogNum value;
    std::vector<LogNum> terms;
    double tail_estimate = 0.0; // relative to |value|
    bool converged = true;
    std::vector<std::string> warnings;
};

// Truncated 1F1(a; b; z) = Gamma(b)/Gamma(a) sum_d Gamma(a+d) z^d / (Gamma(b+d) d!).
SeriesResult kummer_1f1_series(double a, double b, double z, const SeriesConfig& trunc);

// Truncated 0F1(; b; z) = Gamma(b) sum_d z^d / (Gamma(b+d) d!), the m -> inf
// limit of the shadowed series.
SeriesResult hyp0f1_series(double b, double z, const SeriesConfig& trunc);

// Exponential integral Ei(x) for x < 0.
double expint_ei(double x);

// e^x E_n(x) for x > 0 and n >= 1.
double scaled_expint_en(int n, double x);

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

} // namespace shadowsec

namespace shadowsec {

// Values e^x E_{j+1}(x) for j = 0 .. count-1, using the recurrence direction
// that is stable for the given x.
std::vector<double> scaled_expint_table(int count, double x);

} // namespace shadowsec
