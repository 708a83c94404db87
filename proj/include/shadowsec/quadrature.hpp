// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace shadowsec {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

struct QuadratureOptions {
    double abs_tol = 1e-6;   // acceptance threshold on the error estimate
    double rel_tol = 1e-11;  // refinement target passed to the adaptive rule
    unsigned max_depth = 30;
};

// Global adaptive Gauss-Kronrod (61-point) on [a, b]. Throws NumericalError when the
// error estimate stays above max(abs_tol, rel_tol * |value|).
QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts = {});

// Integral over [0, inf) via x = scale * t / (1 - t) on [0, 1).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double scale,
                                         const QuadratureOptions& opts = {});

} // namespace shadowsec
