// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shadowsec/extremes.hpp"
#include "shadowsec/montecarlo.hpp"
#include "shadowsec/network.hpp"
#include "shadowsec/quadrature.hpp"
#include "shadowsec/series_config.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace shadowsec {

enum class Method { closed_form, quadrature, monte_carlo };
enum class Metric { pnsmc, sopm, esmc };

std::string to_string(Method m);
std::string to_string(Metric m);
Method method_from_string(const std::string& s);
Metric metric_from_string(const std::string& s);

struct MetricResult {
    Metric metric = Metric::pnsmc;
    Method method = Method::quadrature;
    double value = 0.0;
    double value_positive = 0.0; // max(value, 0)
    // pnsmc and sopm: 1 - value, evaluated directly when it is the small side.
    double complement = 0.0;
    std::uint64_t terms_used = 0;
    // Closed form: bound on the discarded series. Quadrature: error estimate.
    // Monte Carlo: standard error.
    double tail_estimate = 0.0;
    std::vector<std::string> warnings;
};

struct EvalOptions {
    SeriesConfig series;
    QuadratureOptions quadrature;
    SimPlan simulation; // net is overwritten by the network being evaluated
};

// Pr(C > 0) with C = log2((1 + lmin) / (1 + lmax)).
MetricResult pnsmc(const NetworkConfig& net, Method method, const EvalOptions& opts = {});
// Pr(C < target_rate).
MetricResult sopm(const NetworkConfig& net, double target_rate, Method method, const EvalOptions& opts = {});
// E[C] in bits/s/Hz, signed.
MetricResult esmc(const NetworkConfig& net, Method method, const EvalOptions& opts = {});

// Several metrics for one network and method, sharing the expansions or the
// simulated sample. target_rate is only used by sopm.
std::vector<MetricResult> evaluate_metrics(const NetworkConfig& net, std::span<const Metric> metrics, double target_rate,
                                           Method method, const EvalOptions& opts = {});

// Closed-form building blocks on prebuilt expansions.
double closed_form_exceed_probability(const ExpoPolySum& min_pdf, const ExpoPolySum& max_pdf, double offset,
                                      double slope); // Pr(lmin > offset + slope lmax)
double closed_form_log_moment(const ExpoPolySum& pdf);  // E[log2(1 + X)]

} // namespace shadowsec
