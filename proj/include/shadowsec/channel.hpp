// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shadowsec/lognum.hpp"
#include "shadowsec/series_config.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace shadowsec {

inline constexpr double kInfiniteShadowing = std::numeric_limits<double>::infinity();

// kappa-mu shadowed shape triple plus linear average SNR of one link.
struct FadingParams {
    double kappa = 0.0;
    double mu = 1.0;
    double m = kInfiniteShadowing;
    double avg_snr = 1.0;

    [[nodiscard]] bool infinite_shadowing() const { return std::isinf(m); }
    void validate() const;
};

double db_to_linear(double db);
double linear_to_db(double linear);

// Closed-form ingredients of one hop density
//   f(x) = c1 e^{-rate x} x^{shape_base-1} 1F1(m', shape_base; mixture_rate x)
//        = sum_e term_weights[e] x^{shape_base-1+e} e^{-rate x}.
// mixture_masses[e] is the probability mass of the e-th Gamma(shape_base+e, rate)
// component; rate = shape_base (1 + kappa) / avg_snr.
struct HopCoefficients {
    LogNum c1;
    double rate = 1.0;
    double shape_base = 1.0;
    double shadowing = kInfiniteShadowing; // antenna-scaled m actually used
    double mixture_rate = 0.0;
    double kappa = 0.0;
    int antennas = 1;
    std::vector<LogNum> term_weights;
    std::vector<double> mixture_masses;
    std::vector<double> ln_gamma_next; // ln Gamma(shape_base + e + 1)
    double tail_mass = 0.0;          // estimated mass of the discarded components
    bool shadowing_limit = false;    // m = inf handled by the exact limit (0F1 form)
    bool surrogate_used = false;     // m = inf replaced by SeriesConfig::inf_m_surrogate
    std::vector<std::string> warnings;

    [[nodiscard]] std::size_t size() const { return term_weights.size(); }
    [[nodiscard]] bool integer_shape() const;
    [[nodiscard]] int integer_shape_base() const; // throws ShapeIntegralityError
};

// mu and m are both multiplied by `antennas` before the coefficients are formed.
HopCoefficients hop_coefficients(const FadingParams& p, int antennas, const SeriesConfig& trunc);

// Density via the truncated Gamma-mixture series.
double hop_pdf(const HopCoefficients& c, double snr);

// Density via the hypergeometric form (1F1, or 0F1 in the m = inf limit).
double hop_pdf_direct(const HopCoefficients& c, double snr, const SeriesConfig& trunc = {});

// Pr(SNR > snr) as sum_e mass_e Q(shape_base + e, rate snr), clamped to [0, 1].
double hop_ccdf(const HopCoefficients& c, double snr);

// Pr(SNR <= snr) as sum_e mass_e P(shape_base + e, rate snr); keeps relative accuracy in the lower tail.
double hop_cdf(const HopCoefficients& c, double snr);

// Mean of the truncated series density.
double hop_mean(const HopCoefficients& c);

} // namespace shadowsec
