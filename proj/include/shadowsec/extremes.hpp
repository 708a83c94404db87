// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shadowsec/dualhop.hpp"
#include "shadowsec/lognum.hpp"
#include "shadowsec/series_config.hpp"

#include <string>
#include <vector>

namespace shadowsec {

struct ExpoPolyTerm {
    LogNum coeff;
    int power = 0;
    double rate = 1.0;
};

// Components Gamma(k + 1, rate) sharing one rate; masses[k] is the (signed)
// probability mass carried by the k-th component.
struct RateGroup {
    double rate = 1.0;
    std::vector<double> masses;
};

// sum_i coeff_i x^{power_i} e^{-rate_i x}
struct ExpoPolySum {
    std::vector<ExpoPolyTerm> terms;
    double tail_estimate = 0.0; // bound on the mass lost to truncation and pruning
    std::vector<std::string> warnings;

    [[nodiscard]] double evaluate(double x) const;
    [[nodiscard]] double total_mass() const;
    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] std::vector<RateGroup> rate_groups() const;
};

// Weights w_n of f H^n in the expansion of the min-over-Q (side = receivers)
// or max-over-W density, where H is the single-relay dual-hop survival and f
// its density.
std::vector<double> min_order_weights(int relays, int receivers);
std::vector<double> max_order_weights(int relays, int eavesdroppers);

// Density of min over Q i.i.d. best-relay receiver SNRs as an ExpoPolySum.
// Requires integer shapes on both hops (ShapeIntegralityError otherwise).
ExpoPolySum min_snr_pdf(const DualHopDist& d, int receivers, const SeriesConfig& trunc);
// Density of max over W i.i.d. best-relay eavesdropper SNRs.
ExpoPolySum max_snr_pdf(const DualHopDist& d, int eavesdroppers, const SeriesConfig& trunc);

// Pointwise forms built directly on the dual-hop primitives.
double min_snr_pdf_direct(const DualHopDist& d, int receivers, double snr);
double min_snr_ccdf_direct(const DualHopDist& d, int receivers, double snr);
double min_snr_cdf_direct(const DualHopDist& d, int receivers, double snr);
double max_snr_pdf_direct(const DualHopDist& d, int eavesdroppers, double snr);
double max_snr_cdf_direct(const DualHopDist& d, int eavesdroppers, double snr);

} // namespace shadowsec
