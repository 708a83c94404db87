// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shadowsec/channel.hpp"
#include "shadowsec/network.hpp"

namespace shadowsec {

// Min of two independent hops, with best-of-P relay selection on top.
struct DualHopDist {
    HopCoefficients first_hop;
    HopCoefficients second_hop;
    int relays = 1;
};

DualHopDist make_dualhop(const FadingParams& first, const FadingParams& second, int second_antennas, int relays,
                         const SeriesConfig& trunc);

// Source -> best relay -> receiver branch.
DualHopDist receiver_link(const NetworkConfig& net, const SeriesConfig& trunc);
// Source -> best relay -> eavesdropper branch; the relay maximizes the eavesdropper's own min-SNR.
DualHopDist eavesdropper_link(const NetworkConfig& net, const SeriesConfig& trunc);

// Single-relay law: Pr(min(X1, X2) > snr) and its complement.
double dualhop_ccdf(const DualHopDist& d, double snr);
double dualhop_cdf(const DualHopDist& d, double snr);
double dualhop_pdf(const DualHopDist& d, double snr);

// The same CDF written as the double sum over both mixture indices of
// mass products times regularized upper gamma pairs.
double dualhop_cdf_series(const DualHopDist& d, double snr);

// Best-relay law, F* = F^P.
double bestrelay_cdf(const DualHopDist& d, double snr);
double bestrelay_ccdf(const DualHopDist& d, double snr);
double bestrelay_pdf(const DualHopDist& d, double snr);

// Pointwise evaluation of everything above at one snr.
struct BestRelayPoint {
    double cdf = 0.0;
    double ccdf = 1.0;
    double pdf = 0.0;
};
BestRelayPoint bestrelay_point(const DualHopDist& d, double snr);

} // namespace shadowsec
