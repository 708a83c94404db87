// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/dualhop.hpp"

#include "shadowsec/errors.hpp"
#include "shadowsec/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace shadowsec {

void NetworkConfig::validate() const {
    if (relays < 1)
        throw ConfigError("relays must be >= 1");
    if (receivers < 1)
        throw ConfigError("receivers must be >= 1");
    if (eavesdroppers < 1)
        throw ConfigError("eavesdroppers must be >= 1");
    if (antennas_rx < 1)
        throw ConfigError("antennas_rx must be >= 1");
    if (antennas_eve < 1)
        throw ConfigError("antennas_eve must be >= 1");
    hop_sp.validate();
    hop_pq.validate();
    hop_pw.validate();
}

DualHopDist make_dualhop(const FadingParams& first, const FadingParams& second, int second_antennas, int relays,
                         const SeriesConfig& trunc) {
    if (relays < 1)
        throw ConfigError("relays must be >= 1");
    return DualHopDist{hop_coefficients(first, 1, trunc), hop_coefficients(second, second_antennas, trunc), relays};
}

DualHopDist receiver_link(const NetworkConfig& net, const SeriesConfig& trunc) {
    net.validate();
    return make_dualhop(net.hop_sp, net.hop_pq, net.antennas_rx, net.relays, trunc);
}

DualHopDist eavesdropper_link(const NetworkConfig& net, const SeriesConfig& trunc) {
    net.validate();
    return make_dualhop(net.hop_sp, net.hop_pw, net.antennas_eve, net.relays, trunc);
}

double dualhop_ccdf(const DualHopDist& d, double snr) { return hop_ccdf(d.first_hop, snr) * hop_ccdf(d.second_hop, snr); }

double dualhop_cdf(const DualHopDist& d, double snr) {
    const double a = hop_cdf(d.first_hop, snr);
    const double b = hop_cdf(d.second_hop, snr);
    return std::min(1.0, a + b - a * b);
}

double dualhop_pdf(const DualHopDist& d, double snr) {
    return hop_pdf(d.first_hop, snr) * hop_ccdf(d.second_hop, snr) +
           hop_pdf(d.second_hop, snr) * hop_ccdf(d.first_hop, snr);
}

double dualhop_cdf_series(const DualHopDist& d, double snr) {
    if (!(snr >= 0.0))
        throw DomainError("dualhop_cdf_series requires snr >= 0");
    const HopCoefficients& a = d.first_hop;
    const HopCoefficients& b = d.second_hop;
    std::vector<double> qa(a.size());
    std::vector<double> qb(b.size());
    for (std::size_t e = 0; e < a.size(); ++e)
        qa[e] = regularized_upper_gamma(a.shape_base + static_cast<double>(e), a.rate * snr);
    for (std::size_t e = 0; e < b.size(); ++e)
        qb[e] = regularized_upper_gamma(b.shape_base + static_cast<double>(e), b.rate * snr);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            sum += a.mixture_masses[i] * b.mixture_masses[j] * qa[i] * qb[j];
    return 1.0 - sum;
}

BestRelayPoint bestrelay_point(const DualHopDist& d, double snr) {
    const double c1 = hop_ccdf(d.first_hop, snr);
    const double c2 = hop_ccdf(d.second_hop, snr);
    const double h = c1 * c2;
    const double f = hop_pdf(d.first_hop, snr) * c2 + hop_pdf(d.second_hop, snr) * c1;
    const double p = d.relays;
    BestRelayPoint out;
    const double single = h < 0.5 ? 1.0 - h : dualhop_cdf(d, snr);
    if (single <= 0.0) {
        out.cdf = 0.0;
        out.ccdf = 1.0;
        out.pdf = d.relays == 1 ? f : 0.0;
        return out;
    }
    const double log_f = h < 0.5 ? std::log1p(-h) : std::log(single);
    out.cdf = std::exp(p * log_f);
    out.ccdf = -std::expm1(p * log_f);
    out.pdf = d.relays == 1 ? f : p * f * std::exp((p - 1.0) * log_f);
    return out;
}

double bestrelay_cdf(const DualHopDist& d, double snr) { return bestrelay_point(d, snr).cdf; }
double bestrelay_ccdf(const DualHopDist& d, double snr) { return bestrelay_point(d, snr).ccdf; }
double bestrelay_pdf(const DualHopDist& d, double snr) { return bestrelay_point(d, snr).pdf; }

} // namespace shadowsec
