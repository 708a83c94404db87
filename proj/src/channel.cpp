// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/channel.hpp"

#include "shadowsec/errors.hpp"
#include "shadowsec/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace shadowsec {

namespace {

bool is_integer(double v) { return std::fabs(v - std::round(v)) < 1e-12 * std::max(1.0, std::fabs(v)); }

// Number of mixture components to keep given the component-mass recurrence
// ratio(e) = mass_{e+1} / mass_e.
struct MixtureExtent {
    int count = 1;
    double tail = 0.0;
    bool capped = false;
};

template <typename Ratio>
MixtureExtent mixture_extent(double log_mass0, Ratio ratio, const SeriesConfig& trunc) {
    MixtureExtent ext;
    double log_mass = log_mass0;
    const double log_prune = trunc.prune > 0.0 ? std::log(trunc.prune) : -std::numeric_limits<double>::infinity();
    for (int e = 0;; ++e) {
        const double r = ratio(e);
        const int kept = e + 1;
        if (kept >= trunc.depth && log_mass < log_prune && r < 1.0) {
            ext.count = kept;
            ext.tail = std::exp(log_mass) * r / (1.0 - r);
            return ext;
        }
        if (kept >= trunc.max_depth) {
            ext.count = kept;
            ext.capped = true;
            ext.tail = r < 1.0 ? std::exp(log_mass) * r / (1.0 - r) : 1.0;
            return ext;
        }
        log_mass += std::log(r);
    }
}

SeriesConfig exact_terms(int count) {
    SeriesConfig cfg;
    cfg.depth = count;
    cfg.max_depth = count;
    cfg.prune = std::numeric_limits<double>::infinity();
    return cfg;
}

} // namespace

void FadingParams::validate() const {
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw ConfigError("kappa must be a finite value >= 0");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw ConfigError("mu must be a finite value > 0");
    if (!(m > 0.0))
        throw ConfigError("m must be > 0 or infinite");
    if (!(avg_snr > 0.0) || !std::isfinite(avg_snr))
        throw ConfigError("average SNR must be a finite value > 0");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

bool HopCoefficients::integer_shape() const { return is_integer(shape_base); }

int HopCoefficients::integer_shape_base() const {
    if (!integer_shape())
        throw ShapeIntegralityError("closed-form path needs an integer shape (antennas * mu), got " +
                                    std::to_string(shape_base) + "; use the quadrature method");
    return static_cast<int>(std::lround(shape_base));
}

HopCoefficients hop_coefficients(const FadingParams& p, int antennas, const SeriesConfig& trunc) {
    p.validate();
    trunc.validate();
    if (antennas < 1)
        throw ConfigError("antenna count must be >= 1");

    HopCoefficients c;
    c.antennas = antennas;
    c.kappa = p.kappa;
    const double g = antennas;
    const double mu_g = g * p.mu;
    double m = p.m;
    if (std::isinf(m) && trunc.inf_m_surrogate > 0.0 && p.kappa > 0.0) {
        m = trunc.inf_m_surrogate;
        c.surrogate_used = true;
        c.warnings.push_back("infinite m replaced by surrogate m=" + std::to_string(m));
    }
    const double m_g = g * m;
    c.shape_base = mu_g;
    c.shadowing = m_g;
    c.rate = mu_g * (1.0 + p.kappa) / p.avg_snr;
    const double log_rate = std::log(c.rate);

    if (p.kappa == 0.0) {
        // Single Gamma(mu', rate) component; the shadowing factor cancels.
        c.mixture_rate = 0.0;
        c.shadowing_limit = std::isinf(m_g);
        c.c1 = LogNum::from_log(mu_g * log_rate - ln_gamma(mu_g));
        c.term_weights = {c.c1};
        c.mixture_masses = {1.0};
        c.ln_gamma_next = {ln_gamma(mu_g + 1.0)};
        return c;
    }

    SeriesResult series;
    MixtureExtent ext;
    if (std::isinf(m_g)) {
        c.shadowing_limit = true;
        const double poisson_mean = mu_g * p.kappa;
        c.mixture_rate = poisson_mean * c.rate;
        c.c1 = LogNum::from_log(mu_g * log_rate - ln_gamma(mu_g) - poisson_mean);
        ext = mixture_extent(-poisson_mean, [poisson_mean](int e) { return poisson_mean / (e + 1.0); }, trunc);
        series = hyp0f1_series(mu_g, c.mixture_rate, exact_terms(ext.count));
    } else {
        const double denom = mu_g * p.kappa + m_g;
        const double nb_p = mu_g * p.kappa / denom;
        c.mixture_rate = mu_g * mu_g * p.kappa * (1.0 + p.kappa) / (denom * p.avg_snr);
        c.c1 = LogNum::from_log(mu_g * std::log(mu_g) + m_g * std::log(m_g) + mu_g * std::log1p(p.kappa) -
                                ln_gamma(mu_g) - mu_g * std::log(p.avg_snr) - m_g * std::log(denom));
        ext = mixture_extent(m_g * std::log(m_g / denom),
                             [m_g, nb_p](int e) { return (m_g + e) * nb_p / (e + 1.0); }, trunc);
        series = kummer_1f1_series(m_g, mu_g, c.mixture_rate, exact_terms(ext.count));
    }
    if (ext.capped)
        c.warnings.push_back("mixture series reached max_depth=" + std::to_string(trunc.max_depth));
    c.tail_mass = ext.tail;

    c.term_weights.reserve(series.terms.size());
    c.mixture_masses.reserve(series.terms.size());
    for (std::size_t e = 0; e < series.terms.size(); ++e) {
        const LogNum w = c.c1 * series.terms[e];
        const double shape = mu_g + static_cast<double>(e);
        c.term_weights.push_back(w);
        c.mixture_masses.push_back(static_cast<double>(std::exp(w.log_magnitude + ln_gamma(shape) - shape * log_rate)));
        c.ln_gamma_next.push_back(ln_gamma(shape + 1.0));
    }
    return c;
}

double hop_pdf(const HopCoefficients& c, double snr) {
    if (!(snr >= 0.0))
        throw DomainError("hop_pdf requires snr >= 0");
    if (snr == 0.0) {
        if (c.shape_base < 1.0)
            return std::numeric_limits<double>::infinity();
        return c.shape_base == 1.0 ? c.term_weights.front().to_double() : 0.0;
    }
    const double log_x = std::log(snr);
    double sum = 0.0;
    for (std::size_t e = 0; e < c.term_weights.size(); ++e) {
        const double power = c.shape_base - 1.0 + static_cast<double>(e);
        sum += std::exp(static_cast<double>(c.term_weights[e].log_magnitude) + power * log_x - c.rate * snr);
    }
    return sum;
}

double hop_pdf_direct(const HopCoefficients& c, double snr, const SeriesConfig& trunc) {
    if (!(snr >= 0.0))
        throw DomainError("hop_pdf_direct requires snr >= 0");
    if (snr == 0.0)
        return hop_pdf(c, 0.0);
    const double z = c.mixture_rate * snr;
    LogNum hyper = LogNum::one();
    if (c.mixture_rate > 0.0) {
        hyper = c.shadowing_limit ? hyp0f1_series(c.shape_base, z, trunc).value
                                  : kummer_1f1_series(c.shadowing, c.shape_base, z, trunc).value;
    }
    const double log_v = c.c1.log_magnitude - c.rate * snr + (c.shape_base - 1.0) * std::log(snr) + hyper.log_magnitude;
    return std::exp(log_v);
}

double hop_ccdf(const HopCoefficients& c, double snr) {
    if (!(snr >= 0.0))
        throw DomainError("hop_ccdf requires snr >= 0");
    if (snr == 0.0) {
        double total = 0.0;
        for (double w : c.mixture_masses)
            total += w;
        return std::min(1.0, total);
    }
    const double x = c.rate * snr;
    const double log_x = std::log(x);
    double q = regularized_upper_gamma(c.shape_base, x);
    double sum = 0.0;
    for (std::size_t e = 0; e < c.mixture_masses.size(); ++e) {
        sum += c.mixture_masses[e] * q;
        // Q(a + 1, x) = Q(a, x) + x^a e^{-x} / Gamma(a + 1)
        const double a = c.shape_base + static_cast<double>(e);
        q += std::exp(a * log_x - x - c.ln_gamma_next[e]);
    }
    return std::clamp(sum, 0.0, 1.0);
}

double hop_cdf(const HopCoefficients& c, double snr) {
    if (!(snr >= 0.0))
        throw DomainError("hop_cdf requires snr >= 0");
    if (snr == 0.0 || c.mixture_masses.empty())
        return 0.0;
    const double x = c.rate * snr;
    const double log_x = std::log(x);
    // P(a, x) = P(a + 1, x) + x^a e^{-x} / Gamma(a + 1), run downward from the last component.
    const std::size_t n = c.mixture_masses.size();
    double p = regularized_lower_gamma(c.shape_base + static_cast<double>(n - 1), x);
    double sum = c.mixture_masses[n - 1] * p;
    for (std::size_t e = n - 1; e-- > 0;) {
        const double a = c.shape_base + static_cast<double>(e);
        p += std::exp(a * log_x - x - c.ln_gamma_next[e]);
        sum += c.mixture_masses[e] * p;
    }
    // Past the median the survival is the small side.
    if (sum > 0.5)
        return 1.0 - hop_ccdf(c, snr);
    return std::clamp(sum, 0.0, 1.0);
}

double hop_mean(const HopCoefficients& c) {
    double mean = 0.0;
    for (std::size_t e = 0; e < c.mixture_masses.size(); ++e)
        mean += c.mixture_masses[e] * (c.shape_base + static_cast<double>(e)) / c.rate;
    return mean;
}

} // namespace shadowsec
