// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/extremes.hpp"

#include "shadowsec/compositions.hpp"
#include "shadowsec/errors.hpp"
#include "shadowsec/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace shadowsec {

namespace {

// sum_k coef[k] Pois(k; rate x), Pois(k; y) = y^k e^{-y} / k!
struct PoissonPoly {
    double rate = 1.0;
    std::vector<double> coef;
};

long double exact_binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0.0L;
    return std::round(std::exp(static_cast<long double>(ln_binomial(n, k))));
}

// Drops coefficients below prune * max|coef| and returns the dropped mass.
double prune_poly(PoissonPoly& p, double prune) {
    double peak = 0.0;
    for (double v : p.coef)
        peak = std::max(peak, std::fabs(v));
    double dropped = 0.0;
    const double cut = prune * peak;
    for (double& v : p.coef) {
        if (v != 0.0 && std::fabs(v) < cut) {
            dropped += std::fabs(v);
            v = 0.0;
        }
    }
    while (p.coef.size() > 1 && p.coef.back() == 0.0)
        p.coef.pop_back();
    return dropped / p.rate;
}

// Pois(a; R1 x) Pois(b; R2 x) = Pois(a + b; (R1 + R2) x) Binom(a; a + b, R1 / (R1 + R2))
PoissonPoly poisson_product(const PoissonPoly& x, const PoissonPoly& y) {
    PoissonPoly z;
    z.rate = x.rate + y.rate;
    z.coef.assign(x.coef.size() + y.coef.size() - 1, 0.0);
    const double lp = std::log(x.rate / z.rate);
    const double lq = std::log(y.rate / z.rate);
    std::vector<double> lf(z.coef.size());
    for (std::size_t k = 0; k < lf.size(); ++k)
        lf[k] = ln_factorial(static_cast<int>(k));
    for (std::size_t a = 0; a < x.coef.size(); ++a) {
        if (x.coef[a] == 0.0)
            continue;
        const double base = -lf[a] + static_cast<double>(a) * lp;
        for (std::size_t b = 0; b < y.coef.size(); ++b) {
            if (y.coef[b] == 0.0)
                continue;
            z.coef[a + b] += x.coef[a] * y.coef[b] * std::exp(lf[a + b] + base - lf[b] + static_cast<double>(b) * lq);
        }
    }
    return z;
}

// Hop ccdf and pdf in the Poisson basis of the hop rate (integer shape n):
//   ccdf = sum_k u_k Pois(k; r x), u_k = sum_{e >= k - n + 1} c_e
//   pdf  = sum_j v_j Pois(j; r x), v_j = r c_{j - n + 1}
void hop_poisson_basis(const HopCoefficients& h, PoissonPoly& ccdf, PoissonPoly& pdf) {
    const int n = h.integer_shape_base();
    const std::size_t len = static_cast<std::size_t>(n) + h.size() - 1;
    ccdf.rate = pdf.rate = h.rate;
    ccdf.coef.assign(len, 0.0);
    pdf.coef.assign(len, 0.0);
    std::vector<double> suffix(h.size() + 1, 0.0);
    for (std::size_t e = h.size(); e-- > 0;)
        suffix[e] = suffix[e + 1] + h.mixture_masses[e];
    for (std::size_t k = 0; k < len; ++k) {
        const std::size_t first = k + 1 > static_cast<std::size_t>(n) ? k + 1 - static_cast<std::size_t>(n) : 0;
        ccdf.coef[k] = suffix[first];
    }
    for (std::size_t e = 0; e < h.size(); ++e)
        pdf.coef[static_cast<std::size_t>(n) - 1 + e] = h.rate * h.mixture_masses[e];
}

PoissonPoly add_same_rate(PoissonPoly a, const PoissonPoly& b) {
    if (b.coef.size() > a.coef.size())
        a.coef.resize(b.coef.size(), 0.0);
    for (std::size_t k = 0; k < b.coef.size(); ++k)
        a.coef[k] += b.coef[k];
    return a;
}

void append_terms(ExpoPolySum& out, const PoissonPoly& p, double weight) {
    const double log_rate = std::log(p.rate);
    for (std::size_t k = 0; k < p.coef.size(); ++k) {
        const double c = weight * p.coef[k];
        if (c == 0.0)
            continue;
        const LogNum coeff(std::log(std::fabs(c)) + static_cast<double>(k) * log_rate - ln_factorial(static_cast<int>(k)),
                           c > 0.0 ? 1 : -1);
        out.terms.push_back({coeff, static_cast<int>(k), p.rate});
    }
}

ExpoPolySum expand_grouped(const DualHopDist& d, const std::vector<double>& weights, const SeriesConfig& trunc) {
    PoissonPoly u1, v1, u2, v2;
    hop_poisson_basis(d.first_hop, u1, v1);
    hop_poisson_basis(d.second_hop, u2, v2);

    ExpoPolySum out;
    double pruned = 0.0;
    PoissonPoly h = poisson_product(u1, u2);
    PoissonPoly f = add_same_rate(poisson_product(v1, u2), poisson_product(u1, v2));
    prune_poly(h, trunc.prune);
    const double f_pruned = prune_poly(f, trunc.prune);

    const double hop_tail = d.first_hop.tail_mass + d.second_hop.tail_mass;
    PoissonPoly h_pow;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        PoissonPoly group;
        double group_pruned = f_pruned;
        if (n == 0) {
            group = f;
        } else {
            h_pow = n == 1 ? h : poisson_product(h_pow, h);
            group_pruned += prune_poly(h_pow, trunc.prune);
            group = poisson_product(f, h_pow);
            group_pruned += prune_poly(group, trunc.prune);
        }
        const double w = weights[n];
        if (w == 0.0)
            continue;
        append_terms(out, group, w);
        pruned += std::fabs(w) * (group_pruned + static_cast<double>(n + 1) * hop_tail);
    }
    out.tail_estimate = pruned;
    return out;
}

ExpoPolySum expand_enumerated(const DualHopDist& d, const std::vector<double>& weights, const SeriesConfig& trunc) {
    const HopCoefficients& a = d.first_hop;
    const HopCoefficients& b = d.second_hop;
    const int n1 = a.integer_shape_base();
    const int n2 = b.integer_shape_base();
    const double s = a.rate + b.rate;
    const double la = std::log(a.rate);
    const double lb = std::log(b.rate);

    // Cells (e1, e2, k1, k2) of H = ccdf1 ccdf2 = sum Omega x^{k1+k2} e^{-s x}.
    std::vector<BaseTerm> cells;
    std::vector<double> magnitude;
    for (std::size_t e1 = 0; e1 < a.size(); ++e1)
        for (std::size_t e2 = 0; e2 < b.size(); ++e2)
            for (int k1 = 0; k1 < n1 + static_cast<int>(e1); ++k1)
                for (int k2 = 0; k2 < n2 + static_cast<int>(e2); ++k2) {
                    const double lw = std::log(a.mixture_masses[e1]) + std::log(b.mixture_masses[e2]) + k1 * la +
                                      k2 * lb - ln_factorial(k1) - ln_factorial(k2);
                    cells.push_back({LogNum::from_log(lw), k1 + k2});
                    magnitude.push_back(lw + ln_factorial(k1 + k2) - (k1 + k2) * std::log(s));
                }
    const double peak = *std::max_element(magnitude.begin(), magnitude.end());
    const double cut = trunc.prune > 0.0 ? peak + std::log(trunc.prune) : -std::numeric_limits<double>::infinity();
    std::vector<BaseTerm> kept;
    double dropped = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (magnitude[i] >= cut)
            kept.push_back(cells[i]);
        else
            dropped += std::exp(magnitude[i]);
    }

    std::uint64_t needed = 0;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        const std::uint64_t c = composition_count(static_cast<int>(kept.size()), static_cast<int>(n));
        needed = c > trunc.composition_budget - std::min(needed, trunc.composition_budget) ? trunc.composition_budget + 1
                                                                                            : needed + c;
    }
    if (needed > trunc.composition_budget)
        throw BudgetExceededError("composition expansion over " + std::to_string(kept.size()) + " cells needs more than " +
                                  std::to_string(trunc.composition_budget) +
                                  " terms; raise prune, lower the series depth or use the grouped strategy");

    // f = pdf1 ccdf2 + pdf2 ccdf1 as power -> weight at rate s.
    std::map<int, LogAccumulator> f_acc;
    auto add_density_side = [&](const HopCoefficients& p, int np, double lp, const HopCoefficients& q, int nq, double lq) {
        for (std::size_t ep = 0; ep < p.size(); ++ep) {
            const int dp = np + static_cast<int>(ep) - 1;
            const double lpdf = std::log(p.mixture_masses[ep]) + (dp + 1) * lp - ln_factorial(dp);
            for (std::size_t eq = 0; eq < q.size(); ++eq)
                for (int k = 0; k < nq + static_cast<int>(eq); ++k)
                    f_acc[dp + k].add(LogNum::from_log(lpdf + std::log(q.mixture_masses[eq]) + k * lq - ln_factorial(k)));
        }
    };
    add_density_side(a, n1, la, b, n2, lb);
    add_density_side(b, n2, lb, a, n1, la);

    ExpoPolySum out;
    const double hop_tail = a.tail_mass + b.tail_mass;
    double tail = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        const double w = weights[n];
        tail += std::fabs(w) * static_cast<double>(n + 1) * (hop_tail + dropped);
        if (w == 0.0)
            continue;
        const auto h_pow = multinomial_power(kept, static_cast<int>(n), trunc.composition_budget);
        std::map<int, LogAccumulator> group;
        for (const auto& [pf, af] : f_acc) {
            const LogNum fw = af.total();
            for (const auto& [ph, hw] : h_pow)
                group[pf + ph].add(fw * hw);
        }
        const double rate = static_cast<double>(n + 1) * s;
        for (const auto& [power, acc] : group) {
            LogNum c = acc.total() * LogNum::from_double(w);
            if (!c.is_zero())
                out.terms.push_back({c, power, rate});
        }
    }
    out.tail_estimate = tail;
    return out;
}

ExpoPolySum expand(const DualHopDist& d, const std::vector<double>& weights, const SeriesConfig& trunc) {
    trunc.validate();
    static_cast<void>(d.first_hop.integer_shape_base());
    static_cast<void>(d.second_hop.integer_shape_base());
    ExpoPolySum out = trunc.expansion == ExpansionStrategy::enumerate ? expand_enumerated(d, weights, trunc)
                                                                      : expand_grouped(d, weights, trunc);
    for (const auto* h : {&d.first_hop, &d.second_hop})
        out.warnings.insert(out.warnings.end(), h->warnings.begin(), h->warnings.end());
    return out;
}

} // namespace

double ExpoPolySum::evaluate(double x) const {
    if (!(x >= 0.0))
        throw DomainError("ExpoPolySum::evaluate requires x >= 0");
    double pos = 0.0;
    double neg = 0.0;
    const double lx = x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) {
        double v;
        if (t.power == 0)
            v = std::exp(static_cast<double>(t.coeff.log_magnitude) - t.rate * x);
        else if (x == 0.0)
            v = 0.0;
        else
            v = std::exp(static_cast<double>(t.coeff.log_magnitude) + t.power * lx - t.rate * x);
        (t.coeff.sign > 0 ? pos : neg) += v;
    }
    return pos - neg;
}

double ExpoPolySum::total_mass() const {
    double pos = 0.0;
    double neg = 0.0;
    for (const auto& t : terms) {
        const double v = std::exp(t.coeff.log_magnitude + ln_factorial(t.power) - (t.power + 1) * std::log(t.rate));
        (t.coeff.sign > 0 ? pos : neg) += v;
    }
    return pos - neg;
}

double ExpoPolySum::cdf(double x) const {
    if (!(x >= 0.0))
        throw DomainError("ExpoPolySum::cdf requires x >= 0");
    double pos = 0.0;
    double neg = 0.0;
    for (const auto& t : terms) {
        const double mass = std::exp(t.coeff.log_magnitude + ln_factorial(t.power) - (t.power + 1) * std::log(t.rate));
        const double v = mass * regularized_lower_gamma(t.power + 1.0, t.rate * x);
        (t.coeff.sign > 0 ? pos : neg) += v;
    }
    return pos - neg;
}

std::vector<RateGroup> ExpoPolySum::rate_groups() const {
    std::vector<const ExpoPolyTerm*> sorted;
    sorted.reserve(terms.size());
    for (const auto& t : terms)
        sorted.push_back(&t);
    std::stable_sort(sorted.begin(), sorted.end(), [](const ExpoPolyTerm* a, const ExpoPolyTerm* b) { return a->rate < b->rate; });
    std::vector<RateGroup> groups;
    for (const ExpoPolyTerm* t : sorted) {
        if (groups.empty() || std::fabs(t->rate - groups.back().rate) > 1e-12 * groups.back().rate)
            groups.push_back({t->rate, {}});
        RateGroup& g = groups.back();
        if (static_cast<std::size_t>(t->power) >= g.masses.size())
            g.masses.resize(static_cast<std::size_t>(t->power) + 1, 0.0);
        g.masses[static_cast<std::size_t>(t->power)] +=
            t->coeff.sign * std::exp(t->coeff.log_magnitude + ln_factorial(t->power) - (t->power + 1) * std::log(g.rate));
    }
    return groups;
}

std::vector<double> min_order_weights(int relays, int receivers) {
    if (relays < 1 || receivers < 1)
        throw DomainError("order weights need relays >= 1 and receivers >= 1");
    // Q f* (1 - F*)^{Q-1} with F* = (1 - H)^P, expanded in powers of H.
    const int count = relays * receivers;
    std::vector<long double> w(static_cast<std::size_t>(count), 0.0L);
    for (int e8 = 0; e8 < receivers; ++e8) {
        const long double outer = exact_binomial(receivers - 1, e8) * (e8 % 2 == 0 ? 1.0L : -1.0L);
        const int top = relays * (e8 + 1) - 1;
        for (int n = 0; n <= top; ++n)
            w[static_cast<std::size_t>(n)] += outer * exact_binomial(top, n) * (n % 2 == 0 ? 1.0L : -1.0L);
    }
    std::vector<double> out(w.size());
    for (std::size_t n = 0; n < w.size(); ++n)
        out[n] = static_cast<double>(static_cast<long double>(count) * w[n]);
    return out;
}

std::vector<double> max_order_weights(int relays, int eavesdroppers) {
    if (relays < 1 || eavesdroppers < 1)
        throw DomainError("order weights need relays >= 1 and eavesdroppers >= 1");
    // W f* F*^{W-1} = PW f (1 - H)^{PW-1}.
    const int count = relays * eavesdroppers;
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n)
        out[static_cast<std::size_t>(n)] =
            static_cast<double>(count * exact_binomial(count - 1, n) * (n % 2 == 0 ? 1.0L : -1.0L));
    return out;
}

ExpoPolySum min_snr_pdf(const DualHopDist& d, int receivers, const SeriesConfig& trunc) {
    return expand(d, min_order_weights(d.relays, receivers), trunc);
}

ExpoPolySum max_snr_pdf(const DualHopDist& d, int eavesdroppers, const SeriesConfig& trunc) {
    return expand(d, max_order_weights(d.relays, eavesdroppers), trunc);
}

double min_snr_pdf_direct(const DualHopDist& d, int receivers, double snr) {
    const BestRelayPoint b = bestrelay_point(d, snr);
    return receivers * b.pdf * std::pow(b.ccdf, receivers - 1);
}

double min_snr_ccdf_direct(const DualHopDist& d, int receivers, double snr) {
    return std::pow(bestrelay_point(d, snr).ccdf, receivers);
}

double min_snr_cdf_direct(const DualHopDist& d, int receivers, double snr) {
    const BestRelayPoint b = bestrelay_point(d, snr);
    if (b.cdf < 0.5)
        return -std::expm1(receivers * std::log1p(-b.cdf));
    return 1.0 - std::pow(b.ccdf, receivers);
}

double max_snr_pdf_direct(const DualHopDist& d, int eavesdroppers, double snr) {
    const BestRelayPoint b = bestrelay_point(d, snr);
    return eavesdroppers * b.pdf * std::pow(b.cdf, eavesdroppers - 1);
}

double max_snr_cdf_direct(const DualHopDist& d, int eavesdroppers, double snr) {
    return std::pow(bestrelay_point(d, snr).cdf, eavesdroppers);
}

} // namespace shadowsec
