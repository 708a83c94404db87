// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/metrics.hpp"

#include "shadowsec/dualhop.hpp"
#include "shadowsec/errors.hpp"
#include "shadowsec/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shadowsec {

namespace {

constexpr double kProbabilitySlack = 1e-6;

struct SignedSum {
    double pos = 0.0;
    double neg = 0.0;
    void add(double v) { (v >= 0.0 ? pos : neg) += std::fabs(v); }
    [[nodiscard]] double value() const { return pos - neg; }
};

// T_g = sum_{k >= g} masses[k]: the group's survival is sum_g T_g Pois(g; rate x).
std::vector<double> tail_masses(const std::vector<double>& masses) {
    std::vector<double> t(masses.size(), 0.0);
    double acc = 0.0;
    for (std::size_t k = masses.size(); k-- > 0;) {
        acc += masses[k];
        t[k] = acc;
    }
    return t;
}

// sum_g v[g] NB(g; l + 1, u) with NB(g; r, u) = C(g + r - 1, g) u^r (1 - u)^g,
// iterated in a rescaled linear domain.
double negative_binomial_sum(const std::vector<double>& v, std::size_t l, double u) {
    if (u >= 1.0)
        return v.empty() ? 0.0 : v[0];
    const double one_minus = 1.0 - u;
    double log_scale = static_cast<double>(l + 1) * std::log(u);
    double w = 1.0;
    double sum = 0.0;
    constexpr double big = 1e200;
    for (std::size_t g = 0; g < v.size(); ++g) {
        sum += v[g] * w;
        w *= static_cast<double>(g + l + 1) / static_cast<double>(g + 1) * one_minus;
        if (w > big) {
            w /= big;
            sum /= big;
            log_scale += std::log(big);
        }
    }
    if (sum == 0.0)
        return 0.0;
    return std::copysign(std::exp(std::log(std::fabs(sum)) + log_scale), sum);
}

double clamp_probability(double v, std::vector<std::string>& warnings) {
    if (v < -kProbabilitySlack || v > 1.0 + kProbabilitySlack)
        warnings.push_back("raw probability " + std::to_string(v) + " outside [0, 1], clamped");
    return std::clamp(v, 0.0, 1.0);
}

struct Expansions {
    ExpoPolySum min_pdf;
    ExpoPolySum max_pdf;
};

Expansions build_expansions(const NetworkConfig& net, const SeriesConfig& trunc) {
    const DualHopDist rx = receiver_link(net, trunc);
    const DualHopDist ev = eavesdropper_link(net, trunc);
    return {min_snr_pdf(rx, net.receivers, trunc), max_snr_pdf(ev, net.eavesdroppers, trunc)};
}

double max_avg_snr(const NetworkConfig& net) {
    return std::max({net.hop_sp.avg_snr, net.hop_pq.avg_snr, net.hop_pw.avg_snr});
}

MetricResult closed_form_metric(Metric metric, const Expansions& ex, const NetworkConfig& net, double target_rate) {
    MetricResult r;
    r.metric = metric;
    r.method = Method::closed_form;
    r.terms_used = ex.min_pdf.terms.size() + ex.max_pdf.terms.size();
    const double mass_tail = ex.min_pdf.tail_estimate + ex.max_pdf.tail_estimate;
    r.warnings = ex.min_pdf.warnings;
    r.warnings.insert(r.warnings.end(), ex.max_pdf.warnings.begin(), ex.max_pdf.warnings.end());
    switch (metric) {
    case Metric::pnsmc: {
        double v = closed_form_exceed_probability(ex.min_pdf, ex.max_pdf, 0.0, 1.0);
        double c = 1.0 - v;
        if (v > 0.5) {
            c = closed_form_exceed_probability(ex.max_pdf, ex.min_pdf, 0.0, 1.0);
            v = 1.0 - c;
        }
        r.value = clamp_probability(v, r.warnings);
        r.complement = std::clamp(c, 0.0, 1.0);
        r.tail_estimate = mass_tail;
        break;
    }
    case Metric::sopm: {
        const double q = std::exp2(target_rate);
        const double exceed = closed_form_exceed_probability(ex.min_pdf, ex.max_pdf, q - 1.0, q);
        r.value = clamp_probability(1.0 - exceed, r.warnings);
        r.complement = std::clamp(exceed, 0.0, 1.0);
        r.tail_estimate = mass_tail;
        break;
    }
    case Metric::esmc:
        r.value = closed_form_log_moment(ex.min_pdf) - closed_form_log_moment(ex.max_pdf);
        r.tail_estimate = mass_tail * std::log2(1.0 + 50.0 * max_avg_snr(net));
        break;
    }
    r.value_positive = std::max(r.value, 0.0);
    return r;
}

struct PointwiseModel {
    DualHopDist rx;
    DualHopDist ev;
    int receivers;
    int eavesdroppers;
    double rx_scale;
    double ev_scale;
};

PointwiseModel pointwise_model(const NetworkConfig& net, const SeriesConfig& trunc) {
    return {receiver_link(net, trunc), eavesdropper_link(net, trunc), net.receivers, net.eavesdroppers,
            std::min(net.hop_sp.avg_snr, net.hop_pq.avg_snr), std::min(net.hop_sp.avg_snr, net.hop_pw.avg_snr)};
}

MetricResult quadrature_metric(Metric metric, const PointwiseModel& m, double target_rate, const QuadratureOptions& qo) {
    MetricResult r;
    r.metric = metric;
    r.method = Method::quadrature;
    for (const auto* h : {&m.rx.first_hop, &m.rx.second_hop, &m.ev.second_hop})
        r.warnings.insert(r.warnings.end(), h->warnings.begin(), h->warnings.end());
    const auto f_min = [&](double x) { return min_snr_pdf_direct(m.rx, m.receivers, x); };
    const auto f_max = [&](double x) { return max_snr_pdf_direct(m.ev, m.eavesdroppers, x); };
    switch (metric) {
    case Metric::pnsmc: {
        // Pr(lmin > lmax) directly, or one minus Pr(lmin <= lmax) when that is the small side.
        auto q = integrate_semi_infinite(
            [&](double x) { return f_min(x) * max_snr_cdf_direct(m.ev, m.eavesdroppers, x); }, m.rx_scale, qo);
        double c = 1.0 - q.value;
        if (q.value > 0.5) {
            q = integrate_semi_infinite(
                [&](double y) { return f_max(y) * min_snr_cdf_direct(m.rx, m.receivers, y); }, m.ev_scale, qo);
            c = q.value;
            q.value = 1.0 - q.value;
        }
        r.value = clamp_probability(q.value, r.warnings);
        r.complement = std::clamp(c, 0.0, 1.0);
        r.tail_estimate = q.error;
        break;
    }
    case Metric::sopm: {
        const double q = std::exp2(target_rate);
        auto res = integrate_semi_infinite(
            [&](double y) { return f_max(y) * min_snr_cdf_direct(m.rx, m.receivers, q - 1.0 + q * y); }, m.ev_scale, qo);
        double c = 1.0 - res.value;
        if (res.value > 0.5) {
            // Pr(lmin >= q - 1 + q lmax) over lmin = q - 1 + t.
            res = integrate_semi_infinite(
                [&](double t) { return f_min(q - 1.0 + t) * max_snr_cdf_direct(m.ev, m.eavesdroppers, t / q); },
                m.rx_scale, qo);
            c = res.value;
            res.value = 1.0 - res.value;
        }
        r.value = clamp_probability(res.value, r.warnings);
        r.complement = std::clamp(c, 0.0, 1.0);
        r.tail_estimate = res.error;
        break;
    }
    case Metric::esmc: {
        const auto a = integrate_semi_infinite([&](double x) { return std::log2(1.0 + x) * f_min(x); }, m.rx_scale, qo);
        const auto b = integrate_semi_infinite([&](double x) { return std::log2(1.0 + x) * f_max(x); }, m.ev_scale, qo);
        r.value = a.value - b.value;
        r.tail_estimate = a.error + b.error;
        break;
    }
    }
    r.terms_used = 0;
    r.value_positive = std::max(r.value, 0.0);
    return r;
}

MetricResult monte_carlo_metric(Metric metric, const SimEstimates& s) {
    MetricResult r;
    r.metric = metric;
    r.method = Method::monte_carlo;
    r.terms_used = s.trials;
    r.warnings = s.warnings;
    switch (metric) {
    case Metric::pnsmc:
        r.value = s.pnsmc;
        r.complement = static_cast<double>(s.trials - s.positive_count) / static_cast<double>(s.trials);
        r.tail_estimate = s.pnsmc_stderr;
        break;
    case Metric::sopm:
        r.value = s.sopm;
        r.complement = static_cast<double>(s.trials - s.outage_count) / static_cast<double>(s.trials);
        r.tail_estimate = s.sopm_stderr;
        break;
    case Metric::esmc:
        r.value = s.esmc;
        r.tail_estimate = s.esmc_stderr;
        break;
    }
    r.value_positive = std::max(r.value, 0.0);
    return r;
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
    case Method::closed_form:
        return "closed_form";
    case Method::quadrature:
        return "quadrature";
    case Method::monte_carlo:
        return "monte_carlo";
    }
    return "?";
}

std::string to_string(Metric m) {
    switch (m) {
    case Metric::pnsmc:
        return "pnsmc";
    case Metric::sopm:
        return "sopm";
    case Metric::esmc:
        return "esmc";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "closed_form")
        return Method::closed_form;
    if (s == "quadrature")
        return Method::quadrature;
    if (s == "monte_carlo")
        return Method::monte_carlo;
    throw ConfigError("unknown method '" + s + "' (expected closed_form, quadrature or monte_carlo)");
}

Metric metric_from_string(const std::string& s) {
    if (s == "pnsmc")
        return Metric::pnsmc;
    if (s == "sopm")
        return Metric::sopm;
    if (s == "esmc")
        return Metric::esmc;
    throw ConfigError("unknown metric '" + s + "' (expected pnsmc, sopm or esmc)");
}

double closed_form_exceed_probability(const ExpoPolySum& min_pdf, const ExpoPolySum& max_pdf, double offset, double slope) {
    const auto min_groups = min_pdf.rate_groups();
    const auto max_groups = max_pdf.rate_groups();
    SignedSum total;
    for (const RateGroup& gi : min_groups) {
        const std::vector<double> t = tail_masses(gi.masses);
        // Survival at offset + slope y rewritten in powers of y:
        //   sum_g V_g Pois(g; rate slope y), V_g = sum_h T_{g+h} Pois(h; rate offset)
        std::vector<double> v = t;
        if (offset > 0.0) {
            const double mean = gi.rate * offset;
            const double log_mean = std::log(mean);
            std::vector<double> pois(t.size());
            for (std::size_t h = 0; h < t.size(); ++h)
                pois[h] = std::exp(static_cast<double>(h) * log_mean - mean - ln_factorial(static_cast<int>(h)));
            for (std::size_t g = 0; g < t.size(); ++g) {
                SignedSum acc;
                for (std::size_t h = 0; g + h < t.size(); ++h)
                    acc.add(t[g + h] * pois[h]);
                v[g] = acc.value();
            }
        }
        const double a = gi.rate * slope;
        for (const RateGroup& gj : max_groups) {
            // E over Y ~ Gamma(l + 1, sigma) of Pois(g; a Y) is NB(g; l + 1, sigma / (sigma + a)).
            const double u = gj.rate / (gj.rate + a);
            for (std::size_t l = 0; l < gj.masses.size(); ++l) {
                if (gj.masses[l] == 0.0)
                    continue;
                total.add(gj.masses[l] * negative_binomial_sum(v, l, u));
            }
        }
    }
    return total.value();
}

double closed_form_log_moment(const ExpoPolySum& pdf) {
    // E[ln(1 + X)] for X ~ Gamma(k + 1, r) is sum_{g <= k} e^r E_{g+1}(r).
    SignedSum total;
    for (const RateGroup& g : pdf.rate_groups()) {
        const std::vector<double> t = tail_masses(g.masses);
        const std::vector<double> e = scaled_expint_table(static_cast<int>(t.size()), g.rate);
        for (std::size_t k = 0; k < t.size(); ++k)
            total.add(t[k] * e[k]);
    }
    return total.value() / std::numbers::ln2;
}

std::vector<MetricResult> evaluate_metrics(const NetworkConfig& net, std::span<const Metric> metrics, double target_rate,
                                           Method method, const EvalOptions& opts) {
    net.validate();
    const bool needs_rate = std::find(metrics.begin(), metrics.end(), Metric::sopm) != metrics.end();
    if (needs_rate && !(target_rate > 0.0))
        throw ConfigError("target_rate must be > 0 for sopm");
    std::vector<MetricResult> out;
    out.reserve(metrics.size());
    switch (method) {
    case Method::closed_form: {
        const Expansions ex = build_expansions(net, opts.series);
        for (Metric m : metrics)
            out.push_back(closed_form_metric(m, ex, net, target_rate));
        break;
    }
    case Method::quadrature: {
        const PointwiseModel model = pointwise_model(net, opts.series);
        for (Metric m : metrics)
            out.push_back(quadrature_metric(m, model, target_rate, opts.quadrature));
        break;
    }
    case Method::monte_carlo: {
        SimPlan plan = opts.simulation;
        plan.net = net;
        const SimEstimates s = simulate_metrics(plan, needs_rate ? target_rate : 1.0);
        for (Metric m : metrics)
            out.push_back(monte_carlo_metric(m, s));
        break;
    }
    }
    return out;
}

MetricResult pnsmc(const NetworkConfig& net, Method method, const EvalOptions& opts) {
    const Metric m[] = {Metric::pnsmc};
    return evaluate_metrics(net, m, 0.0, method, opts).front();
}

MetricResult sopm(const NetworkConfig& net, double target_rate, Method method, const EvalOptions& opts) {
    if (!(target_rate > 0.0))
        throw DomainError("target_rate must be > 0");
    const Metric m[] = {Metric::sopm};
    return evaluate_metrics(net, m, target_rate, method, opts).front();
}

MetricResult esmc(const NetworkConfig& net, Method method, const EvalOptions& opts) {
    const Metric m[] = {Metric::esmc};
    return evaluate_metrics(net, m, 0.0, method, opts).front();
}

} // namespace shadowsec
