#include "shadowsec/errors.hpp"
#include "shadowsec/metrics.hpp"
#include "shadowsec/montecarlo.hpp"
#include "shadowsec/quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace shadowsec;

namespace {

FadingParams params(double kappa, double mu, double m, double avg_snr) {
    FadingParams p;
    p.kappa = kappa;
    p.mu = mu;
    p.m = m;
    p.avg_snr = avg_snr;
    return p;
}

NetworkConfig network(const FadingParams& shape, double ab_db, double ac_db) {
    NetworkConfig n;
    n.relays = 2;
    n.receivers = 2;
    n.eavesdroppers = 2;
    n.antennas_rx = 2;
    n.antennas_eve = 2;
    n.hop_sp = shape;
    n.hop_sp.avg_snr = db_to_linear(ab_db);
    n.hop_pq = n.hop_sp;
    n.hop_pw = shape;
    n.hop_pw.avg_snr = db_to_linear(ac_db);
    return n;
}

SimPlan plan_for(const NetworkConfig& net, std::uint64_t trials, int threads = 1) {
    SimPlan p;
    p.net = net;
    p.trials = trials;
    p.seed = 99;
    p.threads = threads;
    return p;
}

// CDF by cumulative quadrature of the density on a dense grid, linearly interpolated.
struct TabulatedCdf {
    double step;
    std::vector<double> values;
    double operator()(double x) const {
        const double pos = x / step;
        const auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= values.size())
            return values.back();
        const double t = pos - static_cast<double>(i);
        return values[i] + t * (values[i + 1] - values[i]);
    }
};

TabulatedCdf tabulate(const HopCoefficients& c, double upper, std::size_t points) {
    TabulatedCdf t{upper / static_cast<double>(points - 1), std::vector<double>(points, 0.0)};
    for (std::size_t i = 1; i < points; ++i) {
        const double a = t.step * static_cast<double>(i - 1);
        t.values[i] = t.values[i - 1] +
                      integrate_interval([&](double x) { return hop_pdf(c, x); }, a, a + t.step).value;
    }
    return t;
}

} // namespace

TEST_CASE("generator streams are deterministic and distinct") {
    auto a = Xoshiro256::for_stream(1, 0);
    auto b = Xoshiro256::for_stream(1, 0);
    auto c = Xoshiro256::for_stream(1, 1);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        differs = differs || x != c();
    }
    CHECK(differs);
    Xoshiro256 u(5);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        sum += v;
    }
    CHECK(sum / 100000.0 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("sample means match the average SNR") {
    const std::vector<std::pair<FadingParams, int>> cases = {
        {params(0.0, 2.0, kInfiniteShadowing, 1.0), 1}, {params(2.0, 1.0, 3.0, 1.0), 1},
        {params(1.0, 1.0, kInfiniteShadowing, 10.0), 2}, {params(1.0, 2.0, 1.0, 0.1), 3},
        {params(1.0, 1.25, 2.0, 1.0), 1},
    };
    const std::uint64_t n = 1'000'000;
    for (const auto& [p, g] : cases) {
        const auto s = sample_hop(p, g, n, 3, 1);
        const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n);
        double var = 0.0;
        for (double v : s)
            var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / static_cast<double>(n - 1));
        CHECK(std::fabs(mean - p.avg_snr) <= 3.0 * sd / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("sampler selection") {
    CHECK(HopSampler(params(1.0, 1.0, 2.0, 1.0), 1).constructive());
    CHECK(HopSampler(params(1.0, 1.5, 2.0, 1.0), 1).constructive());
    CHECK_FALSE(HopSampler(params(1.0, 1.25, 2.0, 1.0), 1).constructive());
    CHECK(HopSampler(params(1.0, 1.25, 2.0, 1.0), 2).constructive());
}

TEST_CASE("Gamma reduction passes Kolmogorov-Smirnov") {
    const std::uint64_t n = 1'000'000;
    auto s = sample_hop(params(0.0, 2.0, kInfiniteShadowing, 1.0), 1, n, 21, 1);
    const double d = ks_distance(s, [](double x) { return 1.0 - std::exp(-2.0 * x) * (1.0 + 2.0 * x); });
    CHECK(ks_critical_value(n) == doctest::Approx(1.6276 / 1000.0).epsilon(1e-3));
    CHECK(d < ks_critical_value(n));
}

TEST_CASE("shadowed Rician samples pass Kolmogorov-Smirnov against the integrated density") {
    const std::uint64_t n = 1'000'000;
    const auto p = params(2.0, 1.0, 3.0, 1.0);
    const auto cdf = tabulate(hop_coefficients(p, 1, {}), 40.0, 40001);
    auto s = sample_hop(p, 1, n, 22, 1);
    CHECK(ks_distance(s, cdf) < ks_critical_value(n));
}

TEST_CASE("inverse-CDF fallback passes Kolmogorov-Smirnov") {
    const std::uint64_t n = 200'000;
    const auto p = params(1.0, 1.25, 2.0, 1.0);
    const auto c = hop_coefficients(p, 1, {});
    auto s = sample_hop(p, 1, n, 23, 1);
    CHECK(ks_distance(s, [&](double x) { return hop_cdf(c, x); }) < ks_critical_value(n));
}

TEST_CASE("results do not depend on the thread count") {
    const auto net = network(params(1.0, 1.0, kInfiniteShadowing, 1.0), 5.0, -10.0);
    const auto one = simulate_metrics(plan_for(net, 50'000, 1), 0.5);
    const auto four = simulate_metrics(plan_for(net, 50'000, 4), 0.5);
    CHECK(one.positive_count == four.positive_count);
    CHECK(one.outage_count == four.outage_count);
    CHECK(one.esmc == four.esmc);
    CHECK(one.esmc_stderr == four.esmc_stderr);
    CHECK(one.esmc_positive == four.esmc_positive);
    const auto s1 = sample_hop(net.hop_sp, 2, 10'000, 5, 1);
    const auto s3 = sample_hop(net.hop_sp, 2, 10'000, 5, 3);
    CHECK(s1 == s3);
}

TEST_CASE("standard error scales with the inverse root of the trials") {
    const auto net = network(params(1.0, 1.0, kInfiniteShadowing, 1.0), 0.0, -5.0);
    std::vector<double> scaled_p;
    std::vector<double> scaled_e;
    for (std::uint64_t n : {10'000ULL, 100'000ULL, 1'000'000ULL}) {
        const auto r = simulate_metrics(plan_for(net, n), 0.5);
        scaled_p.push_back(r.pnsmc_stderr * std::sqrt(static_cast<double>(n)));
        scaled_e.push_back(r.esmc_stderr * std::sqrt(static_cast<double>(n)));
    }
    for (std::size_t i = 1; i < 3; ++i) {
        CHECK(scaled_p[i] / scaled_p[0] == doctest::Approx(1.0).epsilon(0.2));
        CHECK(scaled_e[i] / scaled_e[0] == doctest::Approx(1.0).epsilon(0.2));
    }
}

TEST_CASE("symmetric network gives one half") {
    NetworkConfig net;
    net.hop_sp = params(1.0, 1.0, 2.0, 2.0);
    net.hop_pq = params(2.0, 1.0, kInfiniteShadowing, 1.0);
    net.hop_pw = net.hop_pq;
    const auto r = simulate_metrics(plan_for(net, 1'000'000), 1.0);
    CHECK(std::fabs(r.pnsmc - 0.5) <= 3.0 * r.pnsmc_stderr);
    CHECK(std::fabs(r.esmc) <= 3.0 * r.esmc_stderr);
}

TEST_CASE("tiny target rate gives the exact complement") {
    const auto net = network(params(1.0, 1.0, kInfiniteShadowing, 1.0), 5.0, -10.0);
    const auto r = simulate_metrics(plan_for(net, 200'000), 1e-9);
    CHECK(r.positive_count + r.outage_count == r.trials);
    CHECK(r.sopm == doctest::Approx(1.0 - r.pnsmc).epsilon(1e-14));
}

TEST_CASE("fig-4 eavesdropper SNR lowers pnsmc") {
    const auto shape = params(1.0, 2.0, kInfiniteShadowing, 1.0);
    double prev = 2.0;
    for (double ac_db : {-10.0, 0.0, 10.0}) {
        CAPTURE(ac_db);
        const auto net = network(shape, 5.0, ac_db);
        const auto r = simulate_metrics(plan_for(net, 1'000'000), 0.5);
        const double quad = pnsmc(net, Method::quadrature).value;
        CHECK(r.pnsmc < prev);
        CHECK(std::fabs(r.pnsmc - quad) <= 0.01);
        prev = r.pnsmc;
    }
}

TEST_CASE("degenerate estimates carry a warning") {
    const auto net = network(params(1.0, 1.0, kInfiniteShadowing, 1.0), 40.0, -20.0);
    const auto r = simulate_metrics(plan_for(net, 100), 0.5);
    CHECK(r.pnsmc == 1.0);
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("physical mode shares first hops and stays reproducible") {
    const auto net = network(params(1.0, 1.0, kInfiniteShadowing, 1.0), 5.0, 0.0);
    auto plan = plan_for(net, 100'000);
    plan.mode = SimMode::physical;
    const auto a = simulate_metrics(plan, 0.5);
    const auto b = simulate_metrics(plan, 0.5);
    CHECK(a.positive_count == b.positive_count);
    CHECK(a.esmc == b.esmc);
    CHECK(a.pnsmc >= 0.0);
    CHECK(a.pnsmc <= 1.0);
    plan.mode = SimMode::analysis_consistent;
    const auto c = simulate_metrics(plan, 0.5);
    CHECK(c.positive_count != a.positive_count);
}

TEST_CASE("plan validation and mode names") {
    const auto net = network(params(1.0, 1.0, kInfiniteShadowing, 1.0), 5.0, 0.0);
    auto plan = plan_for(net, 0);
    CHECK_THROWS_AS(plan.validate(), ConfigError);
    plan.trials = 10;
    CHECK_NOTHROW(plan.validate());
    CHECK_THROWS(simulate_metrics(plan, 0.0));
    CHECK(sim_mode_from_string(to_string(SimMode::physical)) == SimMode::physical);
    CHECK(sim_mode_from_string("analysis_consistent") == SimMode::analysis_consistent);
    CHECK_THROWS_AS(sim_mode_from_string("shared"), ConfigError);
}

TEST_CASE("Wilson interval") {
    // 50 of 100 at 95%: the textbook [0.4038, 0.5962]; 0 of n has upper end z^2 / (n + z^2).
    const auto a = wilson_interval(0.5, 100, 1.959964);
    CHECK(a.low == doctest::Approx(0.403832).epsilon(1e-5));
    CHECK(a.high == doctest::Approx(0.596168).epsilon(1e-5));
    const auto none = wilson_interval(0.0, 1'000'000, 2.5758);
    CHECK(none.low == 0.0);
    CHECK(none.high == doctest::Approx(6.634e-6).epsilon(1e-3));
    CHECK(none.contains(3e-6));
    const auto all = wilson_interval(1.0, 1'000'000, 2.5758);
    CHECK(all.high == 1.0);
    CHECK(all.contains(1.0 - 3e-6));
    CHECK_THROWS(wilson_interval(0.5, 0, 2.0));
}
