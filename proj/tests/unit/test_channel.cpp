#include "shadowsec/channel.hpp"
#include "shadowsec/errors.hpp"
#include "shadowsec/montecarlo.hpp"
#include "shadowsec/quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace shadowsec;

namespace {

FadingParams params(double kappa, double mu, double m, double avg_snr = 1.0) {
    FadingParams p;
    p.kappa = kappa;
    p.mu = mu;
    p.m = m;
    p.avg_snr = avg_snr;
    return p;
}

double integrate_pdf(const HopCoefficients& c, double scale) {
    return integrate_semi_infinite([&](double x) { return hop_pdf(c, x); }, scale).value;
}

// Weight of x^{mu-1+e} e^{-rate x} written out from the 1F1 density, in long double.
long double reference_weight(long double kappa, long double mu, long double m, long double avg, int e) {
    const long double c1 = std::pow(mu, mu) * std::pow(m, m) * std::pow(1 + kappa, mu) /
                           (std::tgamma(mu) * std::pow(avg, mu) * std::pow(mu * kappa + m, m));
    const long double a3 = mu * mu * kappa * (1 + kappa) / ((mu * kappa + m) * avg);
    long double term = 1.0L;
    for (int j = 0; j < e; ++j)
        term *= (m + j) / ((mu + j) * (j + 1)) * a3;
    return c1 * term;
}

const std::vector<FadingParams>& figure_params() {
    static const std::vector<FadingParams> list = {
        params(2.0, 2.0, kInfiniteShadowing, db_to_linear(-10.0)),
        params(1.0, 1.0, kInfiniteShadowing, db_to_linear(20.0)),
        params(1.0, 2.0, kInfiniteShadowing, db_to_linear(10.0)),
        params(1.0, 1.0, 1.0, db_to_linear(15.0)),
        params(1.0, 1.0, 4.0, db_to_linear(-5.0)),
        params(3.0, 1.0, 2.0, db_to_linear(5.0)),
        params(0.0, 1.0, kInfiniteShadowing, db_to_linear(0.0)),
        params(0.0, 2.0, kInfiniteShadowing, db_to_linear(20.0)),
        params(2.0, 1.0, 3.0, db_to_linear(20.0)),
    };
    return list;
}

} // namespace

TEST_CASE("db conversions") {
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
    CHECK(db_to_linear(-10.0) == doctest::Approx(0.1));
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(params(-1.0, 1.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(params(1.0, 0.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(params(1.0, 1.0, 0.0).validate(), ConfigError);
    CHECK_THROWS_AS(params(1.0, 1.0, 1.0, 0.0).validate(), ConfigError);
    CHECK_NOTHROW(params(1.0, 1.0, kInfiniteShadowing).validate());
    CHECK_THROWS(hop_coefficients(params(1.0, 1.0, 2.0), 0, {}));
}

TEST_CASE("no line of sight gives a single Gamma term") {
    const auto c = hop_coefficients(params(0.0, 2.0, 5.0), 1, {});
    CHECK(c.mixture_rate == 0.0);
    CHECK(c.rate == doctest::Approx(2.0));
    CHECK(c.size() == 1);
    CHECK(c.term_weights[0].sign > 0);
    CHECK(c.mixture_masses[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("antennas scale shape and rate") {
    const auto c = hop_coefficients(params(2.0, 2.0, 3.0), 2, {});
    CHECK(c.shape_base == doctest::Approx(4.0));
    CHECK(c.rate == doctest::Approx(12.0));
    CHECK(c.shadowing == doctest::Approx(6.0));
    CHECK(c.antennas == 2);
    CHECK(c.integer_shape());
    CHECK(c.integer_shape_base() == 4);
}

TEST_CASE("rate equals shape times one plus kappa over mean") {
    for (const auto& p : figure_params())
        for (int g : {1, 2, 4}) {
            const auto c = hop_coefficients(p, g, {});
            CHECK(c.rate == doctest::Approx(g * p.mu * (1.0 + p.kappa) / p.avg_snr).epsilon(1e-15));
            CHECK((c.mixture_rate == 0.0) == (p.kappa == 0.0));
            for (const auto& w : c.term_weights)
                CHECK(w.sign > 0);
        }
}

TEST_CASE("non-integer shape is accepted but flagged") {
    const auto c = hop_coefficients(params(1.0, 1.5, 2.0), 1, {});
    CHECK_FALSE(c.integer_shape());
    CHECK_THROWS_AS(static_cast<void>(c.integer_shape_base()), ShapeIntegralityError);
    CHECK(integrate_pdf(c, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("term weights match an extended precision evaluation") {
    const auto c = hop_coefficients(params(1.0, 1.0, 2.0), 1, {});
    REQUIRE(c.size() >= 25);
    for (int e = 0; e < 25; ++e) {
        const long double ref = reference_weight(1.0L, 1.0L, 2.0L, 1.0L, e);
        const long double got = std::exp(c.term_weights[static_cast<std::size_t>(e)].log_magnitude);
        CHECK(static_cast<double>(std::fabs(got / ref - 1.0L)) < 1e-13);
    }
}

TEST_CASE("Gamma density value") {
    const auto c = hop_coefficients(params(0.0, 2.0, kInfiniteShadowing), 1, {});
    CHECK(hop_pdf(c, 1.0) == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-13));
    CHECK(hop_pdf(c, 1.0) == doctest::Approx(0.5413411).epsilon(1e-7));
}

TEST_CASE("densities integrate to one") {
    for (const auto& p : figure_params())
        for (int g : {1, 2}) {
            const auto c = hop_coefficients(p, g, {});
            CHECK(integrate_pdf(c, p.avg_snr) == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(c.tail_mass < 1e-12);
        }
}

TEST_CASE("mean equals the average SNR") {
    for (const auto& p : figure_params()) {
        const auto c = hop_coefficients(p, 1, {});
        const double quad =
            integrate_semi_infinite([&](double x) { return x * hop_pdf(c, x); }, p.avg_snr).value;
        CHECK(quad == doctest::Approx(p.avg_snr).epsilon(1e-4));
        CHECK(hop_mean(c) == doctest::Approx(p.avg_snr).epsilon(1e-10));
    }
}

TEST_CASE("density is nonnegative and ccdf nonincreasing") {
    for (const auto& p : figure_params()) {
        const auto c = hop_coefficients(p, 2, {});
        double prev = 1.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = p.avg_snr * 0.025 * i;
            CHECK(hop_pdf(c, x) >= 0.0);
            const double s = hop_ccdf(c, x);
            CHECK(s <= prev);
            CHECK(s >= 0.0);
            prev = s;
        }
    }
}

TEST_CASE("ccdf endpoints") {
    for (const auto& p : figure_params()) {
        const auto c = hop_coefficients(p, 1, {});
        CHECK(hop_ccdf(c, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(hop_cdf(c, 0.0) == doctest::Approx(0.0));
    }
    const auto unit = hop_coefficients(params(1.0, 1.0, 2.0, 1.0), 1, {});
    CHECK(hop_ccdf(unit, 1e6) < 1e-12);
}

TEST_CASE("ccdf matches one minus the integrated density") {
    const auto c = hop_coefficients(params(1.0, 1.0, 2.0), 1, {});
    QuadratureOptions tight;
    tight.abs_tol = 1e-13;
    tight.rel_tol = 1e-14;
    const double mass = integrate_interval([&](double x) { return hop_pdf(c, x); }, 0.0, 1.0, tight).value;
    CHECK(hop_ccdf(c, 1.0) == doctest::Approx(1.0 - mass).epsilon(1e-8));
}

TEST_CASE("Nakagami and Rayleigh collapse") {
    for (double mn : {1.0, 2.0, 3.5}) {
        const double avg = 2.5;
        const auto c = hop_coefficients(params(0.0, mn, kInfiniteShadowing, avg), 1, {});
        const double b = mn / avg;
        for (double x : {0.01, 0.3, 1.0, 4.0, 12.0}) {
            const double ref = std::exp(mn * std::log(b) + (mn - 1.0) * std::log(x) - b * x - std::lgamma(mn));
            CHECK(hop_pdf(c, x) == doctest::Approx(ref).epsilon(1e-6));
        }
    }
    const auto ray = hop_coefficients(params(0.0, 1.0, kInfiniteShadowing, 1.0), 1, {});
    for (double x : {0.0, 0.5, 2.0})
        CHECK(hop_pdf(ray, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
}

TEST_CASE("Rician limit and finite surrogate") {
    const double k = 2.0;
    const double avg = 1.0;
    const auto exact = hop_coefficients(params(k, 1.0, kInfiniteShadowing, avg), 1, {});
    CHECK(exact.shadowing_limit);
    SeriesConfig surrogate;
    surrogate.inf_m_surrogate = 200.0;
    const auto approx = hop_coefficients(params(k, 1.0, kInfiniteShadowing, avg), 1, surrogate);
    CHECK(approx.surrogate_used);
    CHECK_FALSE(approx.warnings.empty());
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = 0.03 * i;
        const double ref = (1.0 + k) * std::exp(-k) / avg * std::exp(-(1.0 + k) * x / avg) *
                           std::cyl_bessel_i(0.0, 2.0 * std::sqrt(k * (1.0 + k) * x / avg));
        CHECK(hop_pdf(exact, x) == doctest::Approx(ref).epsilon(1e-10));
        worst = std::max(worst, std::fabs(hop_pdf(approx, x) - ref));
    }
    // Reference value from an independent arbitrary-precision 1F1 evaluation.
    CHECK(worst == doctest::Approx(0.0040532918557632).epsilon(1e-6));
}

TEST_CASE("series and hypergeometric forms agree") {
    for (const auto& p : figure_params()) {
        const auto c = hop_coefficients(p, 2, {});
        for (double t : {0.05, 0.5, 1.0, 3.0, 8.0}) {
            const double x = t * p.avg_snr;
            CHECK(hop_pdf(c, x) == doctest::Approx(hop_pdf_direct(c, x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("depth 25 and depth 35 agree") {
    SeriesConfig d25;
    SeriesConfig d35;
    d35.depth = 35;
    for (const auto& p : figure_params())
        for (int g : {1, 2, 6}) {
            const auto a = hop_coefficients(p, g, d25);
            const auto b = hop_coefficients(p, g, d35);
            for (double t : {0.1, 0.7, 1.5, 4.0}) {
                const double x = t * p.avg_snr;
                CHECK(hop_pdf(a, x) == doctest::Approx(hop_pdf(b, x)).epsilon(1e-8));
                CHECK(hop_ccdf(a, x) == doctest::Approx(hop_ccdf(b, x)).epsilon(1e-8));
            }
        }
}

TEST_CASE("depth cap adds a warning") {
    SeriesConfig tiny;
    tiny.depth = 2;
    tiny.max_depth = 3;
    const auto c = hop_coefficients(params(5.0, 1.0, 40.0, 1000.0), 1, tiny);
    CHECK(c.size() <= 3);
    CHECK_FALSE(c.warnings.empty());
    CHECK(c.tail_mass > 1e-6);
}

TEST_CASE("histogram of sampled SNRs matches the density") {
    const FadingParams p = params(2.0, 1.0, 3.0, 1.0);
    const auto c = hop_coefficients(p, 1, {});
    const std::uint64_t n = 1'000'000;
    auto samples = sample_hop(p, 1, n, 7, 1);
    const double width = 0.25;
    const int bins = 24;
    std::vector<std::uint64_t> counts(bins, 0);
    for (double s : samples) {
        const auto b = static_cast<int>(s / width);
        if (b < bins)
            ++counts[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < bins; ++b) {
        const double prob =
            integrate_interval([&](double x) { return hop_pdf(c, x); }, b * width, (b + 1) * width).value;
        const double band = 3.0 * std::sqrt(prob * (1.0 - prob) / static_cast<double>(n));
        const double freq = static_cast<double>(counts[static_cast<std::size_t>(b)]) / static_cast<double>(n);
        CAPTURE(b);
        CHECK(std::fabs(freq - prob) <= band);
    }
}

TEST_CASE("cdf keeps relative accuracy in the lower tail") {
    QuadratureOptions tight;
    tight.abs_tol = 1e-300;
    tight.rel_tol = 1e-12;
    for (const auto& p : figure_params()) {
        const auto c = hop_coefficients(p, 2, {});
        for (double t : {1e-4, 1e-2, 0.3, 2.0}) {
            const double x = t * p.avg_snr;
            const double mass = integrate_interval([&](double u) { return hop_pdf(c, u); }, 0.0, x, tight).value;
            CHECK(hop_cdf(c, x) == doctest::Approx(mass).epsilon(1e-9));
            CHECK(hop_cdf(c, x) + hop_ccdf(c, x) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}
