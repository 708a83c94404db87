// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/montecarlo.hpp"

#include "shadowsec/errors.hpp"

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace shadowsec {

namespace {

constexpr std::uint64_t kBlockSize = 4096;

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

bool near_integer(double v) { return std::fabs(v - std::round(v)) < 1e-9; }

// Neumaier compensated sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + carry; }
};

struct BlockTally {
    std::uint64_t positive = 0;
    std::uint64_t outage = 0;
    CompensatedSum c;
    CompensatedSum c2;
    CompensatedSum cp;
    CompensatedSum cp2;
};

int resolve_threads(int requested) {
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs work(block) for every block index, spread over `threads` workers.
template <typename Work>
void run_blocks(std::uint64_t blocks, int threads, Work&& work) {
    const int workers = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), std::max<std::uint64_t>(blocks, 1)));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b)
            work(b);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::uint64_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1))
                work(b);
        });
    for (auto& t : pool)
        t.join();
}

double proportion_stderr(std::uint64_t hits, std::uint64_t n) {
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double mean_stderr(double sum, double sum_sq, std::uint64_t n) {
    if (n < 2)
        return 0.0;
    const double dn = static_cast<double>(n);
    const double mean = sum / dn;
    const double var = std::max(0.0, (sum_sq - dn * mean * mean) / (dn - 1.0));
    return std::sqrt(var / dn);
}

} // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : s_)
        s = splitmix64(sm);
}

Xoshiro256 Xoshiro256::for_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t sm = seed;
    const std::uint64_t a = splitmix64(sm);
    std::uint64_t mix = a ^ (index * 0xD1B54A32D192ED03ULL);
    return Xoshiro256(splitmix64(mix));
}

Xoshiro256::result_type Xoshiro256::operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

HopSampler::HopSampler(const FadingParams& p, int antennas) : params_(p) {
    p.validate();
    if (antennas < 1)
        throw ConfigError("antenna count must be >= 1");
    const double n = 2.0 * p.mu * antennas;
    constructive_ = near_integer(n) && std::round(n) >= 1.0;
    if (constructive_) {
        components_ = static_cast<int>(std::lround(n));
        sigma_ = std::sqrt(p.avg_snr / ((1.0 + p.kappa) * components_));
        los_amplitude_ = std::sqrt(p.avg_snr * p.kappa / (1.0 + p.kappa));
        shadow_shape_ = p.infinite_shadowing() ? 0.0 : p.m * antennas;
    } else {
        coeffs_ = hop_coefficients(p, antennas, SeriesConfig{});
    }
}

double HopSampler::operator()(Xoshiro256& rng) const { return constructive_ ? draw_constructive(rng) : draw_inverse(rng); }

double HopSampler::draw_constructive(Xoshiro256& rng) const {
    boost::random::normal_distribution<double> normal(0.0, sigma_);
    double amplitude = los_amplitude_;
    if (shadow_shape_ > 0.0 && amplitude > 0.0) {
        boost::random::gamma_distribution<double> shadow(shadow_shape_, 1.0 / shadow_shape_);
        amplitude *= std::sqrt(shadow(rng));
    }
    const double first = normal(rng) + amplitude;
    double power = first * first;
    for (int i = 1; i < components_; ++i) {
        const double g = normal(rng);
        power += g * g;
    }
    return power;
}

double HopSampler::draw_inverse(Xoshiro256& rng) const {
    const double u = rng.uniform();
    double lo = 0.0;
    double hi = params_.avg_snr;
    while (hop_cdf(coeffs_, hi) < u)
        hi *= 2.0;
    for (int it = 0; it < 400 && hi - lo > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hop_cdf(coeffs_, mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double sample_kappa_mu_shadowed(const FadingParams& p, int antennas, Xoshiro256& rng) {
    return HopSampler(p, antennas)(rng);
}

std::string to_string(SimMode mode) { return mode == SimMode::physical ? "physical" : "analysis_consistent"; }

SimMode sim_mode_from_string(const std::string& s) {
    if (s == "analysis_consistent")
        return SimMode::analysis_consistent;
    if (s == "physical")
        return SimMode::physical;
    throw ConfigError("unknown simulation mode '" + s + "' (expected analysis_consistent or physical)");
}

void SimPlan::validate() const {
    if (trials < 1)
        throw ConfigError("simulation trials must be >= 1");
    if (threads < 0)
        throw ConfigError("simulation threads must be >= 0");
    net.validate();
}

SimEstimates simulate_metrics(const SimPlan& plan, double target_rate) {
    plan.validate();
    if (!(target_rate > 0.0))
        throw DomainError("target rate must be > 0");
    const NetworkConfig& net = plan.net;
    const HopSampler sp(net.hop_sp, 1);
    const HopSampler pq(net.hop_pq, net.antennas_rx);
    const HopSampler pw(net.hop_pw, net.antennas_eve);
    const bool shared = plan.mode == SimMode::physical;
    const int relays = net.relays;

    const std::uint64_t blocks = (plan.trials + kBlockSize - 1) / kBlockSize;
    std::vector<BlockTally> tallies(blocks);
    run_blocks(blocks, resolve_threads(plan.threads), [&](std::uint64_t block) {
        BlockTally& tally = tallies[block];
        std::vector<double> first(static_cast<std::size_t>(relays));
        const std::uint64_t begin = block * kBlockSize;
        const std::uint64_t end = std::min(plan.trials, begin + kBlockSize);
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            Xoshiro256 rng = Xoshiro256::for_stream(plan.seed, trial);
            if (shared)
                for (auto& v : first)
                    v = sp(rng);
            auto best_relay = [&](const HopSampler& second) {
                double best = 0.0;
                for (int a = 0; a < relays; ++a) {
                    const double x1 = shared ? first[static_cast<std::size_t>(a)] : sp(rng);
                    best = std::max(best, std::min(x1, second(rng)));
                }
                return best;
            };
            double lmin = std::numeric_limits<double>::infinity();
            for (int b = 0; b < net.receivers; ++b)
                lmin = std::min(lmin, best_relay(pq));
            double lmax = 0.0;
            for (int c = 0; c < net.eavesdroppers; ++c)
                lmax = std::max(lmax, best_relay(pw));
            const double cap = (std::log1p(lmin) - std::log1p(lmax)) / std::log(2.0);
            tally.positive += cap > 0.0 ? 1 : 0;
            tally.outage += cap < target_rate ? 1 : 0;
            const double pos = std::max(cap, 0.0);
            tally.c.add(cap);
            tally.c2.add(cap * cap);
            tally.cp.add(pos);
            tally.cp2.add(pos * pos);
        }
    });

    CompensatedSum c, c2, cp, cp2;
    SimEstimates out;
    out.trials = plan.trials;
    for (const auto& t : tallies) {
        out.positive_count += t.positive;
        out.outage_count += t.outage;
        c.add(t.c.value());
        c2.add(t.c2.value());
        cp.add(t.cp.value());
        cp2.add(t.cp2.value());
    }
    const double n = static_cast<double>(plan.trials);
    out.pnsmc = static_cast<double>(out.positive_count) / n;
    out.sopm = static_cast<double>(out.outage_count) / n;
    out.esmc = c.value() / n;
    out.esmc_positive = cp.value() / n;
    out.pnsmc_stderr = proportion_stderr(out.positive_count, plan.trials);
    out.sopm_stderr = proportion_stderr(out.outage_count, plan.trials);
    out.esmc_stderr = mean_stderr(c.value(), c2.value(), plan.trials);
    out.esmc_positive_stderr = mean_stderr(cp.value(), cp2.value(), plan.trials);
    auto degenerate = [&](std::uint64_t hits, const char* name) {
        if (hits == 0 || hits == plan.trials)
            out.warnings.push_back(std::string(name) + " estimate is " + (hits == 0 ? "0" : "1") +
                                   "; the standard error is degenerate, increase trials");
    };
    degenerate(out.positive_count, "pnsmc");
    degenerate(out.outage_count, "sopm");
    return out;
}

std::vector<double> sample_hop(const FadingParams& p, int antennas, std::uint64_t count, std::uint64_t seed, int threads) {
    const HopSampler sampler(p, antennas);
    std::vector<double> out(count);
    const std::uint64_t blocks = (count + kBlockSize - 1) / kBlockSize;
    run_blocks(blocks, resolve_threads(threads), [&](std::uint64_t block) {
        const std::uint64_t begin = block * kBlockSize;
        const std::uint64_t end = std::min(count, begin + kBlockSize);
        for (std::uint64_t i = begin; i < end; ++i) {
            Xoshiro256 rng = Xoshiro256::for_stream(seed, i);
            out[i] = sampler(rng);
        }
    });
    return out;
}

double ks_distance(std::vector<double>& samples, const std::function<double(double)>& cdf) {
    if (samples.empty())
        throw DomainError("ks_distance needs at least one sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

double ks_critical_value(std::uint64_t n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

Interval wilson_interval(double proportion, std::uint64_t trials, double z) {
    if (trials == 0)
        throw DomainError("wilson_interval requires trials >= 1");
    const double n = static_cast<double>(trials);
    const double z2 = z * z;
    const double centre = (proportion + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z / (1.0 + z2 / n) * std::sqrt(proportion * (1.0 - proportion) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

} // namespace shadowsec
