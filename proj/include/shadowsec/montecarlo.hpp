// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shadowsec/channel.hpp"
#include "shadowsec/network.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace shadowsec {

// xoshiro256** with splitmix64 seeding; satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed = 0);
    // Independent stream for one (seed, index) pair.
    static Xoshiro256 for_stream(std::uint64_t seed, std::uint64_t index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();
    double uniform(); // in [0, 1)

private:
    std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

// Draws one hop SNR with parameters (kappa, mu G, m G, avg_snr).
class HopSampler {
public:
    HopSampler(const FadingParams& p, int antennas);

    // True when 2 mu G is an integer and the Gaussian construction is used;
    // otherwise draws invert the analytical CDF by bisection.
    [[nodiscard]] bool constructive() const { return constructive_; }
    double operator()(Xoshiro256& rng) const;

private:
    double draw_constructive(Xoshiro256& rng) const;
    double draw_inverse(Xoshiro256& rng) const;

    FadingParams params_;
    int components_ = 0;
    double sigma_ = 0.0;
    double los_amplitude_ = 0.0;
    double shadow_shape_ = 0.0; // 0 means no shadowing
    bool constructive_ = true;
    HopCoefficients coeffs_;
};

double sample_kappa_mu_shadowed(const FadingParams& p, int antennas, Xoshiro256& rng);

enum class SimMode {
    analysis_consistent, // every receiver and eavesdropper branch drawn independently
    physical,            // first-hop draws shared by all receivers and eavesdroppers in a trial
};

std::string to_string(SimMode mode);
SimMode sim_mode_from_string(const std::string& s);

struct SimPlan {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 20240601;
    SimMode mode = SimMode::analysis_consistent;
    NetworkConfig net;
    int threads = 0; // 0 uses the hardware concurrency

    void validate() const;
};

struct SimEstimates {
    std::uint64_t trials = 0;
    double pnsmc = 0.0;
    double sopm = 0.0;
    double esmc = 0.0;
    double esmc_positive = 0.0; // mean of max(C, 0)
    double pnsmc_stderr = 0.0;
    double sopm_stderr = 0.0;
    double esmc_stderr = 0.0;
    double esmc_positive_stderr = 0.0;
    std::uint64_t positive_count = 0; // trials with C > 0
    std::uint64_t outage_count = 0;   // trials with C < target_rate
    std::vector<std::string> warnings;
};

// Per-trial streams are derived from (seed, trial index) and trials are reduced
// in fixed blocks, so results do not depend on the thread count.
SimEstimates simulate_metrics(const SimPlan& plan, double target_rate);

// `count` SNR draws of one hop, index i using stream (seed, i).
std::vector<double> sample_hop(const FadingParams& p, int antennas, std::uint64_t count, std::uint64_t seed,
                               int threads = 1);

// sup |F_n - F| of the empirical CDF of `samples` against `cdf`; sorts samples in place.
double ks_distance(std::vector<double>& samples, const std::function<double(double)>& cdf);
// Asymptotic Kolmogorov-Smirnov critical value sqrt(-ln(alpha / 2) / 2) / sqrt(n).
double ks_critical_value(std::uint64_t n, double alpha = 0.01);

// Wilson score interval for a binomial proportion at `z` standard normal quantiles.
struct Interval {
    double low = 0.0;
    double high = 0.0;
    [[nodiscard]] bool contains(double v) const { return v >= low && v <= high; }
};
Interval wilson_interval(double proportion, std::uint64_t trials, double z);

} // namespace shadowsec
