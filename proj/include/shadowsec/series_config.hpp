// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>

namespace shadowsec {

enum class ExpansionStrategy {
    grouped,   // multinomial powers evaluated by power-grouped convolution
    enumerate, // explicit weak-composition enumeration
};

// Truncation policy shared by every series expansion.
struct SeriesConfig {
    // Minimum number of terms kept for each infinite series index.
    int depth = 25;
    // Terms beyond `depth` are kept while their relative magnitude is at least this.
    double prune = 1e-16;
    // Hard cap on any series index; reaching it attaches a warning.
    int max_depth = 2000;
    // Maximum number of composition terms for the enumerate strategy.
    std::uint64_t composition_budget = 5'000'000;
    ExpansionStrategy expansion = ExpansionStrategy::grouped;
    // 0 uses the exact m -> infinity limit; a positive value is used as a
    // finite shadowing surrogate whenever m is infinite.
    double inf_m_surrogate = 0.0;

    void validate() const;
};

} // namespace shadowsec
