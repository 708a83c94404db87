// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shadowsec/lognum.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace shadowsec {

// C(cells + total - 1, total), saturating at UINT64_MAX.
std::uint64_t composition_count(int cells, int total);

// Calls `visit` once per weak composition of `total` into `cells` parts, in
// lexicographically decreasing order of the first part. The span is only valid
// during the call.
void for_each_composition(int cells, int total, const std::function<void(std::span<const int>)>& visit);

std::vector<std::vector<int>> enumerate_compositions(int cells, int total);

// ln of total! / prod g_i!.
double ln_multinomial(std::span<const int> parts);

// One base term Omega * x^power of a sum raised to a power.
struct BaseTerm {
    LogNum weight;
    int power = 0;
};

// One term of the expanded power: weight * x^power * e^{-rate x}.
struct CompositionTerm {
    LogNum weight;
    int power = 0;
    double rate = 0.0;
};

// (sum_i weight_i x^{power_i})^total expanded through weak compositions and the
// multinomial theorem, with equal powers merged (power -> weight).
// Throws BudgetExceededError when the composition count exceeds `budget`.
std::map<int, LogNum> multinomial_power(std::span<const BaseTerm> base, int total, std::uint64_t budget);

} // namespace shadowsec
