// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/compositions.hpp"

#include "shadowsec/errors.hpp"
#include "shadowsec/specfun.hpp"

#include <limits>
#include <numeric>
#include <string>

namespace shadowsec {

std::uint64_t composition_count(int cells, int total) {
    if (cells < 1 || total < 0)
        throw DomainError("composition_count requires cells >= 1 and total >= 0");
    // C(n, k) with n = cells + total - 1, k = min(total, cells - 1), built incrementally.
    const std::uint64_t n = static_cast<std::uint64_t>(cells) + static_cast<std::uint64_t>(total) - 1;
    const std::uint64_t k = std::min<std::uint64_t>(static_cast<std::uint64_t>(total), static_cast<std::uint64_t>(cells) - 1);
    constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t num = n - k + i;
        const std::uint64_t g = std::gcd(result, i);
        const std::uint64_t r = result / g;
        const std::uint64_t d = i / g;
        if (r > cap / num)
            return cap;
        result = r * num / d;
    }
    return result;
}

void for_each_composition(int cells, int total, const std::function<void(std::span<const int>)>& visit) {
    if (cells < 1 || total < 0)
        throw DomainError("for_each_composition requires cells >= 1 and total >= 0");
    std::vector<int> parts(static_cast<std::size_t>(cells), 0);
    parts[0] = total;
    while (true) {
        visit(parts);
        // Move one unit from the last nonzero part before the tail into the next slot,
        // and sweep the tail back onto it.
        const int last = cells - 1;
        if (cells == 1)
            return;
        int tail = parts[last];
        parts[last] = 0;
        int i = last - 1;
        while (i >= 0 && parts[i] == 0)
            --i;
        if (i < 0)
            return;
        parts[i] -= 1;
        parts[i + 1] = tail + 1;
    }
}

std::vector<std::vector<int>> enumerate_compositions(int cells, int total) {
    std::vector<std::vector<int>> out;
    for_each_composition(cells, total, [&](std::span<const int> g) { out.emplace_back(g.begin(), g.end()); });
    return out;
}

double ln_multinomial(std::span<const int> parts) {
    int total = 0;
    double denom = 0.0;
    for (int g : parts) {
        total += g;
        denom += ln_factorial(g);
    }
    return ln_factorial(total) - denom;
}

std::map<int, LogNum> multinomial_power(std::span<const BaseTerm> base, int total, std::uint64_t budget) {
    std::map<int, LogNum> out;
    if (base.empty()) {
        if (total == 0)
            out[0] = LogNum::one();
        return out;
    }
    const int cells = static_cast<int>(base.size());
    const std::uint64_t count = composition_count(cells, total);
    if (count > budget)
        throw BudgetExceededError("composition count " + std::to_string(count) + " for " + std::to_string(cells) +
                                  " cells and total " + std::to_string(total) + " exceeds budget " +
                                  std::to_string(budget) + "; raise prune or lower the series depth");
    std::map<int, LogAccumulator> acc;
    for_each_composition(cells, total, [&](std::span<const int> g) {
        LogNum w = LogNum::from_log(ln_multinomial(g));
        int power = 0;
        for (int i = 0; i < cells; ++i) {
            if (g[i] == 0)
                continue;
            w *= base[i].weight.pow(g[i]);
            power += base[i].power * g[i];
        }
        acc[power].add(w);
    });
    for (const auto& [power, a] : acc)
        out[power] = a.total();
    return out;
}

} // namespace shadowsec
