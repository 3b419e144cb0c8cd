#pragma once

// Test-side oracles, independent of the library's enumeration paths.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "farey/farey_core.hpp"

namespace oracle {

/// All a/q with q <= Q in [lo, hi], reduced, sorted, deduplicated.
inline std::vector<farey::Fraction> brute_force_farey(std::int64_t order, farey::Interval iv = {}) {
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    for (std::int64_t q = 1; q <= order; ++q)
        for (std::int64_t a = 0; a <= q; ++a) {
            const std::int64_t g = std::gcd(a, q);
            raw.emplace_back(a / g, q / g);
        }
    auto less = [](const auto& f, const auto& g) {
        return static_cast<__int128>(f.first) * g.second < static_cast<__int128>(g.first) * f.second;
    };
    std::sort(raw.begin(), raw.end(), less);
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    std::vector<farey::Fraction> out;
    for (auto [a, q] : raw) {
        farey::Fraction f{a, q};
        if (iv.contains(f)) out.push_back(f);
    }
    return out;
}

}  // namespace oracle
