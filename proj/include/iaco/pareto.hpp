#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

#include "fitness.hpp"

namespace iaco {

/// Minimization sense: a is no worse everywhere and strictly better somewhere.
inline bool dominates(const MetricVector& a, const MetricVector& b) {
    if (a.cbo > b.cbo || a.nac > b.nac || a.atmr > b.atmr) return false;
    return a.cbo < b.cbo || a.nac < b.nac || a.atmr < b.atmr;
}

/// Indices (ascending) of vectors not dominated by any other; equal vectors are all kept.
///
/// Sweeps in lexicographic order: a dominator always precedes what it dominates,
/// and dominance is transitive, so each vector is only tested against the front
/// accumulated so far.
inline std::vector<std::size_t> non_dominated(std::span<const MetricVector> set) {
    if (set.empty()) throw ValidationError("non_dominated needs a non-empty set");
    std::vector<std::size_t> order(set.size());
    std::iota(order.begin(), order.end(), 0);
    const auto key = [&](std::size_t i) { return std::tie(set[i].cbo, set[i].nac, set[i].atmr); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return key(i) < key(j); });

    std::vector<std::size_t> front;
    for (std::size_t i : order) {
        const bool dominated =
            std::any_of(front.begin(), front.end(), [&](std::size_t f) { return dominates(set[f], set[i]); });
        if (!dominated) front.push_back(i);
    }
    std::sort(front.begin(), front.end());
    return front;
}

inline std::vector<std::size_t> non_dominated(const std::vector<MetricVector>& set) {
    return non_dominated(std::span<const MetricVector>(set));
}

}  // namespace iaco
