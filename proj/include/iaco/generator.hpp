#pragma once

#include <numeric>
#include <string>

#include "problem.hpp"
#include "random.hpp"

namespace iaco {

struct ProblemScale {
    std::uint32_t attributes = 0;
    std::uint32_t methods = 0;
    std::uint32_t uses = 0;
    std::uint32_t classes = 1;
};

/// Scales of the three reference case studies: cinema booking, graduate program, select cruises.
inline constexpr ProblemScale kCinemaBookingScale{16, 15, 39, 5};
inline constexpr ProblemScale kGraduateProgramScale{43, 12, 121, 5};
inline constexpr ProblemScale kSelectCruisesScale{52, 30, 126, 15};

/// Share of uses drawn inside a latent class (while such pairs remain).
inline constexpr double kLatentCohesion = 0.85;

/// Random problem with exactly the requested counts where every method uses at least
/// one attribute. Elements are dealt into `classes` latent groups and most uses fall
/// inside a group, so instances carry the modular structure of real designs rather
/// than uniform noise. A pure function of (scale, seed).
inline DesignProblem generate_problem(const ProblemScale& scale, std::uint64_t seed) {
    const auto [a, m, u, c] = scale;
    if (a < 1 || m < 1 || u < 1 || c < 1) throw ValidationError("all counts must be at least 1");
    if (std::uint64_t{u} > std::uint64_t{a} * m) {
        throw ValidationError("infeasible counts: " + std::to_string(u) + " uses exceed " + std::to_string(a) + " x " +
                              std::to_string(m) + " possible pairs");
    }
    if (u < m) throw ValidationError("infeasible counts: fewer uses than methods");
    if (c > a + m) throw ValidationError("infeasible counts: classCount exceeds element count");

    DesignProblem p;
    p.name = "generated-" + std::to_string(a) + "-" + std::to_string(m) + "-" + std::to_string(u) + "-" +
             std::to_string(c) + "-s" + std::to_string(seed);
    p.class_count = c;
    for (std::uint32_t i = 0; i < a; ++i) p.attributes.push_back("attr" + std::to_string(i));
    for (std::uint32_t j = 0; j < m; ++j) p.methods.push_back("meth" + std::to_string(j));

    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(Stream::generator)));
    const auto deal = [&](std::uint32_t n) {
        std::vector<std::uint32_t> order(n), group(n);
        std::iota(order.begin(), order.end(), 0);
        for (std::uint32_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        for (std::uint32_t i = 0; i < n; ++i) group[order[i]] = i % c;
        return group;
    };
    const auto attr_group = deal(a);
    const auto meth_group = deal(m);

    // Unused pairs split by whether they stay inside a latent group.
    std::vector<Use> inside, across;
    std::vector<std::vector<std::uint32_t>> attrs_of(c);
    for (std::uint32_t i = 0; i < a; ++i) attrs_of[attr_group[i]].push_back(i);

    std::vector<Use> uses;
    // Coverage first: one use per method, inside its group when the group has attributes.
    std::vector<std::uint32_t> first(m);
    for (std::uint32_t j = 0; j < m; ++j) {
        const auto& own = attrs_of[meth_group[j]];
        first[j] = own.empty() ? static_cast<std::uint32_t>(rng.below(a)) : own[rng.below(own.size())];
        uses.push_back({j, first[j]});
    }
    for (std::uint32_t j = 0; j < m; ++j) {
        for (std::uint32_t i = 0; i < a; ++i) {
            if (i == first[j]) continue;
            (attr_group[i] == meth_group[j] ? inside : across).push_back({j, i});
        }
    }
    const auto draw = [&](std::vector<Use>& pool) {
        const auto k = rng.below(pool.size());
        std::swap(pool[k], pool.back());
        uses.push_back(pool.back());
        pool.pop_back();
    };
    while (uses.size() < u) {
        const bool want_inside = rng.uniform() < kLatentCohesion;
        if ((want_inside && !inside.empty()) || across.empty()) {
            draw(inside);
        } else {
            draw(across);
        }
    }
    std::sort(uses.begin(), uses.end());
    p.uses = std::move(uses);
    validate(p);
    return p;
}

inline DesignProblem generate_problem(std::uint32_t attributes, std::uint32_t methods, std::uint32_t uses,
                                      std::uint32_t classes, std::uint64_t seed) {
    return generate_problem(ProblemScale{attributes, methods, uses, classes}, seed);
}

}  // namespace iaco
