#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string_view>

#include "problem.hpp"

namespace iaco {

/// The three minimized design measures.
struct MetricVector {
    double cbo = 0.0;   // fraction of uses crossing a class boundary
    double nac = 0.0;   // mean of attribute/method count deviations across classes
    double atmr = 0.0;  // deviation of per-class attribute/method ratios

    bool operator==(const MetricVector&) const = default;
};

/// Non-negative mixture weights summing to one.
struct WeightVector {
    double cbo = 0.34;
    double nac = 0.33;
    double atmr = 0.33;

    static constexpr double kSumTolerance = 1e-9;

    static WeightVector equal() { return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}; }

    bool valid() const {
        return cbo >= 0.0 && nac >= 0.0 && atmr >= 0.0 && std::abs(cbo + nac + atmr - 1.0) <= kSumTolerance;
    }

    bool operator==(const WeightVector&) const = default;
};

inline void validate(const WeightVector& w) {
    if (!w.valid()) throw ValidationError("weights must be non-negative and sum to 1");
}

namespace detail {

/// Population standard deviation (divide by n), two-pass.
inline double population_stddev(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size()));
}

struct ClassCounts {
    std::vector<double> attributes;
    std::vector<double> methods;
};

inline ClassCounts class_counts(const DesignProblem& p, const DesignSolution& s) {
    ClassCounts counts{std::vector<double>(s.classes.size(), 0.0), std::vector<double>(s.classes.size(), 0.0)};
    for (std::size_t c = 0; c < s.classes.size(); ++c) {
        for (ElementId e : s.classes[c]) (p.is_attribute(e) ? counts.attributes : counts.methods)[c] += 1.0;
    }
    return counts;
}

inline double cbo_from_owner(const DesignProblem& p, std::span<const std::uint32_t> owner) {
    std::size_t crossing = 0;
    for (const auto& u : p.uses) {
        if (owner[p.method_element(u.method)] != owner[p.attribute_element(u.attribute)]) ++crossing;
    }
    return static_cast<double>(crossing) / static_cast<double>(p.uses.size());
}

inline double nac_from_counts(const ClassCounts& k) {
    return 0.5 * (population_stddev(k.attributes) + population_stddev(k.methods));
}

inline double atmr_from_counts(const ClassCounts& k) {
    std::vector<double> ratios(k.attributes.size());
    for (std::size_t c = 0; c < ratios.size(); ++c) ratios[c] = k.attributes[c] / std::max(k.methods[c], 1.0);
    return population_stddev(ratios);
}

}  // namespace detail

inline double cbo(const DesignProblem& p, const DesignSolution& s) {
    const auto owner = class_assignment(p, s);
    return detail::cbo_from_owner(p, owner);
}

inline double nac(const DesignProblem& p, const DesignSolution& s) {
    validate(p, s);
    return detail::nac_from_counts(detail::class_counts(p, s));
}

/// Methodless classes use a divisor of 1.
inline double atmr(const DesignProblem& p, const DesignSolution& s) {
    validate(p, s);
    return detail::atmr_from_counts(detail::class_counts(p, s));
}

inline MetricVector metric_vector(const DesignProblem& p, const DesignSolution& s) {
    const auto owner = class_assignment(p, s);
    const auto counts = detail::class_counts(p, s);
    return {detail::cbo_from_owner(p, owner), detail::nac_from_counts(counts), detail::atmr_from_counts(counts)};
}

/// Weighted-sum quality in [0, 1], higher is better. Each measure is mapped to
/// [0, 1] by a fixed transform so that scores compare across iterations.
inline double combined_score(const MetricVector& m, const WeightVector& w) {
    return w.cbo * (1.0 - m.cbo) + w.nac * (1.0 / (1.0 + m.nac)) + w.atmr * (1.0 / (1.0 + m.atmr));
}

// ---------------------------------------------------------------------------
// Per-class views used by the diagram payload.

/// Internal uses over uses touching the class; 0 when no use touches it.
inline double class_cohesion(const DesignProblem& p, const DesignSolution& s, std::uint32_t class_index) {
    const auto owner = class_assignment(p, s);
    if (class_index >= s.classes.size()) throw ValidationError("class index out of range");
    std::size_t touching = 0;
    std::size_t internal = 0;
    for (const auto& u : p.uses) {
        const bool m_in = owner[p.method_element(u.method)] == class_index;
        const bool a_in = owner[p.attribute_element(u.attribute)] == class_index;
        if (m_in || a_in) ++touching;
        if (m_in && a_in) ++internal;
    }
    return touching == 0 ? 0.0 : static_cast<double>(internal) / static_cast<double>(touching);
}

enum class CohesionTier { high, intermediate, low };

inline CohesionTier cohesion_tier(double cohesion) {
    if (cohesion >= 2.0 / 3.0) return CohesionTier::high;
    if (cohesion >= 1.0 / 3.0) return CohesionTier::intermediate;
    return CohesionTier::low;
}

inline std::string_view to_string(CohesionTier t) {
    switch (t) {
        case CohesionTier::high: return "high";
        case CohesionTier::intermediate: return "intermediate";
        case CohesionTier::low: return "low";
    }
    return "low";
}

/// Directed count of uses whose method lives in class `from` and attribute in class `to`.
inline std::size_t coupling_strength(const DesignProblem& p, const DesignSolution& s, std::uint32_t from,
                                     std::uint32_t to) {
    if (from == to) throw ValidationError("coupling strength needs two distinct classes");
    if (from >= s.classes.size() || to >= s.classes.size()) throw ValidationError("class index out of range");
    const auto owner = class_assignment(p, s);
    std::size_t n = 0;
    for (const auto& u : p.uses) {
        if (owner[p.method_element(u.method)] == from && owner[p.attribute_element(u.attribute)] == to) ++n;
    }
    return n;
}

/// All directed strengths at once; entry [i][j] with i == j is zero.
inline std::vector<std::vector<std::size_t>> coupling_matrix(const DesignProblem& p, const DesignSolution& s) {
    const auto owner = class_assignment(p, s);
    std::vector<std::vector<std::size_t>> k(s.classes.size(), std::vector<std::size_t>(s.classes.size(), 0));
    for (const auto& u : p.uses) {
        const auto i = owner[p.method_element(u.method)];
        const auto j = owner[p.attribute_element(u.attribute)];
        if (i != j) ++k[i][j];
    }
    return k;
}

inline constexpr double kGodClassShare = 0.5;
inline constexpr std::uint32_t kGodClassMinClasses = 3;

/// A class holding more than half of all elements, in designs of three or more classes.
inline std::optional<std::uint32_t> detect_god_class(const DesignProblem& p, const DesignSolution& s) {
    validate(p, s);
    if (s.classes.size() < kGodClassMinClasses) return std::nullopt;
    const double total = p.element_count();
    for (std::uint32_t c = 0; c < s.classes.size(); ++c) {
        if (static_cast<double>(s.classes[c].size()) > kGodClassShare * total) return c;
    }
    return std::nullopt;
}

}  // namespace iaco
