#pragma once

#include <map>
#include <span>
#include <vector>

#include "pheromone.hpp"
#include "random.hpp"

namespace iaco {

/// Classes pinned by the designer. Frozen member sets are pairwise disjoint and
/// are withheld from path construction.
class FreezeSet {
public:
    using Map = std::map<std::uint32_t, std::vector<ElementId>>;

    /// Checks that `members` may be frozen into `class_index` alongside the current set.
    void check_freeze(const DesignProblem& p, std::uint32_t class_index, std::span<const ElementId> members) const {
        if (class_index >= p.class_count) throw ValidationError("freeze: class index out of range");
        if (classes_.contains(class_index)) throw ValidationError("freeze: class already frozen");
        std::vector<bool> seen(p.element_count(), false);
        for (ElementId e : members) {
            if (e >= p.element_count()) throw ValidationError("freeze: unknown element");
            if (seen[e]) throw ValidationError("freeze: duplicate member \"" + p.label(e) + "\"");
            if (is_frozen(e)) throw ValidationError("freeze: \"" + p.label(e) + "\" already frozen in another class");
            seen[e] = true;
        }
        const std::size_t frozen_elements = frozen_element_count() + members.size();
        if (classes_.size() + 1 == p.class_count && frozen_elements < p.element_count()) {
            throw ValidationError("freeze: no unfrozen class would remain for the unfrozen elements");
        }
    }

    void freeze(const DesignProblem& p, std::uint32_t class_index, std::vector<ElementId> members) {
        check_freeze(p, class_index, members);
        classes_.emplace(class_index, std::move(members));
    }

    void unfreeze(std::uint32_t class_index) {
        if (classes_.erase(class_index) == 0) throw ValidationError("unfreeze: class is not frozen");
    }

    bool contains(std::uint32_t class_index) const { return classes_.contains(class_index); }
    bool empty() const { return classes_.empty(); }
    const Map& classes() const { return classes_; }

    bool is_frozen(ElementId e) const {
        for (const auto& [c, members] : classes_) {
            if (std::find(members.begin(), members.end(), e) != members.end()) return true;
        }
        return false;
    }

    std::size_t frozen_element_count() const {
        std::size_t n = 0;
        for (const auto& [c, members] : classes_) n += members.size();
        return n;
    }

    /// Full consistency check against a problem.
    void validate(const DesignProblem& p) const {
        FreezeSet rebuilt;
        for (const auto& [c, members] : classes_) rebuilt.freeze(p, c, members);
    }

    bool operator==(const FreezeSet&) const = default;

private:
    Map classes_;
};

/// Index drawn with probability proportional to weights[k].
inline std::size_t roulette_select(std::span<const double> weights, Rng& rng) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        acc += weights[k];
        if (target < acc) return k;
    }
    return weights.size() - 1;
}

struct Walk {
    DesignSolution solution;
    std::vector<std::uint32_t> vertices;  // visiting order on the residual graph
};

/// One ant's walk over the residual graph (unfrozen elements plus the delimiters
/// separating the unfrozen class slots). Every unused delimiter competes with the
/// unvisited elements; whichever delimiter is taken closes the current slot, so
/// segments fill the unfrozen slots in order. Frozen classes are copied in verbatim.
inline Walk construct_walk(const Attractiveness& attract, const DesignProblem& problem, const FreezeSet& frozen,
                           Rng& rng) {
    const PathGraph graph(problem);
    Walk walk;
    auto& sol = walk.solution;
    sol.classes.resize(problem.class_count);

    std::vector<std::uint32_t> slots;
    for (std::uint32_t c = 0; c < problem.class_count; ++c) {
        if (auto it = frozen.classes().find(c); it != frozen.classes().end()) {
            sol.classes[c] = it->second;
        } else {
            slots.push_back(c);
        }
    }

    // Unvisited vertices: unfrozen elements first, then the slot delimiters.
    std::vector<std::uint32_t> open;
    for (ElementId e = 0; e < graph.elements; ++e) {
        if (!frozen.is_frozen(e)) open.push_back(e);
    }
    if (slots.empty() || open.empty()) return walk;
    const std::size_t element_count = open.size();
    for (std::uint32_t d = 0; d + 1 < slots.size(); ++d) open.push_back(graph.delimiter(d));

    const auto take = [&](std::size_t k) {
        const std::uint32_t v = open[k];
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
        return v;
    };

    std::size_t segment = 0;
    std::uint32_t current = take(rng.below(element_count));
    sol.classes[slots[segment]].push_back(current);
    walk.vertices.reserve(open.size() + 1);
    walk.vertices.push_back(current);

    std::vector<double> weights;
    while (!open.empty()) {
        weights.clear();
        for (std::uint32_t v : open) weights.push_back(attract(current, v));
        current = take(roulette_select(weights, rng));
        walk.vertices.push_back(current);
        if (current >= graph.elements) {
            ++segment;
        } else {
            sol.classes[slots[segment]].push_back(current);
        }
    }
    return walk;
}

inline DesignSolution construct_path(const Attractiveness& attract, const DesignProblem& problem,
                                     const FreezeSet& frozen, Rng& rng) {
    return construct_walk(attract, problem, frozen, rng).solution;
}

inline DesignSolution construct_path(const PheromoneMatrix& m, double alpha, const DesignProblem& problem,
                                     const FreezeSet& frozen, Rng& rng) {
    return construct_path(Attractiveness(m, alpha), problem, frozen, rng);
}

/// A canonical walk for `s` on the residual graph of `frozen`: unfrozen classes in
/// slot order, separated by delimiters 0, 1, ... in index order.
inline std::vector<std::uint32_t> path_vertices(const DesignProblem& problem, const DesignSolution& s,
                                                const FreezeSet& frozen = {}) {
    const PathGraph graph(problem);
    std::vector<std::uint32_t> seq;
    std::uint32_t slot = 0;
    for (std::uint32_t c = 0; c < s.classes.size(); ++c) {
        if (frozen.contains(c)) continue;
        if (slot > 0) seq.push_back(graph.delimiter(slot - 1));
        seq.insert(seq.end(), s.classes[c].begin(), s.classes[c].end());
        ++slot;
    }
    return seq;
}

inline void deposit(PheromoneMatrix& m, const DesignProblem& problem, const DesignSolution& path, double quality,
                    const AcoParams& params, const FreezeSet& frozen = {}) {
    const auto seq = path_vertices(problem, path, frozen);
    deposit(m, std::span<const std::uint32_t>(seq), quality, params);
}

}  // namespace iaco
