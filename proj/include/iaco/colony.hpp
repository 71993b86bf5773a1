#pragma once

#include <memory>
#include <optional>
#include <thread>

#include "construction.hpp"
#include "fitness.hpp"
#include "pareto.hpp"

namespace iaco {

struct EvaluatedPath {
    DesignSolution solution;
    MetricVector metrics;
    double quality = 0.0;
    std::vector<std::uint32_t> vertices;
};

struct BestSolution {
    DesignSolution solution;
    MetricVector metrics;
    double quality = 0.0;
    std::uint64_t iteration = 0;

    bool operator==(const BestSolution&) const = default;
};

struct ColonySnapshot {
    std::uint64_t iteration = 0;
    std::vector<EvaluatedPath> paths;
    std::size_t iteration_best = 0;
    std::optional<BestSolution> best_so_far;

    const EvaluatedPath& best_path() const { return paths.at(iteration_best); }
};

/// MMAS-style colony: every ant builds a path from a shared trail snapshot, then the
/// iteration-best ant alone deposits after evaporation. Ant k of iteration t draws from
/// its own stream derive_seed(seed, t, k), so results do not depend on thread count.
class Colony {
public:
    Colony(std::shared_ptr<const DesignProblem> problem, AcoParams params, std::uint64_t seed, unsigned threads = 1)
        : problem_(std::move(problem)),
          params_(params),
          seed_(derive_seed(seed, static_cast<std::uint64_t>(Stream::ants))),
          threads_(std::max(1u, threads)),
          pheromone_(init_pheromone(*problem_, params_)) {}

    const DesignProblem& problem() const { return *problem_; }
    const AcoParams& params() const { return params_; }
    const PheromoneMatrix& pheromone() const { return pheromone_; }
    std::uint64_t iteration() const { return snapshot_.iteration; }
    const ColonySnapshot& snapshot() const { return snapshot_; }
    const std::optional<BestSolution>& best_so_far() const { return snapshot_.best_so_far; }

    const ColonySnapshot& run_iteration(const WeightVector& weights, const FreezeSet& frozen) {
        validate(weights);
        const std::uint64_t t = snapshot_.iteration + 1;
        const Attractiveness attract(pheromone_, params_.alpha);
        std::vector<EvaluatedPath> paths(params_.colony_size);

        const auto build = [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; ++k) {
                Rng rng(derive_seed(seed_, t, k));
                auto walk = construct_walk(attract, *problem_, frozen, rng);
                const auto m = metric_vector(*problem_, walk.solution);
                paths[k] = {std::move(walk.solution), m, combined_score(m, weights), std::move(walk.vertices)};
            }
        };
        if (threads_ == 1 || paths.size() < 2) {
            build(0, paths.size());
        } else {
            std::vector<std::jthread> workers;
            const std::size_t n = paths.size();
            const std::size_t chunk = (n + threads_ - 1) / threads_;
            for (std::size_t b = 0; b < n; b += chunk) workers.emplace_back(build, b, std::min(n, b + chunk));
        }

        std::size_t best = 0;
        for (std::size_t k = 1; k < paths.size(); ++k) {
            if (paths[k].quality > paths[best].quality) best = k;
        }

        pheromone_.evaporate(params_.sigma);
        deposit(pheromone_, std::span<const std::uint32_t>(paths[best].vertices), paths[best].quality, params_);

        snapshot_.iteration = t;
        snapshot_.paths = std::move(paths);
        snapshot_.iteration_best = best;
        const auto& ib = snapshot_.paths[best];
        if (!snapshot_.best_so_far || ib.quality > snapshot_.best_so_far->quality) {
            snapshot_.best_so_far = BestSolution{ib.solution, ib.metrics, ib.quality, t};
        }
        return snapshot_;
    }

    /// Re-scores the retained best-so-far under new weights.
    void rescore(const WeightVector& weights) {
        if (snapshot_.best_so_far) snapshot_.best_so_far->quality = combined_score(snapshot_.best_so_far->metrics, weights);
    }

private:
    std::shared_ptr<const DesignProblem> problem_;
    AcoParams params_;
    std::uint64_t seed_;
    unsigned threads_;
    PheromoneMatrix pheromone_;
    ColonySnapshot snapshot_;
};

/// Uniform draw from the non-dominated paths of an iteration.
inline const EvaluatedPath& select_display_candidate(const ColonySnapshot& snapshot, Rng& rng) {
    if (snapshot.paths.empty()) throw SessionError("no evaluated paths to display");
    std::vector<MetricVector> metrics;
    metrics.reserve(snapshot.paths.size());
    for (const auto& p : snapshot.paths) metrics.push_back(p.metrics);
    const auto front = non_dominated(metrics);
    return snapshot.paths[front[rng.below(front.size())]];
}

}  // namespace iaco
