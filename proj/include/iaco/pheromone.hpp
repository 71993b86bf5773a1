#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "problem.hpp"

namespace iaco {

/// Search parameters. Defaults are the reference settings.
struct AcoParams {
    std::uint32_t colony_size = 100;  // ants per iteration
    double alpha = 1.5;               // exponent applied to trails during construction
    double mu = 3.0;                  // deposit scale
    double sigma = 0.035;             // evaporation rate
    double t_min = 0.5;
    double t_max = 3.5;

    bool operator==(const AcoParams&) const = default;
};

inline void validate(const AcoParams& p) {
    if (p.colony_size < 1) throw ValidationError("colony size must be at least 1");
    if (!(p.alpha > 0.0)) throw ValidationError("alpha must be positive");
    if (!(p.mu > 0.0)) throw ValidationError("mu must be positive");
    if (!(p.sigma > 0.0 && p.sigma < 1.0)) throw ValidationError("sigma must lie in (0, 1)");
    if (!(p.t_min > 0.0 && p.t_min < p.t_max)) throw ValidationError("trail limits must satisfy 0 < tmin < tmax");
    if (!std::isfinite(p.t_max)) throw ValidationError("tmax must be finite");
}

/// Vertex layout of the construction graph: attributes, then methods, then
/// class_count - 1 end-of-class delimiters. The end of the path closes the last class.
struct PathGraph {
    std::uint32_t elements = 0;
    std::uint32_t classes = 1;

    explicit PathGraph(const DesignProblem& p) : elements(p.element_count()), classes(p.class_count) {}

    std::uint32_t delimiter_count() const { return classes - 1; }
    std::uint32_t vertex_count() const { return elements + delimiter_count(); }
    std::uint32_t delimiter(std::uint32_t k) const { return elements + k; }
    bool is_delimiter(std::uint32_t v) const { return v >= elements; }
};

/// Symmetric trail strengths kept inside [t_min, t_max]. The diagonal is unused.
class PheromoneMatrix {
public:
    PheromoneMatrix(std::uint32_t vertices, double t_min, double t_max)
        : size_(vertices), t_min_(t_min), t_max_(t_max), trails_(std::size_t{vertices} * vertices, t_max) {}

    std::uint32_t size() const { return size_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }

    double operator()(std::uint32_t i, std::uint32_t j) const { return trails_[index(i, j)]; }

    /// Adds `amount` to the undirected edge {i, j}, capped at t_max.
    void reinforce(std::uint32_t i, std::uint32_t j, double amount) {
        const double v = std::min(t_max_, trails_[index(i, j)] + amount);
        trails_[index(i, j)] = v;
        trails_[index(j, i)] = v;
    }

    /// entry <- max(t_min, (1 - rate) * entry)
    void evaporate(double rate) {
        const double keep = 1.0 - rate;
        for (double& t : trails_) t = std::max(t_min_, keep * t);
    }

    /// Largest and smallest off-diagonal entries.
    std::pair<double, double> extent() const {
        double lo = t_max_, hi = t_min_;
        for (std::uint32_t i = 0; i < size_; ++i) {
            for (std::uint32_t j = 0; j < size_; ++j) {
                if (i == j) continue;
                lo = std::min(lo, (*this)(i, j));
                hi = std::max(hi, (*this)(i, j));
            }
        }
        return {lo, hi};
    }

    const std::vector<double>& raw() const { return trails_; }

    bool operator==(const PheromoneMatrix&) const = default;

private:
    std::size_t index(std::uint32_t i, std::uint32_t j) const { return std::size_t{i} * size_ + j; }

    std::uint32_t size_;
    double t_min_;
    double t_max_;
    std::vector<double> trails_;
};

/// Every off-diagonal entry starts at t_max.
inline PheromoneMatrix init_pheromone(const DesignProblem& problem, const AcoParams& params) {
    validate(params);
    return PheromoneMatrix(PathGraph(problem).vertex_count(), params.t_min, params.t_max);
}

inline void evaporate(PheromoneMatrix& m, const AcoParams& params) { m.evaporate(params.sigma); }

/// Reinforces each consecutive pair of the vertex sequence by mu * quality.
inline void deposit(PheromoneMatrix& m, std::span<const std::uint32_t> vertices, double quality,
                    const AcoParams& params) {
    if (!(quality >= 0.0 && quality <= 1.0)) throw ValidationError("deposit quality must lie in [0, 1]");
    if (quality == 0.0) return;
    for (std::size_t k = 1; k < vertices.size(); ++k) {
        if (vertices[k - 1] != vertices[k]) m.reinforce(vertices[k - 1], vertices[k], params.mu * quality);
    }
}

/// trail^alpha for every pair, computed once per iteration and shared by all ants.
class Attractiveness {
public:
    Attractiveness(const PheromoneMatrix& m, double alpha) : size_(m.size()), values_(m.raw().size()) {
        for (std::size_t k = 0; k < values_.size(); ++k) values_[k] = std::pow(m.raw()[k], alpha);
    }

    std::uint32_t size() const { return size_; }
    double operator()(std::uint32_t i, std::uint32_t j) const { return values_[std::size_t{i} * size_ + j]; }

private:
    std::uint32_t size_;
    std::vector<double> values_;
};

}  // namespace iaco
