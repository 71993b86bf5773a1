#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fitness.hpp"

namespace iaco {

struct Observation {
    double cbo = 0.0;
    double nac = 0.0;
    double atmr = 0.0;
    double rating = 0.0;

    bool operator==(const Observation&) const = default;
};

/// rating ~ a0 + a1 * cbo + a2 * nac + a3 * atmr
struct Coefficients {
    double a0 = 0.0;
    double a1 = 0.34;
    double a2 = 0.33;
    double a3 = 0.33;

    double predict(const MetricVector& m) const { return a0 + a1 * m.cbo + a2 * m.nac + a3 * m.atmr; }

    bool operator==(const Coefficients&) const = default;
};

inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 100;
inline constexpr std::size_t kMinObservationsForFit = 4;

/// Ordinary least squares over all observations, or nullopt when there are fewer
/// than four observations or the design matrix is rank deficient.
inline std::optional<Coefficients> least_squares_fit(const std::vector<Observation>& obs) {
    if (obs.size() < kMinObservationsForFit) return std::nullopt;
    const auto n = static_cast<Eigen::Index>(obs.size());
    Eigen::MatrixXd x(n, 4);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& o = obs[static_cast<std::size_t>(i)];
        x(i, 0) = 1.0;
        x(i, 1) = o.cbo;
        x(i, 2) = o.nac;
        x(i, 3) = o.atmr;
        y(i) = o.rating;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < 4) return std::nullopt;
    const Eigen::VectorXd a = qr.solve(y);
    if (!a.allFinite()) return std::nullopt;
    return Coefficients{a(0), a(1), a(2), a(3)};
}

/// Keeps `previous` whenever a fit is not possible.
inline Coefficients refit_surrogate(const std::vector<Observation>& obs, const Coefficients& previous = {}) {
    return least_squares_fit(obs).value_or(previous);
}

/// Normalized coefficient magnitudes; previous weights when all three vanish.
inline WeightVector weights_from_coefficients(double a1, double a2, double a3, const WeightVector& previous = {}) {
    const double total = std::abs(a1) + std::abs(a2) + std::abs(a3);
    if (!(total > 0.0) || !std::isfinite(total)) return previous;
    return {std::abs(a1) / total, std::abs(a2) / total, std::abs(a3) / total};
}

/// Linear model of designer ratings together with its observation log.
class SurrogateModel {
public:
    const Coefficients& coefficients() const { return coefficients_; }
    const std::vector<Observation>& observations() const { return observations_; }

    /// Appends one rating and refits.
    void record_evaluation(const MetricVector& m, int rating) {
        if (rating < kMinRating || rating > kMaxRating) throw ValidationError("rating must be an integer in [1, 100]");
        observations_.push_back({m.cbo, m.nac, m.atmr, static_cast<double>(rating)});
        coefficients_ = refit_surrogate(observations_, coefficients_);
    }

    WeightVector weights(const WeightVector& previous) const {
        return weights_from_coefficients(coefficients_.a1, coefficients_.a2, coefficients_.a3, previous);
    }

    bool operator==(const SurrogateModel&) const = default;

private:
    Coefficients coefficients_;
    std::vector<Observation> observations_;
};

}  // namespace iaco
