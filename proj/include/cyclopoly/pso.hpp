/*
 Copyright 2026 The cyclopoly Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cyclopoly/polytope.hpp"
#include "cyclopoly/rng.hpp"

namespace cyclopoly {

struct PsoParams {
    std::size_t population = 50;
    std::size_t max_iterations = 200;
    double inertia = 0.7;
    double cognitive = 2.0;
    double social = 2.0;
    /// Multiplies the lowest loss seen so far to give the penalty weight.
    double penalty_coefficient = 0.1;
    /// Per-coordinate velocity bound; 0 disables clamping.
    double velocity_limit = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (population < 2) {
            throw std::invalid_argument("pso: population must be >= 2");
        }
        if (max_iterations < 1) {
            throw std::invalid_argument("pso: max_iterations must be >= 1");
        }
        if (!(inertia > 0.0 && inertia <= 1.0)) {
            throw std::invalid_argument("pso: inertia must lie in (0, 1]");
        }
        if (!(cognitive > 0.0) || !(social > 0.0) || !(penalty_coefficient > 0.0)) {
            throw std::invalid_argument("pso: cognitive, social and penalty coefficients must be positive");
        }
        if (!(velocity_limit >= 0.0)) {
            throw std::invalid_argument("pso: velocity_limit must be >= 0");
        }
    }
};

struct ObjectiveReport {
    SimplexWeights best_weights;
    /// Objective at best_weights (no penalty: the point is feasible).
    double best_value = 0.0;
    /// Global-best penalized value after each iteration (index 0 = initial swarm).
    std::vector<double> value_history;
    std::size_t evaluations = 0;
};

/// Clamp negatives to zero and renormalize; uniform when nothing positive remains.
[[nodiscard]] inline SimplexWeights project_to_simplex(std::span<const double> raw) {
    if (raw.empty()) {
        throw std::invalid_argument("project_to_simplex: empty input");
    }
    std::vector<double> w(raw.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        w[i] = std::isfinite(raw[i]) ? std::max(raw[i], 0.0) : 0.0;
        sum += w[i];
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        return uniform_weights(raw.size());
    }
    for (auto& v : w) {
        v /= sum;
    }
    return SimplexWeights(std::move(w));
}

/// max(largest negativity, |sum - 1|) of a raw search point.
[[nodiscard]] inline double simplex_violation(std::span<const double> raw) {
    return validate_simplex(raw, 0.0).violation;
}

/// Objective values are kept finite so penalized values stay ordered.
inline constexpr double kObjectiveCeiling = 1e300;

/// loss(project(raw)) + rho * violation(raw)^2.
template <class Loss>
[[nodiscard]] double penalized_value(const Loss& loss, std::span<const double> raw, double rho) {
    const SimplexWeights w = project_to_simplex(raw);
    double value = loss(w);
    if (!std::isfinite(value)) {
        value = kObjectiveCeiling;
    }
    const double v = simplex_violation(raw);
    return std::min(value + rho * v * v, kObjectiveCeiling);
}

/**
 * Validation prediction error of a polytope model:
 *
 *   J(lambda) = sum_k |y_val(k) - y(k; lambda)|^2
 *
 * where y(.; lambda) is the noise-free zero-state response of
 * evaluate(polytope, lambda) to the validation inputs.
 */
class PredictionErrorObjective {
public:
    PredictionErrorObjective(PolytopeModel polytope, Matrix validation_inputs, Matrix validation_outputs)
        : polytope_(std::move(polytope)),
          inputs_(std::move(validation_inputs)),
          outputs_(std::move(validation_outputs)) {
        const BaseDims dims = polytope_.vertex_set().dims();
        if (inputs_.rows() != dims.m || outputs_.rows() != dims.q || inputs_.cols() != outputs_.cols()) {
            throw DimensionError("prediction objective: validation record is " + detail::shape(inputs_) + " / " +
                                 detail::shape(outputs_) + " for a model with m = " + std::to_string(dims.m) +
                                 ", q = " + std::to_string(dims.q));
        }
    }

    /// J at a feasible point.
    [[nodiscard]] double operator()(const SimplexWeights& weights) const {
        const StateSpaceModel model = evaluate(polytope_, weights);
        const Matrix predicted = simulate_outputs(model, inputs_);
        const double j = (outputs_ - predicted).squaredNorm();
        return std::isfinite(j) ? j : kObjectiveCeiling;
    }

    /// Penalized J at a raw search point.
    [[nodiscard]] double penalized(std::span<const double> raw, double rho) const {
        if (raw.size() != polytope_.size()) {
            throw DimensionError("prediction objective: expected " + std::to_string(polytope_.size()) + " weights");
        }
        return penalized_value(*this, raw, rho);
    }

    [[nodiscard]] const PolytopeModel& polytope() const noexcept { return polytope_; }

private:
    PolytopeModel polytope_;
    Matrix inputs_;
    Matrix outputs_;
};

/**
 * Global-best particle swarm over raw weight vectors.
 *
 *   v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x),   x <- x + v
 *
 * Every particle owns a generator seeded from (params.seed, particle index),
 * so results do not depend on evaluation order. Positions start uniformly on
 * the simplex (normalized unit exponentials) with zero velocity. Each
 * position is scored at its simplex projection plus a quadratic penalty on
 * the raw violation, weighted by penalty_coefficient times the lowest loss
 * seen so far. The reported optimum is the projection of the global best
 * position.
 */
template <class Loss>
[[nodiscard]] ObjectiveReport optimize(const Loss& loss, std::size_t dimension, const PsoParams& params) {
    params.validate();
    if (dimension < 1) {
        throw std::invalid_argument("pso: dimension must be >= 1");
    }
    const std::size_t np = params.population;
    std::vector<Rng> rngs;
    rngs.reserve(np);
    for (std::size_t p = 0; p < np; ++p) {
        rngs.emplace_back(derive_seed(params.seed, p));
    }

    std::vector<std::vector<double>> x(np, std::vector<double>(dimension));
    std::vector<std::vector<double>> v(np, std::vector<double>(dimension, 0.0));
    for (std::size_t p = 0; p < np; ++p) {
        double sum = 0.0;
        for (auto& xi : x[p]) {
            xi = rngs[p].exponential();
            sum += xi;
        }
        for (auto& xi : x[p]) {
            xi /= sum;
        }
    }

    ObjectiveReport report{uniform_weights(dimension), 0.0, {}, 0};
    // Loss at the projection and raw violation, kept apart so the penalty
    // weight can shrink as the best loss improves.
    std::vector<double> loss_now(np);
    std::vector<double> viol_now(np);
    const auto score = [&](std::size_t p) {
        const double l = loss(project_to_simplex(x[p]));
        loss_now[p] = std::isfinite(l) ? std::min(l, kObjectiveCeiling) : kObjectiveCeiling;
        viol_now[p] = simplex_violation(x[p]);
    };
    double best_loss = kObjectiveCeiling;
    const auto weight = [&] {
        return params.penalty_coefficient * (best_loss < kObjectiveCeiling ? best_loss : 1.0);
    };
    const auto penalized = [](double l, double viol, double rho) {
        return std::min(l + rho * viol * viol, kObjectiveCeiling);
    };

    for (std::size_t p = 0; p < np; ++p) {
        score(p);
        best_loss = std::min(best_loss, loss_now[p]);
    }
    report.evaluations += np;
    double rho = weight();

    std::vector<std::vector<double>> pbest = x;
    std::vector<double> pbest_loss = loss_now;
    std::vector<double> pbest_viol = viol_now;
    std::vector<double> gbest;
    double gbest_value = 0.0;
    const auto select_gbest = [&] {
        std::size_t g = 0;
        double g_value = penalized(pbest_loss[0], pbest_viol[0], rho);
        for (std::size_t p = 1; p < np; ++p) {
            const double value = penalized(pbest_loss[p], pbest_viol[p], rho);
            if (value < g_value) {
                g = p;
                g_value = value;
            }
        }
        gbest = pbest[g];
        gbest_value = g_value;
    };
    select_gbest();
    report.value_history.push_back(gbest_value);

    std::vector<double> r1(dimension);
    std::vector<double> r2(dimension);
    for (std::size_t it = 0; it < params.max_iterations; ++it) {
        for (std::size_t p = 0; p < np; ++p) {
            for (std::size_t d = 0; d < dimension; ++d) {
                r1[d] = rngs[p].uniform();
                r2[d] = rngs[p].uniform();
            }
            for (std::size_t d = 0; d < dimension; ++d) {
                double vel = params.inertia * v[p][d] + params.cognitive * r1[d] * (pbest[p][d] - x[p][d]) +
                             params.social * r2[d] * (gbest[d] - x[p][d]);
                if (params.velocity_limit > 0.0) {
                    vel = std::clamp(vel, -params.velocity_limit, params.velocity_limit);
                }
                v[p][d] = vel;
                x[p][d] += vel;
            }
            score(p);
        }
        report.evaluations += np;
        // Synchronous update: the swarm sees the previous iteration's gbest.
        // rho never grows, so re-scoring the personal bests keeps the history monotone.
        for (std::size_t p = 0; p < np; ++p) {
            best_loss = std::min(best_loss, loss_now[p]);
        }
        rho = weight();
        for (std::size_t p = 0; p < np; ++p) {
            if (penalized(loss_now[p], viol_now[p], rho) < penalized(pbest_loss[p], pbest_viol[p], rho)) {
                pbest[p] = x[p];
                pbest_loss[p] = loss_now[p];
                pbest_viol[p] = viol_now[p];
            }
        }
        select_gbest();
        report.value_history.push_back(gbest_value);
    }

    report.best_weights = project_to_simplex(gbest);
    report.best_value = loss(report.best_weights);
    return report;
}

}  // namespace cyclopoly
