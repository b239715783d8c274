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
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cyclopoly/cyclic.hpp"

namespace cyclopoly {

/// Outcome of a simplex membership test.
struct SimplexCheck {
    bool valid = false;
    /// max(largest negativity, |sum - 1|)
    double violation = 0.0;
    double sum = 0.0;
};

[[nodiscard]] inline SimplexCheck validate_simplex(std::span<const double> weights, double tolerance) {
    SimplexCheck c;
    double negativity = 0.0;
    for (const double w : weights) {
        if (!std::isfinite(w)) {
            c.violation = std::numeric_limits<double>::infinity();
            c.sum = std::numeric_limits<double>::quiet_NaN();
            return c;
        }
        c.sum += w;
        negativity = std::max(negativity, -w);
    }
    c.violation = std::max(negativity, std::abs(c.sum - 1.0));
    c.valid = !weights.empty() && negativity <= tolerance && std::abs(c.sum - 1.0) <= tolerance;
    return c;
}

/// A point of the standard simplex (lambda_i >= 0, sum lambda_i = 1).
class SimplexWeights {
public:
    static constexpr double kSumTolerance = 1e-10;
    static constexpr double kNegativeSlack = 1e-12;

    explicit SimplexWeights(std::vector<double> weights) : w_(std::move(weights)) {
        if (w_.empty()) {
            throw std::invalid_argument("simplex weights must not be empty");
        }
        double sum = 0.0;
        for (const double v : w_) {
            if (!std::isfinite(v) || v < -kNegativeSlack) {
                throw std::invalid_argument("simplex weights must be finite and nonnegative");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kSumTolerance) {
            throw std::invalid_argument("simplex weights must sum to 1 (sum = " + std::to_string(sum) + ")");
        }
    }

    /// The vertex e_i of the N-simplex.
    [[nodiscard]] static SimplexWeights unit(std::size_t size, std::size_t i) {
        std::vector<double> w(size, 0.0);
        w.at(i) = 1.0;
        return SimplexWeights(std::move(w));
    }

    [[nodiscard]] std::span<const double> values() const noexcept { return w_; }
    [[nodiscard]] std::size_t size() const noexcept { return w_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return w_.at(i); }

    friend bool operator==(const SimplexWeights&, const SimplexWeights&) = default;

private:
    std::vector<double> w_;
};

/// 1/N everywhere; the last entry absorbs rounding so the sum is exactly 1.
[[nodiscard]] inline SimplexWeights uniform_weights(std::size_t count) {
    if (count < 1) {
        throw std::invalid_argument("uniform_weights: count must be >= 1");
    }
    std::vector<double> w(count, 1.0 / static_cast<double>(count));
    const double head = std::accumulate(w.begin(), w.end() - 1, 0.0);
    w.back() = 1.0 - head;
    return SimplexWeights(std::move(w));
}

/// Matrix polytope spanned by a vertex set: M(lambda) = sum lambda_i M_i for M in {A, B, C, D}.
class PolytopeModel {
public:
    explicit PolytopeModel(VertexSet vertices) : vertices_(std::move(vertices)) {}

    [[nodiscard]] const VertexSet& vertex_set() const noexcept { return vertices_; }
    [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }

private:
    VertexSet vertices_;
};

[[nodiscard]] inline StateSpaceModel evaluate(const PolytopeModel& polytope, const SimplexWeights& weights) {
    const auto& vs = polytope.vertex_set().vertices();
    if (weights.size() != vs.size()) {
        throw DimensionError("polytope evaluate: " + std::to_string(weights.size()) + " weights for " +
                             std::to_string(vs.size()) + " vertices");
    }
    Matrix a = Matrix::Zero(vs[0].states(), vs[0].states());
    Matrix b = Matrix::Zero(vs[0].states(), vs[0].inputs());
    Matrix c = Matrix::Zero(vs[0].outputs(), vs[0].states());
    Matrix d = Matrix::Zero(vs[0].outputs(), vs[0].inputs());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const double w = weights[i];
        a += w * vs[i].A();
        b += w * vs[i].B();
        c += w * vs[i].C();
        d += w * vs[i].D();
    }
    return {std::move(a), std::move(b), std::move(c), std::move(d)};
}

/// Raw-weight overload: rejects points that violate the simplex beyond SimplexWeights' slack.
[[nodiscard]] inline StateSpaceModel evaluate(const PolytopeModel& polytope, std::span<const double> raw) {
    if (raw.size() != polytope.size()) {
        throw DimensionError("polytope evaluate: " + std::to_string(raw.size()) + " weights for " +
                             std::to_string(polytope.size()) + " vertices");
    }
    return evaluate(polytope, SimplexWeights(std::vector<double>(raw.begin(), raw.end())));
}

}  // namespace cyclopoly
