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

#include <string>
#include <vector>

#include "cyclopoly/state_space.hpp"

namespace cyclopoly {

/// (n, m, q) of the underlying per-phase model.
struct BaseDims {
    Index n = 0;
    Index m = 0;
    Index q = 0;

    friend bool operator==(const BaseDims&, const BaseDims&) = default;
};

/**
 * Lifted matrices of a period-N cyclic reformulation.
 *
 * Block layout (blocks n x n, n x m, q x n, q x m; indices mod N):
 *   A: phase i sits at block (i+1, i)
 *   B: phase i sits at block (i+1, i)
 *   C, D: phase i sits on diagonal block (i, i)
 *
 * Identified or transformed systems keep the dimensions but may carry
 * entries outside this pattern.
 */
class CycledSystem {
public:
    CycledSystem(Matrix a, Matrix b, Matrix c, Matrix d, Index period, BaseDims base)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), period_(period), base_(base) {
        if (period_ < 1) {
            throw std::invalid_argument("cycled system: period must be >= 1");
        }
        const Index nn = period_ * base_.n;
        const Index nm = period_ * base_.m;
        const Index nq = period_ * base_.q;
        if (base_.n < 1 || base_.m < 1 || base_.q < 1 || a_.rows() != nn || a_.cols() != nn || b_.rows() != nn ||
            b_.cols() != nm || c_.rows() != nq || c_.cols() != nn || d_.rows() != nq || d_.cols() != nm) {
            throw DimensionError("cycled system dimensions do not match period " + std::to_string(period_) +
                                 " and base dims (" + std::to_string(base_.n) + ", " + std::to_string(base_.m) +
                                 ", " + std::to_string(base_.q) + ")");
        }
    }

    /// Wraps a lifted-order estimate (order N*n) as a cycled system.
    CycledSystem(const StateSpaceModel& lifted, Index period, BaseDims base)
        : CycledSystem(lifted.A(), lifted.B(), lifted.C(), lifted.D(), period, base) {}

    [[nodiscard]] const Matrix& A() const noexcept { return a_; }
    [[nodiscard]] const Matrix& B() const noexcept { return b_; }
    [[nodiscard]] const Matrix& C() const noexcept { return c_; }
    [[nodiscard]] const Matrix& D() const noexcept { return d_; }
    [[nodiscard]] Index period() const noexcept { return period_; }
    [[nodiscard]] const BaseDims& base() const noexcept { return base_; }

    [[nodiscard]] StateSpaceModel as_model() const { return {a_, b_, c_, d_}; }

private:
    Matrix a_, b_, c_, d_;
    Index period_;
    BaseDims base_;
};

/// The N per-phase models read out of a cycled system, in phase order.
class VertexSet {
public:
    explicit VertexSet(std::vector<StateSpaceModel> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.empty()) {
            throw std::invalid_argument("vertex set must not be empty");
        }
        const auto& v0 = vertices_.front();
        for (const auto& v : vertices_) {
            if (v.states() != v0.states() || v.inputs() != v0.inputs() || v.outputs() != v0.outputs()) {
                throw DimensionError("vertex set: vertices differ in (n, m, q)");
            }
        }
    }

    [[nodiscard]] const std::vector<StateSpaceModel>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] Index period() const noexcept { return static_cast<Index>(vertices_.size()); }
    [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }
    [[nodiscard]] const StateSpaceModel& operator[](std::size_t i) const { return vertices_.at(i); }
    [[nodiscard]] BaseDims dims() const {
        const auto& v = vertices_.front();
        return {v.states(), v.inputs(), v.outputs()};
    }

private:
    std::vector<StateSpaceModel> vertices_;
};

/// Column k of the result holds signal(:, k) in block (k mod N), zeros elsewhere.
[[nodiscard]] inline Matrix cycle_signal(const Matrix& signal, Index period) {
    if (period < 1) {
        throw std::invalid_argument("cycle_signal: period must be >= 1");
    }
    if (signal.cols() == 0 || signal.rows() == 0) {
        throw LengthError("cycle_signal: empty signal");
    }
    const Index d = signal.rows();
    Matrix out = Matrix::Zero(d * period, signal.cols());
    for (Index k = 0; k < signal.cols(); ++k) {
        out.block((k % period) * d, k, d, 1) = signal.col(k);
    }
    return out;
}

/// Inverse of cycle_signal: reads block (k mod N) of each column.
[[nodiscard]] inline Matrix uncycle_signal(const Matrix& cycled, Index period) {
    if (period < 1 || cycled.rows() % period != 0) {
        throw DimensionError("uncycle_signal: row count " + std::to_string(cycled.rows()) +
                             " is not a multiple of the period");
    }
    const Index d = cycled.rows() / period;
    Matrix out(d, cycled.cols());
    for (Index k = 0; k < cycled.cols(); ++k) {
        out.col(k) = cycled.block((k % period) * d, k, d, 1);
    }
    return out;
}

/// N*d x N*d block permutation with I_d on the first block superdiagonal and in the bottom-left corner.
[[nodiscard]] inline Matrix cyclic_shift_matrix(Index d, Index period) {
    if (d < 1 || period < 1) {
        throw std::invalid_argument("cyclic_shift_matrix: d and period must be >= 1");
    }
    Matrix s = Matrix::Zero(d * period, d * period);
    for (Index r = 0; r < period; ++r) {
        const Index c = (r + 1) % period;
        s.block(r * d, c * d, d, d) += Matrix::Identity(d, d);
    }
    return s;
}

/// Shift matrix raised to `power` (power >= 0), built directly as a permutation.
[[nodiscard]] inline Matrix cyclic_shift_power(Index d, Index period, Index power) {
    if (power < 0) {
        throw std::invalid_argument("cyclic_shift_power: power must be >= 0");
    }
    Matrix s = Matrix::Zero(d * period, d * period);
    for (Index r = 0; r < period; ++r) {
        const Index c = (r + power) % period;
        s.block(r * d, c * d, d, d) += Matrix::Identity(d, d);
    }
    return s;
}

/// Cyclic reformulation of an LTI model: every phase equals (A, B, C, D).
[[nodiscard]] inline CycledSystem build_ideal_cyclic(const StateSpaceModel& model, Index period) {
    if (period < 1) {
        throw std::invalid_argument("build_ideal_cyclic: period must be >= 1");
    }
    const Index n = model.states();
    const Index m = model.inputs();
    const Index q = model.outputs();
    Matrix a = Matrix::Zero(period * n, period * n);
    Matrix b = Matrix::Zero(period * n, period * m);
    Matrix c = Matrix::Zero(period * q, period * n);
    Matrix d = Matrix::Zero(period * q, period * m);
    for (Index i = 0; i < period; ++i) {
        const Index next = (i + 1) % period;
        a.block(next * n, i * n, n, n) = model.A();
        b.block(next * n, i * m, n, m) = model.B();
        c.block(i * q, i * n, q, n) = model.C();
        d.block(i * q, i * m, q, m) = model.D();
    }
    return {std::move(a), std::move(b), std::move(c), std::move(d), period, BaseDims{n, m, q}};
}

namespace detail {

/// Frobenius norm of `m` outside the blocks (i + row_shift mod N, i).
inline double off_pattern_norm(const Matrix& m, Index period, Index rb, Index cb, Index row_shift) {
    double total = 0.0;
    for (Index br = 0; br < period; ++br) {
        for (Index bc = 0; bc < period; ++bc) {
            if (br == (bc + row_shift) % period) {
                continue;
            }
            total += m.block(br * rb, bc * cb, rb, cb).squaredNorm();
        }
    }
    return std::sqrt(total);
}

}  // namespace detail

struct PhaseExtraction {
    VertexSet vertex_set;
    /// Frobenius norm of every entry of (A, B, C, D) outside the cyclic pattern.
    double structure_residual = 0.0;
};

/// Reads vertex i from A/B block (i+1 mod N, i) and C/D diagonal block i.
[[nodiscard]] inline PhaseExtraction extract_phase_parameters(const CycledSystem& cycled) {
    const Index period = cycled.period();
    const auto [n, m, q] = cycled.base();
    std::vector<StateSpaceModel> vertices;
    vertices.reserve(static_cast<std::size_t>(period));
    for (Index i = 0; i < period; ++i) {
        const Index next = (i + 1) % period;
        vertices.emplace_back(cycled.A().block(next * n, i * n, n, n), cycled.B().block(next * n, i * m, n, m),
                              cycled.C().block(i * q, i * n, q, n), cycled.D().block(i * q, i * m, q, m));
    }
    const double ra = detail::off_pattern_norm(cycled.A(), period, n, n, 1);
    const double rb = detail::off_pattern_norm(cycled.B(), period, n, m, 1);
    const double rc = detail::off_pattern_norm(cycled.C(), period, q, n, 0);
    const double rd = detail::off_pattern_norm(cycled.D(), period, q, m, 0);
    return {VertexSet(std::move(vertices)), std::sqrt(ra * ra + rb * rb + rc * rc + rd * rd)};
}

/**
 * Sparsity check on the lifted Markov parameters: forms
 * S_q^i * H(i+j) * S_m^j for the ideal cycled system and returns the
 * Frobenius norm of its off-block-diagonal part (zero in exact arithmetic).
 */
[[nodiscard]] inline double markov_sparsity_residual(const StateSpaceModel& model, Index period, Index i, Index j) {
    if (i < 0 || j < 0) {
        throw std::invalid_argument("markov_sparsity_residual: i, j must be >= 0");
    }
    const CycledSystem cyc = build_ideal_cyclic(model, period);
    const auto h = markov_parameters(cyc.as_model(), i + j + 1);
    const Matrix shaped = cyclic_shift_power(model.outputs(), period, i) * h.back() *
                          cyclic_shift_power(model.inputs(), period, j);
    return detail::off_pattern_norm(shaped, period, model.outputs(), model.inputs(), 0);
}

}  // namespace cyclopoly
