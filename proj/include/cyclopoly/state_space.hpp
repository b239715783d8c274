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
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cyclopoly/errors.hpp"
#include "cyclopoly/linalg.hpp"
#include "cyclopoly/rng.hpp"

namespace cyclopoly {

namespace detail {

inline std::string shape(const Matrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

}  // namespace detail

/**
 * Discrete-time LTI model
 *
 *   x(k+1) = A x(k) + B u(k)
 *   y(k)   = C x(k) + D u(k)
 *
 * with n states, m inputs and q outputs. Construction checks that the four
 * matrices agree on (n, m, q) and that every entry is finite; the matrices
 * are immutable afterwards.
 */
class StateSpaceModel {
public:
    StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
        const Index n = a_.rows();
        const Index m = b_.cols();
        const Index q = c_.rows();
        if (n < 1 || m < 1 || q < 1) {
            throw DimensionError("state-space model needs n, m, q >= 1");
        }
        if (a_.cols() != n || b_.rows() != n || c_.cols() != n || d_.rows() != q || d_.cols() != m) {
            throw DimensionError("inconsistent state-space dimensions: A " + detail::shape(a_) + ", B " +
                                 detail::shape(b_) + ", C " + detail::shape(c_) + ", D " +
                                 detail::shape(d_));
        }
        if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite() || !d_.allFinite()) {
            throw std::invalid_argument("state-space model has non-finite entries");
        }
    }

    [[nodiscard]] const Matrix& A() const noexcept { return a_; }
    [[nodiscard]] const Matrix& B() const noexcept { return b_; }
    [[nodiscard]] const Matrix& C() const noexcept { return c_; }
    [[nodiscard]] const Matrix& D() const noexcept { return d_; }

    [[nodiscard]] Index states() const noexcept { return a_.rows(); }
    [[nodiscard]] Index inputs() const noexcept { return b_.cols(); }
    [[nodiscard]] Index outputs() const noexcept { return c_.rows(); }

    friend bool operator==(const StateSpaceModel& l, const StateSpaceModel& r) {
        return l.a_ == r.a_ && l.b_ == r.b_ && l.c_ == r.c_ && l.d_ == r.d_;
    }

private:
    Matrix a_, b_, c_, d_;
};

/// Paired input/output samples; column k holds u(k) (resp. y(k)).
class SignalRecord {
public:
    SignalRecord(Matrix inputs, Matrix outputs) : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
        if (inputs_.cols() != outputs_.cols()) {
            throw DimensionError("signal record: " + std::to_string(inputs_.cols()) + " input samples vs " +
                                 std::to_string(outputs_.cols()) + " output samples");
        }
    }

    [[nodiscard]] const Matrix& inputs() const noexcept { return inputs_; }
    [[nodiscard]] const Matrix& outputs() const noexcept { return outputs_; }
    [[nodiscard]] Index length() const noexcept { return inputs_.cols(); }
    [[nodiscard]] Index input_dim() const noexcept { return inputs_.rows(); }
    [[nodiscard]] Index output_dim() const noexcept { return outputs_.rows(); }

private:
    Matrix inputs_;
    Matrix outputs_;
};

/// i.i.d. Gaussian noise per element. std_dev == 0 gives exactly `mean`.
struct NoiseSpec {
    double mean = 0.0;
    double std_dev = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(std_dev >= 0.0) || !std::isfinite(std_dev) || !std::isfinite(mean)) {
            throw std::invalid_argument("noise spec needs finite mean and std_dev >= 0");
        }
    }

    [[nodiscard]] bool is_zero() const noexcept { return mean == 0.0 && std_dev == 0.0; }
};

/// dim x length matrix of i.i.d. N(mean, std_dev^2) samples, filled column by column.
[[nodiscard]] inline Matrix generate_gaussian_signal(Index dim, Index length, double mean, double std_dev,
                                                     std::uint64_t seed) {
    if (dim < 1) {
        throw std::invalid_argument("gaussian signal: dimension must be positive");
    }
    if (length < 1) {
        throw LengthError("gaussian signal: length must be positive, got " + std::to_string(length));
    }
    NoiseSpec{mean, std_dev, seed}.validate();
    Rng rng(seed);
    Matrix out(dim, length);
    for (Index k = 0; k < length; ++k) {
        for (Index r = 0; r < dim; ++r) {
            out(r, k) = rng.normal(mean, std_dev);
        }
    }
    return out;
}

/// Noise-free response from x0 (zero when omitted). Column k of the result is y(k).
[[nodiscard]] inline Matrix simulate_outputs(const StateSpaceModel& model, const Matrix& inputs,
                                             const std::optional<Vector>& x0 = std::nullopt) {
    if (inputs.rows() != model.inputs()) {
        throw DimensionError("simulate: input dimension " + std::to_string(inputs.rows()) + " != m = " +
                             std::to_string(model.inputs()));
    }
    Vector x = x0.value_or(Vector::Zero(model.states()));
    if (x.size() != model.states()) {
        throw DimensionError("simulate: x0 has size " + std::to_string(x.size()) + ", expected n = " +
                             std::to_string(model.states()));
    }
    // Plain loops: this is the inner loop of the weight search, where the
    // models are tiny and expression-template overhead dominates.
    const Index n = model.states();
    const Index m = model.inputs();
    const Index q = model.outputs();
    const double* a = model.A().data();
    const double* b = model.B().data();
    const double* c = model.C().data();
    const double* d = model.D().data();
    Matrix y(q, inputs.cols());
    Vector next(n);
    for (Index k = 0; k < inputs.cols(); ++k) {
        const double* u = inputs.col(k).data();
        double* yk = y.col(k).data();
        for (Index r = 0; r < q; ++r) {
            double acc = 0.0;
            for (Index s = 0; s < n; ++s) {
                acc += c[r + s * q] * x[s];
            }
            for (Index s = 0; s < m; ++s) {
                acc += d[r + s * q] * u[s];
            }
            yk[r] = acc;
        }
        for (Index r = 0; r < n; ++r) {
            double acc = 0.0;
            for (Index s = 0; s < n; ++s) {
                acc += a[r + s * n] * x[s];
            }
            for (Index s = 0; s < m; ++s) {
                acc += b[r + s * n] * u[s];
            }
            next[r] = acc;
        }
        x.swap(next);
    }
    return y;
}

/**
 * Noisy simulation
 *
 *   x(k+1) = A x(k) + B u(k) + d_u(k)
 *   y(k)   = C x(k) + D u(k) + d_y(k)
 *
 * d_u and d_y are drawn from independent generators seeded by their specs,
 * one n-vector (q-vector) per step, so the result is a pure function of the
 * arguments.
 */
[[nodiscard]] inline SignalRecord simulate(const StateSpaceModel& model, const Matrix& inputs,
                                           const NoiseSpec& process_noise, const NoiseSpec& observation_noise,
                                           const std::optional<Vector>& x0 = std::nullopt) {
    process_noise.validate();
    observation_noise.validate();
    if (process_noise.is_zero() && observation_noise.is_zero()) {
        return SignalRecord(inputs, simulate_outputs(model, inputs, x0));
    }
    if (inputs.rows() != model.inputs()) {
        throw DimensionError("simulate: input dimension " + std::to_string(inputs.rows()) + " != m = " +
                             std::to_string(model.inputs()));
    }
    Vector x = x0.value_or(Vector::Zero(model.states()));
    if (x.size() != model.states()) {
        throw DimensionError("simulate: x0 has size " + std::to_string(x.size()) + ", expected n = " +
                             std::to_string(model.states()));
    }
    Rng process_rng(process_noise.seed);
    Rng observation_rng(observation_noise.seed);
    Matrix y(model.outputs(), inputs.cols());
    Vector next(model.states());
    for (Index k = 0; k < inputs.cols(); ++k) {
        y.col(k).noalias() = model.C() * x;
        y.col(k).noalias() += model.D() * inputs.col(k);
        if (!observation_noise.is_zero()) {
            for (Index r = 0; r < y.rows(); ++r) {
                y(r, k) += observation_rng.normal(observation_noise.mean, observation_noise.std_dev);
            }
        }
        next.noalias() = model.A() * x;
        next.noalias() += model.B() * inputs.col(k);
        if (!process_noise.is_zero()) {
            for (Index r = 0; r < next.size(); ++r) {
                next(r) += process_rng.normal(process_noise.mean, process_noise.std_dev);
            }
        }
        x.swap(next);
    }
    return SignalRecord(inputs, std::move(y));
}

/// H(0) = D, H(i) = C A^{i-1} B.
[[nodiscard]] inline std::vector<Matrix> markov_parameters(const StateSpaceModel& model, Index count) {
    if (count < 1) {
        throw std::invalid_argument("markov_parameters: count must be >= 1");
    }
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(count));
    out.push_back(model.D());
    Matrix ab = model.B();
    for (Index i = 1; i < count; ++i) {
        out.push_back(model.C() * ab);
        ab = model.A() * ab;
    }
    return out;
}

/// Largest Frobenius distance between corresponding Markov parameters.
[[nodiscard]] inline double markov_distance(const StateSpaceModel& l, const StateSpaceModel& r, Index count) {
    const auto hl = markov_parameters(l, count);
    const auto hr = markov_parameters(r, count);
    double worst = 0.0;
    for (std::size_t i = 0; i < hl.size(); ++i) {
        if (hl[i].rows() != hr[i].rows() || hl[i].cols() != hr[i].cols()) {
            throw DimensionError("markov_distance: models have different (m, q)");
        }
        worst = std::max(worst, (hl[i] - hr[i]).norm());
    }
    return worst;
}

struct ReachabilityReport {
    bool controllable = false;
    bool observable = false;
    Index controllability_rank = 0;
    Index observability_rank = 0;
};

[[nodiscard]] inline ReachabilityReport check_controllability_observability(
    const StateSpaceModel& model, double rank_tolerance = kDefaultRankTolerance) {
    const Index n = model.states();
    ReachabilityReport r;
    r.controllability_rank =
        linalg::numerical_rank(linalg::controllability_matrix(model.A(), model.B(), n), rank_tolerance);
    r.observability_rank =
        linalg::numerical_rank(linalg::observability_matrix(model.C(), model.A(), n), rank_tolerance);
    r.controllable = r.controllability_rank == n;
    r.observable = r.observability_rank == n;
    return r;
}

/**
 * Controllable companion realization of a single-input model.
 *
 * With T = [b, Ab, ..., A^{n-1}b] the result is (T^-1 A T, T^-1 b, C T, D):
 * b becomes e1, A carries ones on the first subdiagonal and the
 * characteristic coefficients in its last column. The pinned entries are
 * written exactly; only the last column of A is computed numerically.
 */
[[nodiscard]] inline StateSpaceModel to_controllable_companion(const StateSpaceModel& model,
                                                               double rank_tolerance = kDefaultRankTolerance) {
    if (model.inputs() != 1) {
        throw UnsupportedError("companion form is only defined here for single-input models (m = " +
                               std::to_string(model.inputs()) + ")");
    }
    const Index n = model.states();
    const Matrix t = linalg::controllability_matrix(model.A(), model.B(), n);
    if (linalg::numerical_rank(t, rank_tolerance) < n) {
        throw SingularTransformError("companion transform: (A, B) is not controllable", linalg::condition_number(t));
    }
    const Eigen::PartialPivLU<Matrix> lu(t);
    Matrix a = Matrix::Zero(n, n);
    for (Index r = 0; r + 1 < n; ++r) {
        a(r + 1, r) = 1.0;
    }
    a.col(n - 1) = lu.solve(model.A() * t.col(n - 1));
    return {std::move(a), linalg::unit_vector(n, 0), model.C() * t, model.D()};
}

}  // namespace cyclopoly
