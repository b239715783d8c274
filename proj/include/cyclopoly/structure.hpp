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

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cyclopoly/cyclic.hpp"

namespace cyclopoly {

enum class TransformRoute { controllability, observability };
enum class RoutePreference { controllability, observability, automatic };

[[nodiscard]] inline const char* to_string(TransformRoute r) noexcept {
    return r == TransformRoute::controllability ? "controllability" : "observability";
}

/// Transforms whose condition estimate exceeds this are treated as singular.
inline constexpr double kSingularConditionThreshold = 1e12;

/// Similarity transform x_* = T x_m together with its inverse.
struct TransformMatrix {
    Matrix T;
    Matrix T_inverse;
    double condition_estimate = 0.0;
    TransformRoute method = TransformRoute::controllability;
    /// True when the selectors are the library defaults (pinning applies).
    bool default_selectors = true;
};

/**
 * Per-index block-diagonal selector matrices.
 *
 * blocks[j][p] is the p-th diagonal block of the j-th selector: m x n for the
 * controllability route (the G_j of T = sum A^j B S_m^{j+1} G_j) and n x q
 * for the observability route (the F_j of T^-1 = sum F_j S_q^j C A^j).
 * Storing only the diagonal blocks keeps the block-diagonal pattern by
 * construction.
 */
struct SelectorBlocks {
    std::vector<std::vector<Matrix>> blocks;

    /// Unit row e_j' in every phase: T's phase-p columns become [b, Ab, ..., A^{n-1}b]
    /// taken from the input phase that feeds state phase p, i.e. the companion basis.
    [[nodiscard]] static SelectorBlocks default_controllability(Index period, Index n, Index m) {
        if (m != 1) {
            throw UnsupportedError("default controllability selectors need a single input (m = " +
                                   std::to_string(m) + ")");
        }
        SelectorBlocks s;
        s.blocks.resize(static_cast<std::size_t>(n));
        for (Index j = 0; j < n; ++j) {
            for (Index p = 0; p < period; ++p) {
                Matrix g = Matrix::Zero(1, n);
                g(0, j) = 1.0;
                s.blocks[static_cast<std::size_t>(j)].push_back(std::move(g));
            }
        }
        return s;
    }

    /// Unit column e_j selecting the first output channel in every phase (observer basis).
    [[nodiscard]] static SelectorBlocks default_observability(Index period, Index n, Index q) {
        SelectorBlocks s;
        s.blocks.resize(static_cast<std::size_t>(n));
        for (Index j = 0; j < n; ++j) {
            for (Index p = 0; p < period; ++p) {
                Matrix f = Matrix::Zero(n, q);
                f(j, 0) = 1.0;
                s.blocks[static_cast<std::size_t>(j)].push_back(std::move(f));
            }
        }
        return s;
    }

    [[nodiscard]] Matrix assemble(std::size_t j) const {
        const auto& row = blocks.at(j);
        Index rows = 0;
        Index cols = 0;
        for (const auto& b : row) {
            rows += b.rows();
            cols += b.cols();
        }
        Matrix out = Matrix::Zero(rows, cols);
        Index r = 0;
        Index c = 0;
        for (const auto& b : row) {
            out.block(r, c, b.rows(), b.cols()) = b;
            r += b.rows();
            c += b.cols();
        }
        return out;
    }

    void check_shape(Index count, Index period, Index rows, Index cols, const char* what) const {
        bool ok = static_cast<Index>(blocks.size()) == count;
        for (const auto& row : blocks) {
            ok = ok && static_cast<Index>(row.size()) == period;
            for (const auto& b : row) {
                ok = ok && b.rows() == rows && b.cols() == cols;
            }
        }
        if (!ok) {
            throw DimensionError(std::string(what) + ": selectors must be " + std::to_string(count) + " x " +
                                 std::to_string(period) + " blocks of " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
        }
    }
};

namespace detail {

inline TransformMatrix finish_transform(Matrix t, Matrix t_inv, TransformRoute route, bool defaults) {
    const double cond = linalg::condition_number(t);
    if (!(cond <= kSingularConditionThreshold)) {
        throw SingularTransformError(std::string(to_string(route)) + " transform is numerically singular", cond);
    }
    return {std::move(t), std::move(t_inv), cond, route, defaults};
}

}  // namespace detail

/**
 * T = sum_{j<n} A*^j B* S_m^{j+1} G_j.
 *
 * With the default selectors and m = 1, column (p*n + j) of T is
 * A*^j B*(:, p-j-1 mod N): the state of phase p expressed through the
 * inputs of the previous n phases, which is the single-input controllable
 * companion basis of each phase.
 */
[[nodiscard]] inline TransformMatrix build_transform_controllability(
    const Matrix& a, const Matrix& b, Index period, Index n, Index m,
    const std::optional<SelectorBlocks>& selectors = std::nullopt,
    double rank_tolerance = kDefaultRankTolerance) {
    const Index nn = period * n;
    if (a.rows() != nn || a.cols() != nn || b.rows() != nn || b.cols() != period * m) {
        throw DimensionError("controllability transform: (A, B) do not match period and (n, m)");
    }
    const SelectorBlocks sel = selectors ? *selectors : SelectorBlocks::default_controllability(period, n, m);
    sel.check_shape(n, period, m, n, "controllability transform");

    const Matrix ctrb = linalg::controllability_matrix(a, b, nn);
    if (linalg::numerical_rank(ctrb, rank_tolerance) < nn) {
        throw SingularTransformError("controllability transform: (A, B) is not controllable",
                                     std::numeric_limits<double>::infinity());
    }

    Matrix t = Matrix::Zero(nn, nn);
    Matrix ajb = b;
    for (Index j = 0; j < n; ++j) {
        t.noalias() += ajb * cyclic_shift_power(m, period, j + 1) * sel.assemble(static_cast<std::size_t>(j));
        ajb = a * ajb;
    }
    Matrix t_inv = t.fullPivLu().inverse();
    return detail::finish_transform(std::move(t), std::move(t_inv), TransformRoute::controllability,
                                    !selectors.has_value());
}

/**
 * T^-1 = sum_{j<n} F_j S_q^j C* A*^j (the dual of the controllability route).
 *
 * With the default selectors, row (p*n + j) of T^-1 is the first-channel row
 * of C* A*^j at output phase p+j, i.e. the observer basis built from output 1.
 */
[[nodiscard]] inline TransformMatrix build_transform_observability(
    const Matrix& a, const Matrix& c, Index period, Index n, Index q,
    const std::optional<SelectorBlocks>& selectors = std::nullopt,
    double rank_tolerance = kDefaultRankTolerance) {
    const Index nn = period * n;
    if (a.rows() != nn || a.cols() != nn || c.rows() != period * q || c.cols() != nn) {
        throw DimensionError("observability transform: (C, A) do not match period and (n, q)");
    }
    const SelectorBlocks sel = selectors ? *selectors : SelectorBlocks::default_observability(period, n, q);
    sel.check_shape(n, period, n, q, "observability transform");

    const Matrix obsv = linalg::observability_matrix(c, a, nn);
    if (linalg::numerical_rank(obsv, rank_tolerance) < nn) {
        throw SingularTransformError("observability transform: (C, A) is not observable",
                                     std::numeric_limits<double>::infinity());
    }

    Matrix t_inv = Matrix::Zero(nn, nn);
    Matrix caj = c;
    for (Index j = 0; j < n; ++j) {
        t_inv.noalias() += sel.assemble(static_cast<std::size_t>(j)) * cyclic_shift_power(q, period, j) * caj;
        caj = caj * a;
    }
    const double cond = linalg::condition_number(t_inv);
    if (!(cond <= kSingularConditionThreshold)) {
        throw SingularTransformError("observability transform is numerically singular", cond);
    }
    Matrix t = t_inv.fullPivLu().inverse();
    return detail::finish_transform(std::move(t), std::move(t_inv), TransformRoute::observability,
                                    !selectors.has_value());
}

/// (T^-1 A T, T^-1 B, C T, D), with no assumption about the resulting pattern.
[[nodiscard]] inline CycledSystem apply_similarity(const CycledSystem& estimate, const TransformMatrix& transform) {
    const Index nn = estimate.A().rows();
    if (transform.T.rows() != nn || transform.T.cols() != nn || transform.T_inverse.rows() != nn ||
        transform.T_inverse.cols() != nn) {
        throw DimensionError("apply_similarity: transform is not " + std::to_string(nn) + "x" + std::to_string(nn));
    }
    return {transform.T_inverse * estimate.A() * transform.T, transform.T_inverse * estimate.B(),
            estimate.C() * transform.T, estimate.D(), estimate.period(), estimate.base()};
}

namespace detail {

/**
 * Writes the entries fixed by the default selectors exactly.
 *
 * Controllability route: in every phase, columns 0..n-2 of the A-block are
 * e_{r+1} and the B-block is e_1. Observability route: rows 0..n-2 of the
 * A-block are e_{r+1}' and row 0 of the C-block is e_1'. In exact arithmetic
 * these hold identically; numerically they carry rounding only.
 */
inline CycledSystem pin_structure(const CycledSystem& s, TransformRoute route) {
    const Index period = s.period();
    const auto [n, m, q] = s.base();
    Matrix a = s.A();
    Matrix b = s.B();
    Matrix c = s.C();
    if (route == TransformRoute::controllability) {
        for (Index p = 0; p < period; ++p) {
            const Index next = (p + 1) % period;
            for (Index r = 0; r + 1 < n; ++r) {
                a.col(p * n + r).setZero();
                a(next * n + r + 1, p * n + r) = 1.0;
            }
            b.col(p).setZero();
            b(next * n, p) = 1.0;
        }
    } else {
        for (Index p = 0; p < period; ++p) {
            const Index prev = (p + period - 1) % period;
            for (Index r = 0; r + 1 < n; ++r) {
                a.row(p * n + r).setZero();
                a(p * n + r, prev * n + r + 1) = 1.0;
            }
            c.row(p * q).setZero();
            c(p * q, p * n) = 1.0;
        }
    }
    return {std::move(a), std::move(b), std::move(c), s.D(), period, s.base()};
}

}  // namespace detail

struct RecoveryResult {
    VertexSet vertex_set;
    double structure_residual = 0.0;
    double condition_estimate = 0.0;
    TransformRoute route_used = TransformRoute::controllability;
    CycledSystem transformed;
};

/**
 * Coordinate transformation plus phase extraction.
 *
 * `automatic` tries the controllability route first and falls back to the
 * observability route when the former is singular or unsupported.
 */
[[nodiscard]] inline RecoveryResult recover_vertices(const CycledSystem& estimate,
                                                     RoutePreference route = RoutePreference::automatic) {
    const Index period = estimate.period();
    const auto [n, m, q] = estimate.base();

    auto run = [&](TransformRoute r) {
        const TransformMatrix t = r == TransformRoute::controllability
                                      ? build_transform_controllability(estimate.A(), estimate.B(), period, n, m)
                                      : build_transform_observability(estimate.A(), estimate.C(), period, n, q);
        CycledSystem transformed = detail::pin_structure(apply_similarity(estimate, t), r);
        auto extracted = extract_phase_parameters(transformed);
        return RecoveryResult{std::move(extracted.vertex_set), extracted.structure_residual, t.condition_estimate,
                              r, std::move(transformed)};
    };

    if (route == RoutePreference::controllability) {
        return run(TransformRoute::controllability);
    }
    if (route == RoutePreference::observability) {
        return run(TransformRoute::observability);
    }
    std::string first_failure;
    try {
        return run(TransformRoute::controllability);
    } catch (const SingularTransformError& e) {
        first_failure = e.what();
    } catch (const UnsupportedError& e) {
        first_failure = e.what();
    }
    try {
        return run(TransformRoute::observability);
    } catch (const SingularTransformError& e) {
        throw UnrecoverableStructureError("no transform route succeeded: " + first_failure + "; " + e.what());
    }
}

}  // namespace cyclopoly
