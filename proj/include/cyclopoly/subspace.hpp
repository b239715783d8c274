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

#include <cmath>
#include <string>

#include "cyclopoly/state_space.hpp"

namespace cyclopoly {

/// Block-Hankel matrix: block (r, c) holds signal(:, offset + r + c).
struct HankelBlock {
    Matrix data;
    Index block_rows = 0;
    Index columns = 0;
    Index signal_dim = 0;
};

[[nodiscard]] inline HankelBlock build_block_hankel(const Matrix& signal, Index block_rows, Index columns,
                                                    Index offset) {
    if (block_rows < 1 || columns < 1 || offset < 0) {
        throw std::invalid_argument("block hankel: block_rows, columns >= 1 and offset >= 0 required");
    }
    const Index required = offset + block_rows + columns - 1;
    if (required > signal.cols()) {
        throw LengthError("block hankel: needs " + std::to_string(required) + " samples, signal has " +
                          std::to_string(signal.cols()));
    }
    const Index d = signal.rows();
    HankelBlock h{Matrix(block_rows * d, columns), block_rows, columns, d};
    for (Index c = 0; c < columns; ++c) {
        for (Index r = 0; r < block_rows; ++r) {
            h.data.block(r * d, c, d, 1) = signal.col(offset + r + c);
        }
    }
    return h;
}

struct IdentificationConfig {
    Index order = 0;
    /// Hankel depth; 0 selects default_block_rows(order, q).
    Index block_rows = 0;
    double rank_tolerance = kDefaultRankTolerance;

    [[nodiscard]] static Index default_block_rows(Index order, Index output_dim) {
        return 2 * ((order + output_dim - 1) / output_dim) + 2;
    }

    [[nodiscard]] Index resolved_block_rows(Index output_dim) const {
        return block_rows > 0 ? block_rows : default_block_rows(order, output_dim);
    }

    void validate(Index output_dim) const {
        if (order < 1) {
            throw std::invalid_argument("identification: order must be >= 1, got " + std::to_string(order));
        }
        if (block_rows < 0) {
            throw std::invalid_argument("identification: block_rows must be >= 0");
        }
        if (!(rank_tolerance > 0.0)) {
            throw std::invalid_argument("identification: rank_tolerance must be positive");
        }
        const Index i = resolved_block_rows(output_dim);
        if (i * output_dim <= order) {
            throw std::invalid_argument("identification: block_rows * q = " + std::to_string(i * output_dim) +
                                        " must exceed the order " + std::to_string(order));
        }
    }

    /// Smallest record length accepted for an (m, q) data set.
    [[nodiscard]] Index minimum_samples(Index input_dim, Index output_dim) const {
        const Index i = resolved_block_rows(output_dim);
        return 2 * i - 1 + 2 * (input_dim + output_dim) * i;
    }
};

namespace detail {

/**
 * Least-squares B, D (and initial state) for fixed (A, C):
 *
 *   y(k) = C A^k x0 + sum_{t<k} C A^{k-t-1} B u(t) + D u(k)
 *
 * is linear in theta = [x0; vec(B); vec(D)]. Regressor rows are generated by
 * propagating the sensitivities P(k) = A^k and Z(k+1) = A Z(k) + (u(k)' (x) I_n)
 * and folded into a running triangular factor chunk by chunk, so the full
 * regressor is never stored.
 */
struct InputMaps {
    Matrix B;
    Matrix D;
    Vector x0;
};

inline InputMaps estimate_input_maps(const Matrix& a, const Matrix& c, const Matrix& u, const Matrix& y) {
    const Index n = a.rows();
    const Index m = u.rows();
    const Index l = y.rows();
    const Index length = u.cols();
    const Index p = n + n * m + l * m;
    const Index chunk_steps = std::max<Index>(1, (16 * p + l - 1) / l);

    Matrix state_sens = Matrix::Identity(n, n);   // A^k
    Matrix input_sens = Matrix::Zero(n, n * m);   // Z(k)
    Matrix next_input_sens(n, n * m);

    Matrix r_aug = Matrix::Zero(p, p + 1);
    bool have_r = false;
    Matrix work;

    for (Index k0 = 0; k0 < length; k0 += chunk_steps) {
        const Index steps = std::min(chunk_steps, length - k0);
        const Index offset = have_r ? p : 0;
        work.setZero(offset + steps * l, p + 1);
        if (have_r) {
            work.topRows(p) = r_aug;
        }
        for (Index s = 0; s < steps; ++s) {
            const Index k = k0 + s;
            auto rows = work.middleRows(offset + s * l, l);
            rows.leftCols(n).noalias() = c * state_sens;
            rows.middleCols(n, n * m).noalias() = c * input_sens;
            for (Index col = 0; col < m; ++col) {
                for (Index r = 0; r < l; ++r) {
                    rows(r, n + n * m + col * l + r) = u(col, k);
                }
            }
            rows.col(p) = y.col(k);

            state_sens = a * state_sens;
            next_input_sens.noalias() = a * input_sens;
            for (Index col = 0; col < m; ++col) {
                next_input_sens.middleCols(col * n, n).diagonal().array() += u(col, k);
            }
            input_sens.swap(next_input_sens);
        }
        Eigen::HouseholderQR<Eigen::Ref<Matrix>> qr(work);
        const Index keep = std::min<Index>(p, work.rows());
        r_aug.setZero();
        r_aug.topRows(keep) = work.topRows(keep).triangularView<Eigen::Upper>();
        have_r = true;
    }

    const Matrix r = r_aug.leftCols(p);
    const Vector rhs = r_aug.col(p);
    const Vector theta = r.completeOrthogonalDecomposition().solve(rhs);

    InputMaps out;
    out.x0 = theta.head(n);
    out.B = Eigen::Map<const Matrix>(theta.data() + n, n, m);
    out.D = Eigen::Map<const Matrix>(theta.data() + n + n * m, l, m);
    return out;
}

}  // namespace detail

/// Singular values of the projected data, alongside the estimate.
struct SubspaceEstimate {
    StateSpaceModel model;
    Vector singular_values;
    Vector initial_state;
};

/**
 * Past-input/past-output MOESP identification at a fixed order.
 *
 * 1. Stack [U_f; U_p; Y_p; Y_f] (block depth i, maximal column count) and
 *    take its LQ factorization.
 * 2. The block of L that maps the past-data instrument onto Y_f spans the
 *    extended observability matrix; its truncated SVD gives Gamma_i.
 * 3. C is the first block row of Gamma_i, A follows from shift invariance.
 * 4. B, D and the initial state come from linear least squares on the
 *    input-output equation with (A, C) fixed.
 *
 * The returned realization is in an arbitrary state basis.
 */
[[nodiscard]] inline SubspaceEstimate subspace_identify_detailed(const SignalRecord& data,
                                                                 const IdentificationConfig& config) {
    const Index m = data.input_dim();
    const Index l = data.output_dim();
    config.validate(l);
    const Index n = config.order;
    const Index i = config.resolved_block_rows(l);
    const Index required = config.minimum_samples(m, l);
    if (data.length() < required) {
        throw LengthError("subspace identification: needs at least " + std::to_string(required) +
                          " samples for block_rows = " + std::to_string(i) + ", got " +
                          std::to_string(data.length()));
    }
    const Index j = data.length() - 2 * i + 1;
    const Index ru = m * i;
    const Index rw = (m + l) * i;
    const Index ry = l * i;

    Matrix stacked_t(j, ru + rw + ry);
    stacked_t.middleCols(0, ru) = build_block_hankel(data.inputs(), i, j, i).data.transpose();
    stacked_t.middleCols(ru, m * i) = build_block_hankel(data.inputs(), i, j, 0).data.transpose();
    stacked_t.middleCols(ru + m * i, l * i) = build_block_hankel(data.outputs(), i, j, 0).data.transpose();
    stacked_t.middleCols(ru + rw, ry) = build_block_hankel(data.outputs(), i, j, i).data.transpose();
    stacked_t /= std::sqrt(static_cast<double>(j));

    Eigen::HouseholderQR<Eigen::Ref<Matrix>> qr(stacked_t);
    const Matrix lower = stacked_t.topRows(ru + rw + ry).triangularView<Eigen::Upper>().transpose();
    const Matrix l32 = lower.block(ru + rw, ru, ry, rw);

    Eigen::JacobiSVD<Matrix> svd(l32, Eigen::ComputeThinU);
    const Vector s = svd.singularValues();
    if (s.size() < n || !(s(0) > 0.0) || !(s(n - 1) > config.rank_tolerance * s(0))) {
        throw DegenerateDataError("subspace identification: projected data has rank below the requested order " +
                                  std::to_string(n));
    }
    const Matrix gamma = svd.matrixU().leftCols(n) * s.head(n).cwiseSqrt().asDiagonal();

    Matrix c = gamma.topRows(l);
    Matrix a = gamma.topRows((i - 1) * l).colPivHouseholderQr().solve(gamma.bottomRows((i - 1) * l));
    if (!a.allFinite() || !c.allFinite()) {
        throw DegenerateDataError("subspace identification: non-finite (A, C) estimate");
    }
    auto maps = detail::estimate_input_maps(a, c, data.inputs(), data.outputs());
    if (!maps.B.allFinite() || !maps.D.allFinite()) {
        throw DegenerateDataError("subspace identification: non-finite (B, D) estimate");
    }
    return {StateSpaceModel(std::move(a), std::move(maps.B), std::move(c), std::move(maps.D)), s,
            std::move(maps.x0)};
}

[[nodiscard]] inline StateSpaceModel subspace_identify(const SignalRecord& data, const IdentificationConfig& config) {
    return subspace_identify_detailed(data, config).model;
}

/// Baseline: a single order-n model from the raw (non-cycled) record.
[[nodiscard]] inline StateSpaceModel conventional_identify(const SignalRecord& data, Index order,
                                                           Index block_rows = 0) {
    return subspace_identify(data, IdentificationConfig{order, block_rows, kDefaultRankTolerance});
}

}  // namespace cyclopoly
