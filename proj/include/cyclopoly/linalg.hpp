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

#include <Eigen/Dense>

#include <limits>

namespace cyclopoly {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative singular-value cutoff used for every rank decision in the library.
inline constexpr double kDefaultRankTolerance = 1e-8;

namespace linalg {

/// Number of singular values above tol * sigma_max.
[[nodiscard]] inline Index numerical_rank(const Matrix& m, double tol = kDefaultRankTolerance) {
    if (m.size() == 0) {
        return 0;
    }
    const Vector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
    if (s.size() == 0 || s(0) == 0.0) {
        return 0;
    }
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol * s(0)) {
            ++r;
        }
    }
    return r;
}

/// 2-norm condition number; +inf for singular or non-finite input.
[[nodiscard]] inline double condition_number(const Matrix& m) {
    if (m.size() == 0 || !m.allFinite()) {
        return std::numeric_limits<double>::infinity();
    }
    const Vector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
    const double smin = s(s.size() - 1);
    if (smin <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return s(0) / smin;
}

/// [B, AB, ..., A^{k-1}B]
[[nodiscard]] inline Matrix controllability_matrix(const Matrix& a, const Matrix& b, Index k) {
    Matrix out(a.rows(), b.cols() * k);
    Matrix block = b;
    for (Index j = 0; j < k; ++j) {
        out.middleCols(j * b.cols(), b.cols()) = block;
        block = a * block;
    }
    return out;
}

/// [C; CA; ...; CA^{k-1}]
[[nodiscard]] inline Matrix observability_matrix(const Matrix& c, const Matrix& a, Index k) {
    Matrix out(c.rows() * k, a.cols());
    Matrix block = c;
    for (Index j = 0; j < k; ++j) {
        out.middleRows(j * c.rows(), c.rows()) = block;
        block = block * a;
    }
    return out;
}

[[nodiscard]] inline Matrix unit_vector(Index size, Index position) {
    Matrix e = Matrix::Zero(size, 1);
    e(position, 0) = 1.0;
    return e;
}

}  // namespace linalg
}  // namespace cyclopoly
