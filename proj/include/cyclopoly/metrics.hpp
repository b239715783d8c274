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

#include <vector>

#include "cyclopoly/cyclic.hpp"

namespace cyclopoly {

struct FitReport {
    /// One percentage per output channel.
    std::vector<double> per_output_fit;
    double mean_fit = 0.0;
};

/**
 * FIT = (1 - ||y - yhat|| / ||y - mean(y)||) * 100, per output channel,
 * with y the reference (true) signal. Columns are samples.
 */
[[nodiscard]] inline FitReport fit(const Matrix& y_true, const Matrix& y_model) {
    if (y_true.rows() != y_model.rows() || y_true.cols() != y_model.cols()) {
        throw DimensionError("fit: reference is " + detail::shape(y_true) + ", model output is " +
                             detail::shape(y_model));
    }
    if (y_true.cols() < 2) {
        throw LengthError("fit: needs at least two samples");
    }
    FitReport r;
    for (Index ch = 0; ch < y_true.rows(); ++ch) {
        const auto ref = y_true.row(ch).array();
        const double denom = (ref - ref.mean()).matrix().norm();
        if (!(denom > 0.0)) {
            throw DegenerateReferenceError("fit: reference channel " + std::to_string(ch) + " is constant");
        }
        const double num = (ref - y_model.row(ch).array()).matrix().norm();
        r.per_output_fit.push_back((1.0 - num / denom) * 100.0);
    }
    double total = 0.0;
    for (const double f : r.per_output_fit) {
        total += f;
    }
    r.mean_fit = total / static_cast<double>(r.per_output_fit.size());
    return r;
}

/// E = |A - Am|_F^2 + |B - Bm|_F^2 + |C - Cm|_F^2 + |D - Dm|_F^2.
[[nodiscard]] inline double param_error(const StateSpaceModel& truth, const StateSpaceModel& estimate) {
    if (truth.states() != estimate.states() || truth.inputs() != estimate.inputs() ||
        truth.outputs() != estimate.outputs()) {
        throw DimensionError("param_error: models differ in (n, m, q)");
    }
    return (truth.A() - estimate.A()).squaredNorm() + (truth.B() - estimate.B()).squaredNorm() +
           (truth.C() - estimate.C()).squaredNorm() + (truth.D() - estimate.D()).squaredNorm();
}

/// Per-vertex errors E_i in vertex order.
[[nodiscard]] inline std::vector<double> vertex_errors(const StateSpaceModel& truth, const VertexSet& vertices) {
    std::vector<double> out;
    out.reserve(vertices.size());
    for (const auto& v : vertices.vertices()) {
        out.push_back(param_error(truth, v));
    }
    return out;
}

/// Sum of E_i over the vertex set.
[[nodiscard]] inline double total_vertex_error(const StateSpaceModel& truth, const VertexSet& vertices) {
    double total = 0.0;
    for (const double e : vertex_errors(truth, vertices)) {
        total += e;
    }
    return total;
}

}  // namespace cyclopoly
