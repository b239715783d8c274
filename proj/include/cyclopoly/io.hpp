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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclopoly/polytope.hpp"

namespace cyclopoly::io {

using json = nlohmann::json;

[[nodiscard]] inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Array of equal-length rows.
[[nodiscard]] inline Matrix matrix_from_json(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument("'" + name + "' must be a non-empty array of rows");
    }
    const auto rows = static_cast<Index>(j.size());
    const auto cols = static_cast<Index>(j.front().is_array() ? j.front().size() : 0);
    if (cols == 0) {
        throw std::invalid_argument("'" + name + "' rows must be non-empty arrays");
    }
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw DimensionError("'" + name + "' is ragged at row " + std::to_string(r));
        }
        for (Index c = 0; c < cols; ++c) {
            const auto& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) {
                throw std::invalid_argument("'" + name + "' has a non-numeric entry");
            }
            m(r, c) = v.get<double>();
        }
    }
    return m;
}

/// {"n", "m", "q", "A", "B", "C", "D"} with matrices as row-major arrays of rows.
[[nodiscard]] inline json model_to_json(const StateSpaceModel& model) {
    return json{{"n", model.states()},
                {"m", model.inputs()},
                {"q", model.outputs()},
                {"A", matrix_to_json(model.A())},
                {"B", matrix_to_json(model.B())},
                {"C", matrix_to_json(model.C())},
                {"D", matrix_to_json(model.D())}};
}

[[nodiscard]] inline StateSpaceModel model_from_json(const json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("state-space model must be a JSON object");
    }
    for (const char* key : {"A", "B", "C", "D"}) {
        if (!j.contains(key)) {
            throw std::invalid_argument(std::string("state-space model is missing '") + key + "'");
        }
    }
    StateSpaceModel model(matrix_from_json(j.at("A"), "A"), matrix_from_json(j.at("B"), "B"),
                          matrix_from_json(j.at("C"), "C"), matrix_from_json(j.at("D"), "D"));
    const auto check = [&](const char* key, Index expected) {
        if (j.contains(key) && j.at(key).get<Index>() != expected) {
            throw DimensionError(std::string("state-space model: declared ") + key + " = " +
                                 std::to_string(j.at(key).get<Index>()) + " but matrices give " +
                                 std::to_string(expected));
        }
    };
    check("n", model.states());
    check("m", model.inputs());
    check("q", model.outputs());
    return model;
}

inline constexpr const char* kPolytopeFormat = "cyclopoly-polytope";
inline constexpr int kPolytopeFormatVersion = 1;

/// Polytope document: vertices in phase order plus free-form metadata.
[[nodiscard]] inline json polytope_to_json(const PolytopeModel& polytope, const json& metadata = json::object()) {
    json vertices = json::array();
    for (const auto& v : polytope.vertex_set().vertices()) {
        vertices.push_back(model_to_json(v));
    }
    return json{{"format", kPolytopeFormat},
                {"version", kPolytopeFormatVersion},
                {"period", polytope.size()},
                {"metadata", metadata},
                {"vertices", std::move(vertices)}};
}

[[nodiscard]] inline PolytopeModel polytope_from_json(const json& j) {
    if (!j.is_object() || j.value("format", std::string{}) != kPolytopeFormat) {
        throw std::invalid_argument("not a cyclopoly polytope document");
    }
    if (j.value("version", 0) != kPolytopeFormatVersion) {
        throw std::invalid_argument("unsupported polytope document version");
    }
    std::vector<StateSpaceModel> vertices;
    for (const auto& v : j.at("vertices")) {
        vertices.push_back(model_from_json(v));
    }
    if (j.contains("period") && j.at("period").get<std::size_t>() != vertices.size()) {
        throw DimensionError("polytope document: period does not match the vertex count");
    }
    return PolytopeModel(VertexSet(std::move(vertices)));
}

}  // namespace cyclopoly::io
