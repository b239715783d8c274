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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "cyclopoly/experiment.hpp"

namespace cyclopoly::report {

enum class Format { csv, text };

[[nodiscard]] inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "text") return Format::text;
    throw ConfigError("format must be csv or text (got '" + s + "')");
}

/// Shortest decimal that parses back to the same double.
[[nodiscard]] inline std::string format_number(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, r.ptr};
}

[[nodiscard]] inline std::string format_optional(const std::optional<double>& x) {
    return x ? format_number(*x) : std::string{};
}

/// Column widths shared by every row of a trial table.
struct TrialLayout {
    std::size_t vertices = 0;
    std::size_t outputs = 0;

    [[nodiscard]] static TrialLayout of(const std::vector<TrialReport>& trials) {
        TrialLayout l;
        for (const auto& t : trials) {
            l.vertices = std::max(l.vertices, static_cast<std::size_t>(t.period));
            l.outputs = std::max({l.outputs, t.fit_conventional.per_output_fit.size(),
                                  t.fit_polytope.per_output_fit.size()});
        }
        return l;
    }
};

/**
 * Trial table header:
 *
 *   seed, N, N_data, sigma_du, sigma_dy, E_0..E_{N-1}, total_E,
 *   fit_conv_mean, fit_pso_mean, fit_conv_y1..yq, fit_pso_y1..yq,
 *   E_lambda_star, lambda_0..lambda_{N-1}, structure_residual,
 *   condition_estimate, status, wall_ms
 *
 * N and q are the largest over the table; shorter rows are padded with empty
 * cells. Failed trials keep their identifying columns and status only.
 */
[[nodiscard]] inline std::vector<std::string> trial_header(const TrialLayout& l) {
    std::vector<std::string> h{"seed", "N", "N_data", "sigma_du", "sigma_dy"};
    for (std::size_t i = 0; i < l.vertices; ++i) h.push_back("E_" + std::to_string(i));
    h.insert(h.end(), {"total_E", "fit_conv_mean", "fit_pso_mean"});
    for (std::size_t i = 1; i <= l.outputs; ++i) h.push_back("fit_conv_y" + std::to_string(i));
    for (std::size_t i = 1; i <= l.outputs; ++i) h.push_back("fit_pso_y" + std::to_string(i));
    h.push_back("E_lambda_star");
    for (std::size_t i = 0; i < l.vertices; ++i) h.push_back("lambda_" + std::to_string(i));
    h.insert(h.end(), {"structure_residual", "condition_estimate", "status", "wall_ms"});
    return h;
}

[[nodiscard]] inline std::vector<std::string> trial_row(const TrialReport& t, const TrialLayout& l) {
    std::vector<std::string> r{std::to_string(t.seed), std::to_string(t.period), std::to_string(t.n_data),
                               format_number(t.sigma_du), format_number(t.sigma_dy)};
    const bool ok = t.ok();
    const auto padded = [&](const std::vector<double>& v, std::size_t width) {
        for (std::size_t i = 0; i < width; ++i) {
            r.push_back(ok && i < v.size() ? format_number(v[i]) : std::string{});
        }
    };
    const auto scalar = [&](double x) { r.push_back(ok ? format_number(x) : std::string{}); };
    padded(t.vertex_errors, l.vertices);
    scalar(t.total_error);
    scalar(t.fit_conventional.mean_fit);
    scalar(t.fit_polytope.mean_fit);
    padded(t.fit_conventional.per_output_fit, l.outputs);
    padded(t.fit_polytope.per_output_fit, l.outputs);
    scalar(t.e_lambda_star);
    padded(t.lambda, l.vertices);
    scalar(t.structure_residual);
    scalar(t.condition_estimate);
    r.push_back(t.status);
    r.push_back(format_optional(t.wall_ms));
    return r;
}

inline const std::vector<std::string>& aggregate_header() {
    static const std::vector<std::string> h{
        "N",          "N_data",           "sigma_du",          "sigma_dy",          "trials",
        "failed",     "mean_total_E",     "std_total_E",       "avg_std_E_i",       "min_E_i",
        "max_E_i",    "mean_E_i",         "std_E_i",           "mean_fit_conv",     "mean_fit_pso",
        "mean_fit_improvement", "improved_fraction", "mean_E_lambda_star"};
    return h;
}

[[nodiscard]] inline std::vector<std::string> aggregate_row(const CellSummary& s) {
    return {std::to_string(s.period),
            std::to_string(s.n_data),
            format_number(s.sigma_du),
            format_number(s.sigma_dy),
            std::to_string(s.trials),
            std::to_string(s.failed),
            format_optional(s.mean_total_error),
            format_optional(s.std_total_error),
            format_optional(s.avg_vertex_std),
            format_optional(s.min_vertex_error),
            format_optional(s.max_vertex_error),
            format_optional(s.mean_vertex_error),
            format_optional(s.std_vertex_error),
            format_optional(s.mean_fit_conventional),
            format_optional(s.mean_fit_polytope),
            format_optional(s.mean_fit_improvement),
            format_optional(s.improved_fraction),
            format_optional(s.mean_e_lambda_star)};
}

namespace detail {

inline std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) {
        return cell;
    }
    std::string out = "\"";
    for (const char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_csv_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(cells[i]);
    }
    os << '\n';
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

inline std::filesystem::path prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'" + (ec ? ": " + ec.message() : ""));
    }
    return dir;
}

}  // namespace detail

[[nodiscard]] inline std::string trials_csv(const std::vector<TrialReport>& trials) {
    const TrialLayout l = TrialLayout::of(trials);
    std::ostringstream os;
    detail::write_csv_line(os, trial_header(l));
    for (const auto& t : trials) {
        detail::write_csv_line(os, trial_row(t, l));
    }
    return os.str();
}

[[nodiscard]] inline std::string aggregate_csv(const std::vector<CellSummary>& cells) {
    std::ostringstream os;
    detail::write_csv_line(os, aggregate_header());
    for (const auto& c : cells) {
        detail::write_csv_line(os, aggregate_row(c));
    }
    return os.str();
}

/// Structured text: one JSON document with "trials" and "aggregate" arrays keyed by column name.
[[nodiscard]] inline std::string text_report(const std::vector<TrialReport>& trials,
                                             const std::vector<CellSummary>& cells) {
    const TrialLayout l = TrialLayout::of(trials);
    const auto header = trial_header(l);
    const auto to_object = [](const std::vector<std::string>& keys, const std::vector<std::string>& values) {
        io::json o = io::json::object();
        for (std::size_t i = 0; i < keys.size(); ++i) {
            o[keys[i]] = values[i].empty() ? io::json(nullptr) : io::json(values[i]);
        }
        return o;
    };
    io::json doc{{"trials", io::json::array()}, {"aggregate", io::json::array()}};
    for (const auto& t : trials) {
        doc["trials"].push_back(to_object(header, trial_row(t, l)));
    }
    for (const auto& c : cells) {
        doc["aggregate"].push_back(to_object(aggregate_header(), aggregate_row(c)));
    }
    return doc.dump(2) + "\n";
}

/// Writes trials + aggregate into `dir`; returns the written paths.
inline std::vector<std::filesystem::path> emit(const std::vector<TrialReport>& trials,
                                               const std::vector<CellSummary>& cells,
                                               const std::filesystem::path& dir, Format format) {
    if (trials.empty()) {
        throw std::invalid_argument("emit: no trials to report");
    }
    detail::prepare_dir(dir);
    if (format == Format::csv) {
        const auto a = dir / "trials.csv";
        const auto b = dir / "aggregate.csv";
        detail::write_file(a, trials_csv(trials));
        detail::write_file(b, aggregate_csv(cells));
        return {a, b};
    }
    const auto p = dir / "report.json";
    detail::write_file(p, text_report(trials, cells));
    return {p};
}

/// Splits one CSV record (no embedded newlines).
[[nodiscard]] inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

namespace detail {

inline double parse_double(const std::string& s, const std::string& column) {
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
        throw IoError("trial table: bad number '" + s + "' in column " + column);
    }
    return x;
}

template <class Int>
Int parse_int(const std::string& s, const std::string& column) {
    Int x{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
        throw IoError("trial table: bad integer '" + s + "' in column " + column);
    }
    return x;
}

}  // namespace detail

/// Reads a trial table written by trials_csv. Polytopes are not stored and stay empty.
[[nodiscard]] inline std::vector<TrialReport> parse_trials_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("trial table is empty");
    }
    const auto header = split_csv_line(line);
    const auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };
    for (const char* required : {"seed", "N", "N_data", "sigma_du", "sigma_dy", "total_E", "status"}) {
        if (!column(required)) {
            throw IoError(std::string("trial table: missing column ") + required);
        }
    }
    const auto series = [&](const std::string& prefix, std::size_t first) {
        std::vector<std::size_t> idx;
        for (std::size_t i = first;; ++i) {
            const auto c = column(prefix + std::to_string(i));
            if (!c) break;
            idx.push_back(*c);
        }
        return idx;
    };
    const auto e_cols = series("E_", 0);
    const auto conv_cols = series("fit_conv_y", 1);
    const auto pso_cols = series("fit_pso_y", 1);
    const auto lambda_cols = series("lambda_", 0);

    std::vector<TrialReport> trials;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw IoError("trial table: row " + std::to_string(trials.size() + 1) + " has " +
                          std::to_string(cells.size()) + " cells, header has " + std::to_string(header.size()));
        }
        const auto cell = [&](const std::string& name) -> const std::string& { return cells[*column(name)]; };
        const auto number = [&](const std::string& name) {
            const auto c = column(name);
            return c && !cells[*c].empty() ? detail::parse_double(cells[*c], name) : 0.0;
        };
        const auto collect = [&](const std::vector<std::size_t>& idx) {
            std::vector<double> v;
            for (const std::size_t i : idx) {
                if (!cells[i].empty()) v.push_back(detail::parse_double(cells[i], header[i]));
            }
            return v;
        };
        TrialReport t;
        t.seed = detail::parse_int<std::uint64_t>(cell("seed"), "seed");
        t.period = detail::parse_int<Index>(cell("N"), "N");
        t.n_data = detail::parse_int<Index>(cell("N_data"), "N_data");
        t.sigma_du = number("sigma_du");
        t.sigma_dy = number("sigma_dy");
        t.status = cell("status");
        if (t.ok()) {
            t.vertex_errors = collect(e_cols);
            t.total_error = number("total_E");
            t.fit_conventional = {collect(conv_cols), number("fit_conv_mean")};
            t.fit_polytope = {collect(pso_cols), number("fit_pso_mean")};
            t.e_lambda_star = number("E_lambda_star");
            t.lambda = collect(lambda_cols);
            t.structure_residual = number("structure_residual");
            t.condition_estimate = number("condition_estimate");
        }
        if (const auto c = column("wall_ms"); c && !cells[*c].empty()) {
            t.wall_ms = detail::parse_double(cells[*c], "wall_ms");
        }
        trials.push_back(std::move(t));
    }
    return trials;
}

[[nodiscard]] inline std::vector<TrialReport> load_trials_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return parse_trials_csv(in);
}

}  // namespace cyclopoly::report
