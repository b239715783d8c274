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
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cyclopoly/io.hpp"
#include "cyclopoly/metrics.hpp"
#include "cyclopoly/pso.hpp"
#include "cyclopoly/structure.hpp"
#include "cyclopoly/subspace.hpp"

namespace cyclopoly {

/// The 3rd-order, 1-input, 2-output benchmark plant in its original coordinates.
[[nodiscard]] inline StateSpaceModel benchmark_plant_original() {
    Matrix a(3, 3);
    a << 0.64, 0.33, 0.6, -0.72, -0.34, 0.7, 0.5, 0.6, 0.4;
    Matrix b(3, 1);
    b << 1.0, 2.0, 1.0;
    Matrix c(2, 3);
    c << 1.0, 0.0, 0.0, 0.0, 1.0, 1.0;
    return {std::move(a), std::move(b), std::move(c), Matrix::Zero(2, 1)};
}

/// The benchmark plant in controllable companion form; simulated and scored against.
[[nodiscard]] inline StateSpaceModel benchmark_plant() { return to_controllable_companion(benchmark_plant_original()); }

inline constexpr const char* kBenchmarkPlantPreset = "benchmark";

/// Location/scale of a Gaussian source; seeds are assigned per trial.
struct GaussianLevel {
    double mean = 0.0;
    double std_dev = 0.0;
};

/// Everything a trial needs except its seed. Key names mirror the JSON schema.
struct ExperimentConfig {
    std::string plant_label = kBenchmarkPlantPreset;
    StateSpaceModel plant = benchmark_plant();
    Index period = 6;
    Index n_data = 3000;
    Index n_val = 1000;
    GaussianLevel input{0.0, 1.0};
    GaussianLevel process_noise{0.0, 0.1};
    GaussianLevel observation_noise{0.0, 0.05};
    Index block_rows = 0;
    double rank_tolerance = kDefaultRankTolerance;
    RoutePreference route = RoutePreference::automatic;
    PsoParams pso{};
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    std::string output_dir = "out";
    /// Fill wall_ms in reports. Off by default so reruns are byte-identical.
    bool record_timing = false;

    /// Scoring basis: companion form for single-input plants, the plant itself otherwise.
    [[nodiscard]] StateSpaceModel truth() const {
        return plant.inputs() == 1 ? to_controllable_companion(plant) : plant;
    }

    [[nodiscard]] IdentificationConfig cycled_identification() const {
        return {period * plant.states(), block_rows, rank_tolerance};
    }

    [[nodiscard]] IdentificationConfig conventional_identification() const {
        return {plant.states(), 0, rank_tolerance};
    }

    [[nodiscard]] Index minimum_n_data() const {
        return std::max(
            cycled_identification().minimum_samples(period * plant.inputs(), period * plant.outputs()),
            conventional_identification().minimum_samples(plant.inputs(), plant.outputs()));
    }

    void validate() const {
        try {
            if (period < 1) {
                throw ConfigError("period must be >= 1");
            }
            if (trials < 1) {
                throw ConfigError("trials must be >= 1");
            }
            if (n_val < 2) {
                throw ConfigError("n_val must be >= 2");
            }
            NoiseSpec{input.mean, input.std_dev, 0}.validate();
            NoiseSpec{process_noise.mean, process_noise.std_dev, 0}.validate();
            NoiseSpec{observation_noise.mean, observation_noise.std_dev, 0}.validate();
            if (!(input.std_dev > 0.0)) {
                throw ConfigError("input std_dev must be positive (the excitation must be persistent)");
            }
            cycled_identification().validate(period * plant.outputs());
            conventional_identification().validate(plant.outputs());
            if (n_data < minimum_n_data()) {
                throw ConfigError("n_data = " + std::to_string(n_data) + " is below the minimum " +
                                  std::to_string(minimum_n_data()) + " for period " + std::to_string(period));
            }
            pso.validate();
            if (plant.inputs() == 1) {
                (void)truth();
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
};

namespace detail {

inline const char* route_name(RoutePreference r) {
    switch (r) {
        case RoutePreference::controllability: return "controllability";
        case RoutePreference::observability: return "observability";
        case RoutePreference::automatic: break;
    }
    return "auto";
}

inline RoutePreference parse_route(const std::string& s) {
    if (s == "auto") return RoutePreference::automatic;
    if (s == "controllability") return RoutePreference::controllability;
    if (s == "observability") return RoutePreference::observability;
    throw ConfigError("route must be auto, controllability or observability (got '" + s + "')");
}

inline void reject_unknown_keys(const io::json& j, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

inline GaussianLevel level_from_json(const io::json& j, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + " must be an object with mean and std_dev");
    }
    reject_unknown_keys(j, {"mean", "std_dev"}, where);
    return {j.value("mean", 0.0), j.value("std_dev", 0.0)};
}

}  // namespace detail

/**
 * Reads a config document. Schema (all keys optional except master_seed):
 *
 *   plant              "benchmark" | {"A": rows, "B": rows, "C": rows, "D": rows}
 *   period, n_data, n_val, trials, master_seed, output_dir
 *   input, process_noise, observation_noise   {"mean": x, "std_dev": s}
 *   identification     {"block_rows": i (0 = auto), "rank_tolerance": t}
 *   route              "auto" | "controllability" | "observability"
 *   pso                {"population", "max_iterations", "inertia", "cognitive",
 *                       "social", "penalty_coefficient", "velocity_limit"}
 */
[[nodiscard]] inline ExperimentConfig config_from_json(const io::json& j) {
    try {
        if (!j.is_object()) {
            throw ConfigError("config must be a JSON object");
        }
        detail::reject_unknown_keys(j,
                                    {"plant", "period", "n_data", "n_val", "input", "process_noise",
                                     "observation_noise", "identification", "route", "pso", "trials", "master_seed",
                                     "output_dir"},
                                    "config");
        if (!j.contains("master_seed")) {
            throw ConfigError("config must set master_seed");
        }
        ExperimentConfig c;
        if (j.contains("plant")) {
            const auto& p = j.at("plant");
            if (p.is_string()) {
                if (p.get<std::string>() != kBenchmarkPlantPreset) {
                    throw ConfigError("unknown plant preset '" + p.get<std::string>() + "'");
                }
            } else {
                c.plant = io::model_from_json(p);
                c.plant_label = "custom";
            }
        }
        c.period = j.value("period", c.period);
        c.n_data = j.value("n_data", c.n_data);
        c.n_val = j.value("n_val", c.n_val);
        c.trials = j.value("trials", c.trials);
        c.master_seed = j.at("master_seed").get<std::uint64_t>();
        c.output_dir = j.value("output_dir", c.output_dir);
        if (j.contains("input")) c.input = detail::level_from_json(j.at("input"), "input");
        if (j.contains("process_noise")) c.process_noise = detail::level_from_json(j.at("process_noise"), "process_noise");
        if (j.contains("observation_noise")) {
            c.observation_noise = detail::level_from_json(j.at("observation_noise"), "observation_noise");
        }
        if (j.contains("identification")) {
            const auto& id = j.at("identification");
            detail::reject_unknown_keys(id, {"block_rows", "rank_tolerance"}, "identification");
            c.block_rows = id.value("block_rows", c.block_rows);
            c.rank_tolerance = id.value("rank_tolerance", c.rank_tolerance);
        }
        if (j.contains("route")) c.route = detail::parse_route(j.at("route").get<std::string>());
        if (j.contains("pso")) {
            const auto& p = j.at("pso");
            detail::reject_unknown_keys(p,
                                        {"population", "max_iterations", "inertia", "cognitive", "social",
                                         "penalty_coefficient", "velocity_limit"},
                                        "pso");
            c.pso.population = p.value("population", c.pso.population);
            c.pso.max_iterations = p.value("max_iterations", c.pso.max_iterations);
            c.pso.inertia = p.value("inertia", c.pso.inertia);
            c.pso.cognitive = p.value("cognitive", c.pso.cognitive);
            c.pso.social = p.value("social", c.pso.social);
            c.pso.penalty_coefficient = p.value("penalty_coefficient", c.pso.penalty_coefficient);
            c.pso.velocity_limit = p.value("velocity_limit", c.pso.velocity_limit);
        }
        return c;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

[[nodiscard]] inline io::json config_to_json(const ExperimentConfig& c) {
    io::json plant = c.plant_label == kBenchmarkPlantPreset ? io::json(kBenchmarkPlantPreset) : io::model_to_json(c.plant);
    return io::json{
        {"plant", std::move(plant)},
        {"period", c.period},
        {"n_data", c.n_data},
        {"n_val", c.n_val},
        {"input", {{"mean", c.input.mean}, {"std_dev", c.input.std_dev}}},
        {"process_noise", {{"mean", c.process_noise.mean}, {"std_dev", c.process_noise.std_dev}}},
        {"observation_noise", {{"mean", c.observation_noise.mean}, {"std_dev", c.observation_noise.std_dev}}},
        {"identification", {{"block_rows", c.block_rows}, {"rank_tolerance", c.rank_tolerance}}},
        {"route", detail::route_name(c.route)},
        {"pso",
         {{"population", c.pso.population},
          {"max_iterations", c.pso.max_iterations},
          {"inertia", c.pso.inertia},
          {"cognitive", c.pso.cognitive},
          {"social", c.pso.social},
          {"penalty_coefficient", c.pso.penalty_coefficient},
          {"velocity_limit", c.pso.velocity_limit}}},
        {"trials", c.trials},
        {"master_seed", c.master_seed},
        {"output_dir", c.output_dir}};
}

/// Seed of trial `index` under a master seed. Shared by every cell of a study.
[[nodiscard]] inline std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index) {
    return derive_seed(master_seed, index);
}

/// Per-trial streams.
enum class SeedStream : std::uint64_t { input = 1, process = 2, observation = 3, validation = 4, pso = 5 };

[[nodiscard]] inline std::uint64_t stream_seed(std::uint64_t trial, SeedStream s) {
    return derive_seed(trial, static_cast<std::uint64_t>(s));
}

struct TrialReport {
    std::uint64_t seed = 0;
    Index period = 0;
    Index n_data = 0;
    double sigma_du = 0.0;
    double sigma_dy = 0.0;
    /// "ok" or a failure kind (degenerate_data, unrecoverable_structure, ...).
    std::string status = "ok";
    std::string message;

    std::vector<double> vertex_errors;
    double total_error = 0.0;
    FitReport fit_conventional;
    FitReport fit_polytope;
    double e_lambda_star = 0.0;
    std::vector<double> lambda;
    double structure_residual = 0.0;
    double condition_estimate = 0.0;
    std::optional<double> wall_ms;

    std::optional<PolytopeModel> polytope;
    std::string route;

    [[nodiscard]] bool ok() const noexcept { return status == "ok"; }
};

/**
 * One end-to-end trial:
 *   1. excite the truth model with Gaussian input and simulate noisy data
 *   2. cycle the signals with the configured period
 *   3. identify the lifted model at order N*n
 *   4. recover the cyclic pattern and read out N vertices
 *   5. form the polytope and fit its weights on a fresh noise-free validation record
 * plus the order-n conventional baseline on the raw data. Pipeline failures
 * are returned as a failed report, never thrown.
 */
[[nodiscard]] inline TrialReport run_pipeline(const ExperimentConfig& config, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    TrialReport report;
    report.seed = seed;
    report.period = config.period;
    report.n_data = config.n_data;
    report.sigma_du = config.process_noise.std_dev;
    report.sigma_dy = config.observation_noise.std_dev;

    const auto fail = [&](const char* kind, const std::exception& e) {
        report.status = kind;
        report.message = e.what();
    };

    try {
        const StateSpaceModel truth = config.truth();
        const Index n = truth.states();
        const Index m = truth.inputs();
        const Index q = truth.outputs();
        const Index period = config.period;

        const Matrix u = generate_gaussian_signal(m, config.n_data, config.input.mean, config.input.std_dev,
                                                  stream_seed(seed, SeedStream::input));
        const SignalRecord data = simulate(
            truth, u,
            NoiseSpec{config.process_noise.mean, config.process_noise.std_dev, stream_seed(seed, SeedStream::process)},
            NoiseSpec{config.observation_noise.mean, config.observation_noise.std_dev,
                      stream_seed(seed, SeedStream::observation)});

        const SignalRecord cycled(cycle_signal(data.inputs(), period), cycle_signal(data.outputs(), period));
        const StateSpaceModel lifted = subspace_identify(cycled, config.cycled_identification());
        RecoveryResult recovered = recover_vertices(CycledSystem(lifted, period, BaseDims{n, m, q}), config.route);
        PolytopeModel polytope(recovered.vertex_set);

        const StateSpaceModel conventional = subspace_identify(data, config.conventional_identification());

        const Matrix u_val = generate_gaussian_signal(m, config.n_val, 0.0, 1.0, stream_seed(seed, SeedStream::validation));
        const Matrix y_val = simulate_outputs(truth, u_val);

        PsoParams pso = config.pso;
        pso.seed = stream_seed(seed, SeedStream::pso);
        const PredictionErrorObjective objective(polytope, u_val, y_val);
        const ObjectiveReport best = optimize(objective, polytope.size(), pso);
        const StateSpaceModel combined = evaluate(polytope, best.best_weights);

        report.vertex_errors = vertex_errors(truth, recovered.vertex_set);
        report.total_error = 0.0;
        for (const double e : report.vertex_errors) {
            report.total_error += e;
        }
        report.fit_conventional = fit(y_val, simulate_outputs(conventional, u_val));
        report.fit_polytope = fit(y_val, simulate_outputs(combined, u_val));
        report.e_lambda_star = param_error(truth, combined);
        report.lambda.assign(best.best_weights.values().begin(), best.best_weights.values().end());
        report.structure_residual = recovered.structure_residual;
        report.condition_estimate = recovered.condition_estimate;
        report.route = to_string(recovered.route_used);
        report.polytope = std::move(polytope);
    } catch (const DegenerateDataError& e) {
        fail("degenerate_data", e);
    } catch (const UnrecoverableStructureError& e) {
        fail("unrecoverable_structure", e);
    } catch (const SingularTransformError& e) {
        fail("singular_transform", e);
    } catch (const LengthError& e) {
        fail("insufficient_data", e);
    } catch (const DegenerateReferenceError& e) {
        fail("degenerate_reference", e);
    } catch (const std::exception& e) {
        fail("error", e);
    }
    if (config.record_timing) {
        report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return report;
}

/// Runs `jobs` independent tasks on up to `threads` workers; results land by index.
template <class Job>
void parallel_for(std::size_t jobs, std::size_t threads, const Job& job) {
    if (threads == 0) {
        threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, jobs);
    if (threads <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < jobs; i = next++) {
                job(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

/// `trials` pipelines with seeds trial_seed(master_seed, 0..trials-1), in seed order.
[[nodiscard]] inline std::vector<TrialReport> run_trials(const ExperimentConfig& config, std::size_t trials,
                                                         std::size_t threads = 0) {
    config.validate();
    std::vector<TrialReport> out(trials);
    parallel_for(trials, threads, [&](std::size_t t) { out[t] = run_pipeline(config, trial_seed(config.master_seed, t)); });
    return out;
}

enum class StudyKind { noise, data_length, period };

[[nodiscard]] inline StudyKind parse_study(const std::string& s) {
    if (s == "noise") return StudyKind::noise;
    if (s == "ndata") return StudyKind::data_length;
    if (s == "period") return StudyKind::period;
    throw ConfigError("study must be noise, ndata or period (got '" + s + "')");
}

struct StudyCell {
    std::string label;
    ExperimentConfig config;
};

/**
 * Study grids.
 *   noise:  (sigma_du, sigma_dy) in (0.01, 0.005), (0.05, 0.025), (0.10, 0.05),
 *           (0.00, 0.05), (0.10, 0.00) at the template's N and N_data
 *   ndata:  N_data in {1000, 2000, 4000, 8000}, N = 6
 *   period: N in {2, 3, 4, 6, 8}, N_data = 3000
 */
[[nodiscard]] inline std::vector<StudyCell> study_grid(StudyKind kind, const ExperimentConfig& base) {
    std::vector<StudyCell> cells;
    switch (kind) {
        case StudyKind::noise: {
            struct Level {
                const char* label;
                double du;
                double dy;
            };
            // Labels name the noise that is actually present in each setting.
            for (const Level l : {Level{"low", 0.01, 0.005}, Level{"medium", 0.05, 0.025}, Level{"high", 0.10, 0.05},
                                  Level{"obs-only", 0.0, 0.05}, Level{"proc-only", 0.10, 0.0}}) {
                ExperimentConfig c = base;
                c.process_noise.std_dev = l.du;
                c.observation_noise.std_dev = l.dy;
                cells.push_back({l.label, std::move(c)});
            }
            break;
        }
        case StudyKind::data_length:
            for (const Index nd : {1000, 2000, 4000, 8000}) {
                ExperimentConfig c = base;
                c.period = 6;
                c.n_data = nd;
                cells.push_back({"N_data=" + std::to_string(nd), std::move(c)});
            }
            break;
        case StudyKind::period:
            for (const Index np : {2, 3, 4, 6, 8}) {
                ExperimentConfig c = base;
                c.period = np;
                c.n_data = 3000;
                cells.push_back({"N=" + std::to_string(np), std::move(c)});
            }
            break;
    }
    return cells;
}

/// Aggregates over the successful trials of one cell; unset fields are "absent".
struct CellSummary {
    Index period = 0;
    Index n_data = 0;
    double sigma_du = 0.0;
    double sigma_dy = 0.0;
    std::size_t trials = 0;
    std::size_t failed = 0;
    std::optional<double> mean_total_error;
    std::optional<double> std_total_error;
    std::optional<double> avg_vertex_std;
    std::optional<double> min_vertex_error;
    std::optional<double> max_vertex_error;
    std::optional<double> mean_vertex_error;
    std::optional<double> std_vertex_error;
    std::optional<double> mean_fit_conventional;
    std::optional<double> mean_fit_polytope;
    std::optional<double> mean_fit_improvement;
    std::optional<double> improved_fraction;
    std::optional<double> mean_e_lambda_star;
};

namespace detail {

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

/// Sample standard deviation; absent below two samples.
inline std::optional<double> std_of(const std::vector<double>& v) {
    if (v.size() < 2) {
        return std::nullopt;
    }
    const double mu = mean_of(v);
    double s = 0.0;
    for (const double x : v) {
        s += (x - mu) * (x - mu);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail

/// Summary of trials sharing one (N, N_data, sigma_du, sigma_dy) cell.
[[nodiscard]] inline CellSummary summarize(const std::vector<const TrialReport*>& trials) {
    CellSummary s;
    if (trials.empty()) {
        return s;
    }
    s.period = trials.front()->period;
    s.n_data = trials.front()->n_data;
    s.sigma_du = trials.front()->sigma_du;
    s.sigma_dy = trials.front()->sigma_dy;
    s.trials = trials.size();

    std::vector<double> totals;
    std::vector<double> pooled;
    std::vector<double> per_trial_std;
    std::vector<double> conv;
    std::vector<double> poly;
    std::vector<double> improvement;
    std::vector<double> e_star;
    std::size_t improved = 0;
    for (const TrialReport* t : trials) {
        if (!t->ok()) {
            ++s.failed;
            continue;
        }
        totals.push_back(t->total_error);
        pooled.insert(pooled.end(), t->vertex_errors.begin(), t->vertex_errors.end());
        if (auto sd = detail::std_of(t->vertex_errors)) {
            per_trial_std.push_back(*sd);
        }
        conv.push_back(t->fit_conventional.mean_fit);
        poly.push_back(t->fit_polytope.mean_fit);
        improvement.push_back(t->fit_polytope.mean_fit - t->fit_conventional.mean_fit);
        e_star.push_back(t->e_lambda_star);
        if (t->fit_polytope.mean_fit >= t->fit_conventional.mean_fit) {
            ++improved;
        }
    }
    if (totals.empty()) {
        return s;
    }
    s.mean_total_error = detail::mean_of(totals);
    s.std_total_error = detail::std_of(totals);
    if (!per_trial_std.empty()) {
        s.avg_vertex_std = detail::mean_of(per_trial_std);
    }
    if (!pooled.empty()) {
        s.min_vertex_error = *std::min_element(pooled.begin(), pooled.end());
        s.max_vertex_error = *std::max_element(pooled.begin(), pooled.end());
        s.mean_vertex_error = detail::mean_of(pooled);
        s.std_vertex_error = detail::std_of(pooled);
    }
    s.mean_fit_conventional = detail::mean_of(conv);
    s.mean_fit_polytope = detail::mean_of(poly);
    s.mean_fit_improvement = detail::mean_of(improvement);
    s.improved_fraction = static_cast<double>(improved) / static_cast<double>(totals.size());
    s.mean_e_lambda_star = detail::mean_of(e_star);
    return s;
}

/// Groups trials by cell in order of first appearance and summarizes each group.
[[nodiscard]] inline std::vector<CellSummary> aggregate(const std::vector<TrialReport>& trials) {
    std::vector<std::vector<const TrialReport*>> groups;
    for (const auto& t : trials) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
            const TrialReport* f = g.front();
            return f->period == t.period && f->n_data == t.n_data && f->sigma_du == t.sigma_du &&
                   f->sigma_dy == t.sigma_dy;
        });
        if (it == groups.end()) {
            groups.push_back({&t});
        } else {
            it->push_back(&t);
        }
    }
    std::vector<CellSummary> out;
    out.reserve(groups.size());
    for (const auto& g : groups) {
        out.push_back(summarize(g));
    }
    return out;
}

struct StudyResult {
    std::vector<std::string> labels;
    std::vector<TrialReport> trials;
    std::vector<CellSummary> cells;
};

/**
 * Sweeps a study grid. Every cell reuses the same per-trial seeds, so cells
 * differ only in the swept variable. Failed trials are kept in `trials` and
 * counted (not averaged) in `cells`.
 */
[[nodiscard]] inline StudyResult run_study(StudyKind kind, const ExperimentConfig& base, std::size_t trials,
                                           std::size_t threads = 0) {
    if (trials < 1) {
        throw ConfigError("study needs at least one trial");
    }
    const auto grid = study_grid(kind, base);
    for (const auto& cell : grid) {
        cell.config.validate();
    }
    StudyResult result;
    result.trials.resize(grid.size() * trials);
    parallel_for(result.trials.size(), threads, [&](std::size_t job) {
        const auto& cell = grid[job / trials];
        result.trials[job] = run_pipeline(cell.config, trial_seed(base.master_seed, job % trials));
    });
    for (const auto& cell : grid) {
        result.labels.push_back(cell.label);
    }
    result.cells = aggregate(result.trials);
    return result;
}

}  // namespace cyclopoly
