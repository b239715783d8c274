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
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

namespace cp = cyclopoly;
namespace fs = std::filesystem;
using cp::Index;
using cp::Matrix;

namespace {

cp::ExperimentConfig small_config() {
    cp::ExperimentConfig c;
    c.n_data = 1500;
    c.n_val = 400;
    c.period = 3;
    c.pso.population = 12;
    c.pso.max_iterations = 25;
    c.master_seed = 42;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("cyclopoly_test_" + name);
    fs::remove_all(d);
    return d;
}

TEST(Config, DefaultsValidate) {
    cp::ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.n_val, 1000);
    EXPECT_EQ(c.period, 6);
    EXPECT_EQ(c.n_data, 3000);
}

TEST(Config, RejectsBadValuesBeforeComputation) {
    auto c = small_config();
    c.n_data = c.minimum_n_data() - 1;
    EXPECT_THROW(c.validate(), cp::ConfigError);
    c = small_config();
    c.period = 0;
    EXPECT_THROW(c.validate(), cp::ConfigError);
    c = small_config();
    c.trials = 0;
    EXPECT_THROW(c.validate(), cp::ConfigError);
    c = small_config();
    c.process_noise.std_dev = -0.1;
    EXPECT_THROW(c.validate(), cp::ConfigError);
    c = small_config();
    c.pso.population = 1;
    EXPECT_THROW(c.validate(), cp::ConfigError);
    c = small_config();
    c.n_data = c.minimum_n_data();
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, JsonParsing) {
    const auto j = cp::io::json::parse(R"({
        "plant": "benchmark", "period": 4, "n_data": 2000, "n_val": 500,
        "process_noise": {"mean": 0.0, "std_dev": 0.05},
        "observation_noise": {"std_dev": 0.02},
        "identification": {"block_rows": 0, "rank_tolerance": 1e-9},
        "route": "observability",
        "pso": {"population": 30, "velocity_limit": 0.2},
        "trials": 3, "master_seed": 123, "output_dir": "x"})");
    const auto c = cp::config_from_json(j);
    EXPECT_EQ(c.period, 4);
    EXPECT_EQ(c.n_data, 2000);
    EXPECT_EQ(c.n_val, 500);
    EXPECT_EQ(c.process_noise.std_dev, 0.05);
    EXPECT_EQ(c.observation_noise.std_dev, 0.02);
    EXPECT_EQ(c.rank_tolerance, 1e-9);
    EXPECT_EQ(c.route, cp::RoutePreference::observability);
    EXPECT_EQ(c.pso.population, 30u);
    EXPECT_EQ(c.pso.max_iterations, 200u);
    EXPECT_EQ(c.pso.velocity_limit, 0.2);
    EXPECT_EQ(c.trials, 3u);
    EXPECT_EQ(c.master_seed, 123u);
    EXPECT_EQ(c.output_dir, "x");

    const auto back = cp::config_from_json(cp::config_to_json(c));
    EXPECT_EQ(cp::config_to_json(back), cp::config_to_json(c));
}

TEST(Config, JsonRejections) {
    EXPECT_THROW((void)cp::config_from_json(cp::io::json::parse(R"({"period": 3})")), cp::ConfigError);
    EXPECT_THROW((void)cp::config_from_json(cp::io::json::parse(R"({"master_seed": 1, "perod": 3})")), cp::ConfigError);
    EXPECT_THROW((void)cp::config_from_json(cp::io::json::parse(R"({"master_seed": 1, "plant": "other"})")),
                 cp::ConfigError);
    EXPECT_THROW((void)cp::config_from_json(cp::io::json::parse(R"({"master_seed": 1, "route": "both"})")),
                 cp::ConfigError);
    EXPECT_THROW((void)cp::config_from_json(cp::io::json::parse(R"({"master_seed": 1, "pso": {"swarm": 3}})")),
                 cp::ConfigError);
    EXPECT_THROW((void)cp::config_from_json(cp::io::json::parse(R"({"master_seed": "one"})")), cp::ConfigError);
}

TEST(Config, CustomPlantUsesCompanionTruth) {
    const auto j = cp::io::json::parse(R"({"master_seed": 1, "plant":
        {"A": [[0.5, 0.1], [0.0, 0.3]], "B": [[0.0], [1.0]], "C": [[1.0, 0.0]], "D": [[0.0]]}})");
    const auto c = cp::config_from_json(j);
    EXPECT_EQ(c.plant.states(), 2);
    EXPECT_EQ(c.truth().B(), cp::linalg::unit_vector(2, 0));
    EXPECT_LT(cp::testing::max_markov_gap(c.truth(), c.plant, 10), 1e-12);
}

TEST(Pipeline, NoiseFreeRecoversPlantExactly) {
    auto c = small_config();
    c.period = 6;
    c.n_data = 3000;
    c.process_noise.std_dev = 0.0;
    c.observation_noise.std_dev = 0.0;
    const auto r = cp::run_pipeline(c, 5);
    ASSERT_TRUE(r.ok()) << r.message;
    ASSERT_EQ(r.vertex_errors.size(), 6u);
    for (const double e : r.vertex_errors) EXPECT_LT(e, 1e-10);
    EXPECT_LT(r.total_error, 1e-9);
    for (const double f : r.fit_conventional.per_output_fit) EXPECT_NEAR(f, 100.0, 1e-6);
    for (const double f : r.fit_polytope.per_output_fit) EXPECT_NEAR(f, 100.0, 1e-6);
    EXPECT_FALSE(r.wall_ms.has_value());
}

TEST(Pipeline, AccountingAndReportFields) {
    auto c = small_config();
    c.record_timing = true;
    const auto r = cp::run_pipeline(c, 6);
    ASSERT_TRUE(r.ok()) << r.message;
    double sum = 0.0;
    for (const double e : r.vertex_errors) sum += e;
    EXPECT_NEAR(r.total_error, sum, 1e-12);
    EXPECT_EQ(r.lambda.size(), 3u);
    EXPECT_TRUE(cp::validate_simplex(r.lambda, 1e-10).valid);
    EXPECT_EQ(r.fit_conventional.per_output_fit.size(), 2u);
    EXPECT_TRUE(r.wall_ms.has_value());
    ASSERT_TRUE(r.polytope.has_value());
    EXPECT_NEAR(r.e_lambda_star, cp::param_error(c.truth(), cp::evaluate(*r.polytope, cp::SimplexWeights(r.lambda))),
                1e-12);
    EXPECT_EQ(r.route, "controllability");
}

TEST(Pipeline, SameSeedSameReport) {
    const auto c = small_config();
    const auto a = cp::run_pipeline(c, 7);
    const auto b = cp::run_pipeline(c, 7);
    EXPECT_EQ(a.vertex_errors, b.vertex_errors);
    EXPECT_EQ(a.lambda, b.lambda);
    EXPECT_EQ(a.fit_polytope.mean_fit, b.fit_polytope.mean_fit);
}

TEST(Pipeline, FailureBecomesStatusNotException) {
    // Second state is unobservable: the lifted data cannot support order N*n.
    cp::ExperimentConfig c = small_config();
    c.plant = cp::StateSpaceModel(cp::testing::mat(2, 2, {0.5, 0.0, 0.0, 0.3}), cp::testing::mat(2, 2, {1, 0, 0, 1}),
                                  cp::testing::mat(1, 2, {1, 0}), Matrix::Zero(1, 2));
    c.plant_label = "custom";
    c.process_noise.std_dev = 0.0;
    c.observation_noise.std_dev = 0.0;
    cp::TrialReport r;
    ASSERT_NO_THROW(r = cp::run_pipeline(c, 8));
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.status, "degenerate_data");
    EXPECT_FALSE(r.message.empty());
}

TEST(Pipeline, HighNoisePolytopeUsuallyBeatsBaseline) {
    auto c = small_config();
    c.period = 6;
    c.n_data = 3000;
    c.n_val = 1000;
    c.pso = cp::PsoParams{};
    int better = 0;
    for (std::uint64_t t = 0; t < 5; ++t) {
        const auto r = cp::run_pipeline(c, cp::trial_seed(99, t));
        ASSERT_TRUE(r.ok()) << r.message;
        if (r.fit_polytope.mean_fit >= r.fit_conventional.mean_fit) ++better;
        for (const double f : r.fit_conventional.per_output_fit) {
            EXPECT_GT(f, 95.0);
            EXPECT_LT(f, 99.5);
        }
    }
    EXPECT_GE(better, 4);
}

TEST(Trials, ConcurrencyDoesNotChangeResults) {
    auto c = small_config();
    c.pso.max_iterations = 5;
    const auto serial = cp::run_trials(c, 4, 1);
    const auto threaded = cp::run_trials(c, 4, 3);
    EXPECT_EQ(cp::report::trials_csv(serial), cp::report::trials_csv(threaded));
    for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(serial[t].seed, cp::trial_seed(c.master_seed, t));
}

TEST(Study, GridsMatchDocumentedValues) {
    const cp::ExperimentConfig base;
    const auto noise = cp::study_grid(cp::StudyKind::noise, base);
    ASSERT_EQ(noise.size(), 5u);
    const std::vector<std::pair<double, double>> expected{{0.01, 0.005}, {0.05, 0.025}, {0.1, 0.05}, {0.0, 0.05}, {0.1, 0.0}};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(noise[i].config.process_noise.std_dev, expected[i].first);
        EXPECT_EQ(noise[i].config.observation_noise.std_dev, expected[i].second);
    }
    const auto nd = cp::study_grid(cp::StudyKind::data_length, base);
    ASSERT_EQ(nd.size(), 4u);
    EXPECT_EQ(nd[0].config.n_data, 1000);
    EXPECT_EQ(nd[3].config.n_data, 8000);
    for (const auto& cell : nd) EXPECT_EQ(cell.config.period, 6);
    const auto per = cp::study_grid(cp::StudyKind::period, base);
    ASSERT_EQ(per.size(), 5u);
    EXPECT_EQ(per[0].config.period, 2);
    EXPECT_EQ(per[4].config.period, 8);
    for (const auto& cell : per) EXPECT_EQ(cell.config.n_data, 3000);
    EXPECT_THROW((void)cp::parse_study("bogus"), cp::ConfigError);
}

TEST(Study, SingleTrialHasAbsentStdColumns) {
    auto c = small_config();
    c.pso.max_iterations = 5;
    const auto r = cp::run_study(cp::StudyKind::period, c, 1);
    ASSERT_EQ(r.cells.size(), 5u);
    for (const auto& cell : r.cells) {
        EXPECT_EQ(cell.trials, 1u);
        if (cell.failed == 0) {
            EXPECT_TRUE(cell.mean_total_error.has_value());
            EXPECT_FALSE(cell.std_total_error.has_value());
        }
    }
    const std::string csv = cp::report::aggregate_csv(r.cells);
    EXPECT_NE(csv.find(",,"), std::string::npos);
    EXPECT_THROW((void)cp::run_study(cp::StudyKind::period, c, 0), cp::ConfigError);
}

TEST(Study, SeedsSharedAcrossCells) {
    auto c = small_config();
    c.pso.max_iterations = 3;
    const auto r = cp::run_study(cp::StudyKind::noise, c, 2);
    ASSERT_EQ(r.trials.size(), 10u);
    for (std::size_t i = 0; i < r.trials.size(); ++i) EXPECT_EQ(r.trials[i].seed, cp::trial_seed(c.master_seed, i % 2));
}

TEST(Aggregate, MatchesRecomputationFromCsvRows) {
    auto c = small_config();
    c.pso.max_iterations = 5;
    const auto trials = cp::run_trials(c, 6, 1);
    std::istringstream in(cp::report::trials_csv(trials));
    const auto parsed = cp::report::parse_trials_csv(in);
    ASSERT_EQ(parsed.size(), 6u);

    // Independent recomputation of the cell statistics.
    std::vector<double> totals, pooled;
    double sum_trial_std = 0.0;
    for (const auto& t : parsed) {
        totals.push_back(t.total_error);
        double mu = 0.0;
        for (const double e : t.vertex_errors) mu += e / 3.0;
        double var = 0.0;
        for (const double e : t.vertex_errors) var += (e - mu) * (e - mu) / 2.0;
        sum_trial_std += std::sqrt(var);
        pooled.insert(pooled.end(), t.vertex_errors.begin(), t.vertex_errors.end());
    }
    double mean = 0.0;
    for (const double x : totals) mean += x / 6.0;
    double var = 0.0;
    for (const double x : totals) var += (x - mean) * (x - mean) / 5.0;

    const auto cells = cp::aggregate(trials);
    ASSERT_EQ(cells.size(), 1u);
    EXPECT_NEAR(*cells[0].mean_total_error, mean, 1e-12);
    EXPECT_NEAR(*cells[0].std_total_error, std::sqrt(var), 1e-12);
    EXPECT_NEAR(*cells[0].avg_vertex_std, sum_trial_std / 6.0, 1e-12);
    EXPECT_EQ(*cells[0].min_vertex_error, *std::min_element(pooled.begin(), pooled.end()));
    EXPECT_EQ(*cells[0].max_vertex_error, *std::max_element(pooled.begin(), pooled.end()));
    EXPECT_EQ(cp::report::aggregate_csv(cp::aggregate(parsed)), cp::report::aggregate_csv(cells));
}

TEST(Aggregate, FailedTrialsCountedAndExcluded) {
    cp::TrialReport ok;
    ok.period = 2;
    ok.vertex_errors = {0.1, 0.3};
    ok.total_error = 0.4;
    cp::TrialReport bad = ok;
    bad.status = "degenerate_data";
    bad.total_error = 1e9;
    const auto cells = cp::aggregate({ok, bad, ok});
    ASSERT_EQ(cells.size(), 1u);
    EXPECT_EQ(cells[0].trials, 3u);
    EXPECT_EQ(cells[0].failed, 1u);
    EXPECT_DOUBLE_EQ(*cells[0].mean_total_error, 0.4);
    const auto all_bad = cp::aggregate({bad});
    EXPECT_FALSE(all_bad[0].mean_total_error.has_value());
}

TEST(Report, SingleTrialCsvShape) {
    auto c = small_config();
    c.pso.max_iterations = 5;
    const auto trials = cp::run_trials(c, 1, 1);
    const std::string csv = cp::report::trials_csv(trials);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
    const std::string header = csv.substr(0, csv.find('\n'));
    EXPECT_EQ(header,
              "seed,N,N_data,sigma_du,sigma_dy,E_0,E_1,E_2,total_E,fit_conv_mean,fit_pso_mean,fit_conv_y1,"
              "fit_conv_y2,fit_pso_y1,fit_pso_y2,E_lambda_star,lambda_0,lambda_1,lambda_2,structure_residual,"
              "condition_estimate,status,wall_ms");
}

TEST(Report, PaddingForMixedPeriods) {
    cp::TrialReport a, b;
    a.period = 2;
    a.vertex_errors = {1, 2};
    a.lambda = {0.5, 0.5};
    b.period = 3;
    b.vertex_errors = {1, 2, 3};
    b.lambda = {0.2, 0.3, 0.5};
    const cp::report::TrialLayout l = cp::report::TrialLayout::of({a, b});
    EXPECT_EQ(l.vertices, 3u);
    const auto row = cp::report::trial_row(a, l);
    EXPECT_EQ(row.size(), cp::report::trial_header(l).size());
    EXPECT_EQ(row[7], "");
}

TEST(Report, NumbersRoundTrip) {
    for (const double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5e-17}) {
        EXPECT_EQ(std::stod(cp::report::format_number(x)), x);
    }
}

TEST(Report, EmitIsByteIdenticalOnRerun) {
    auto c = small_config();
    c.pso.max_iterations = 5;
    const auto d1 = scratch_dir("emit1"), d2 = scratch_dir("emit2");
    for (const auto& d : {d1, d2}) {
        const auto r = cp::run_study(cp::StudyKind::noise, c, 2);
        cp::report::emit(r.trials, r.cells, d, cp::report::Format::csv);
        cp::report::emit(r.trials, r.cells, d, cp::report::Format::text);
    }
    for (const char* f : {"trials.csv", "aggregate.csv", "report.json"}) {
        EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
        EXPECT_FALSE(slurp(d1 / f).empty());
    }
    const auto doc = cp::io::json::parse(slurp(d1 / "report.json"));
    EXPECT_EQ(doc.at("trials").size(), 10u);
    EXPECT_EQ(doc.at("aggregate").size(), 5u);
}

TEST(Report, UnwritableDirectoryNamesPath) {
    const auto base = scratch_dir("blocked");
    fs::create_directories(base);
    std::ofstream(base / "file") << "x";
    cp::TrialReport t;
    t.period = 1;
    try {
        cp::report::emit({t}, cp::aggregate({t}), base / "file" / "sub", cp::report::Format::csv);
        FAIL() << "expected IoError";
    } catch (const cp::IoError& e) {
        EXPECT_NE(std::string(e.what()).find((base / "file" / "sub").string()), std::string::npos);
    }
    EXPECT_THROW(cp::report::emit({}, {}, base, cp::report::Format::csv), std::invalid_argument);
}

TEST(Report, ParserRejectsMalformedTables) {
    std::istringstream empty("");
    EXPECT_THROW((void)cp::report::parse_trials_csv(empty), cp::IoError);
    std::istringstream missing("seed,N\n1,2\n");
    EXPECT_THROW((void)cp::report::parse_trials_csv(missing), cp::IoError);
    std::istringstream ragged("seed,N,N_data,sigma_du,sigma_dy,total_E,status\n1,2,3\n");
    EXPECT_THROW((void)cp::report::parse_trials_csv(ragged), cp::IoError);
    EXPECT_EQ(cp::report::split_csv_line("a,\"b,c\",\"d\"\"e\""), (std::vector<std::string>{"a", "b,c", "d\"e"}));
}

}  // namespace
