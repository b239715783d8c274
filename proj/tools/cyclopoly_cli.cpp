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
// Command-line front end: run | study | report.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cyclopoly/cyclopoly.hpp"

namespace {

namespace fs = std::filesystem;
using namespace cyclopoly;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAllFailed = 2;

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> out;
    std::string format = "csv";
    std::string study;
    std::string input;
    std::size_t threads = 0;
    bool timing = false;
};

ExperimentConfig load_config(const Options& o) {
    ExperimentConfig config;
    if (o.config_path.empty()) {
        if (!o.seed) {
            throw ConfigError("either --config or --seed is required (the master seed is mandatory)");
        }
    } else {
        std::ifstream in(o.config_path);
        if (!in) {
            throw ConfigError("cannot read config '" + o.config_path + "'");
        }
        io::json j;
        try {
            in >> j;
        } catch (const io::json::parse_error& e) {
            throw ConfigError("config '" + o.config_path + "': " + e.what());
        }
        config = config_from_json(j);
    }
    if (o.seed) config.master_seed = *o.seed;
    if (o.trials) config.trials = *o.trials;
    if (o.out) config.output_dir = *o.out;
    config.record_timing = o.timing;
    config.validate();
    return config;
}

void print_summary(const std::vector<CellSummary>& cells, const std::vector<std::string>& labels) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        std::cout << (i < labels.size() ? labels[i] : "cell") << ": N=" << c.period << " N_data=" << c.n_data
                  << " sigma_du=" << c.sigma_du << " sigma_dy=" << c.sigma_dy << " ok=" << (c.trials - c.failed)
                  << "/" << c.trials;
        if (c.mean_total_error) std::cout << " mean_total_E=" << *c.mean_total_error;
        if (c.mean_fit_conventional) {
            std::cout << " fit_conv=" << *c.mean_fit_conventional << " fit_pso=" << *c.mean_fit_polytope;
        }
        std::cout << '\n';
    }
}

int finish(const std::vector<TrialReport>& trials, const std::vector<CellSummary>& cells,
           const std::vector<std::string>& labels, const fs::path& out, report::Format format) {
    for (const auto& p : report::emit(trials, cells, out, format)) {
        std::cout << "wrote " << p.string() << '\n';
    }
    print_summary(cells, labels);
    std::size_t failed = 0;
    for (const auto& t : trials) {
        if (!t.ok()) {
            ++failed;
            std::cerr << "trial seed " << t.seed << " (N=" << t.period << ", N_data=" << t.n_data
                      << ") failed: " << t.status << ": " << t.message << '\n';
        }
    }
    return failed == trials.size() ? kExitAllFailed : kExitOk;
}

int cmd_run(const Options& o) {
    const ExperimentConfig config = load_config(o);
    const auto format = report::parse_format(o.format);
    const auto trials = run_trials(config, config.trials, o.threads);
    const fs::path out = config.output_dir;
    const int code = finish(trials, aggregate(trials), {"run"}, out, format);
    for (std::size_t k = 0; k < trials.size(); ++k) {
        if (!trials[k].polytope) continue;
        const io::json meta{{"seed", trials[k].seed},
                            {"route", trials[k].route},
                            {"lambda", trials[k].lambda},
                            {"config", config_to_json(config)}};
        const fs::path p = out / (trials.size() == 1 ? std::string("polytope.json")
                                                     : "polytope_" + std::to_string(k) + ".json");
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!(f << io::polytope_to_json(*trials[k].polytope, meta).dump(2) << '\n')) {
            throw IoError("failed writing '" + p.string() + "'");
        }
        std::cout << "wrote " << p.string() << '\n';
    }
    return code;
}

int cmd_study(const Options& o) {
    const ExperimentConfig config = load_config(o);
    const auto format = report::parse_format(o.format);
    const auto result = run_study(parse_study(o.study), config, config.trials, o.threads);
    return finish(result.trials, result.cells, result.labels, config.output_dir, format);
}

int cmd_report(const Options& o) {
    const auto format = report::parse_format(o.format);
    const auto trials = report::load_trials_csv(o.input);
    if (trials.empty()) {
        throw IoError("'" + o.input + "' has no trial rows");
    }
    const auto cells = aggregate(trials);
    return finish(trials, cells, {}, o.out.value_or("."), format);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cyclic-reformulation polytope identification experiments"};
    app.require_subcommand(1);
    Options o;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "Master seed (overrides the config)");
        sub->add_option("--trials", o.trials, "Trial count (overrides the config)")->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out, "Output directory (overrides the config)");
        sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "text"}));
        sub->add_option("--threads", o.threads, "Worker threads (0 = one per core)");
        sub->add_flag("--timing", o.timing, "Record per-trial wall time (reports are then not reproducible)");
    };

    auto* run = app.add_subcommand("run", "Run the pipeline for the configured trials");
    run->add_option("--config", o.config_path, "Config file (JSON)");
    common(run);

    auto* study = app.add_subcommand("study", "Sweep a study grid");
    study->add_option("--config", o.config_path, "Config template (JSON)");
    study->add_option("--study", o.study, "Study grid")->required()->check(CLI::IsMember({"noise", "ndata", "period"}));
    common(study);

    auto* rep = app.add_subcommand("report", "Re-aggregate a saved trial table");
    rep->add_option("--input", o.input, "trials.csv written by run or study")->required()->check(CLI::ExistingFile);
    rep->add_option("--out", o.out, "Output directory");
    rep->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(o);
        if (*study) return cmd_study(o);
        return cmd_report(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
