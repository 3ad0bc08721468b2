// entropy-lab: experiment presets and declarative configs for the entropy
// estimators. Exit codes: 0 all assertions pass, 1 an assertion failed,
// 2 usage or config-schema error.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "entropy_lab/config.hpp"
#include "entropy_lab/io.hpp"
#include "entropy_lab/presets.hpp"

using namespace entropy_lab;

int main(int argc, char** argv) {
    CLI::App app{"entropy-lab: topological, metric and measure entropy experiments"};
    app.require_subcommand(1);

    std::string preset_name;
    std::string config_path;
    std::string out_dir = "entropy_lab_out";
    std::string format_name = "both";
    std::uint64_t seed = 42;
    unsigned threads = 0;

    CLI::App* run = app.add_subcommand("run", "run a preset or an explicit config");
    run->add_option("preset", preset_name, "preset name (see `entropy-lab list`)");
    run->add_option("--config", config_path, "path to an experiment config document");
    run->add_option("--out", out_dir, "output directory for CSV/JSON artifacts");
    run->add_option("--seed", seed, "seed for sampled batteries");
    run->add_option("--threads", threads,
                    "worker threads (0: ENTROPY_LAB_THREADS or 1); results do not depend on it");
    run->add_option("--format", format_name, "csv|json|both");

    CLI::App* list = app.add_subcommand("list", "list the available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (list->parsed()) {
        for (const std::string& name : preset_names()) std::puts(name.c_str());
        return 0;
    }

    PresetOptions options;
    options.seed = seed;
    options.threads = threads;

    try {
        OutputFormat format = parse_format(format_name);
        if (preset_name.empty() == config_path.empty()) {
            std::fprintf(stderr, "error: run needs exactly one of <preset> or --config\n");
            return 2;
        }

        PresetOutput output;
        auto started = std::chrono::steady_clock::now();
        if (!preset_name.empty()) {
            bool known = false;
            for (const std::string& name : preset_names()) known = known || name == preset_name;
            if (!known) {
                std::fprintf(stderr, "error: unknown preset '%s'\n", preset_name.c_str());
                return 2;
            }
            output = run_preset(preset_name, options);
        } else {
            std::ifstream in(config_path);
            if (!in) {
                std::fprintf(stderr, "error: cannot open config '%s'\n", config_path.c_str());
                return 2;
            }
            json doc;
            try {
                in >> doc;
            } catch (const json::parse_error& e) {
                std::fprintf(stderr, "error: config is not valid JSON: %s\n", e.what());
                return 2;
            }
            output = run_config(doc, options);
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        std::vector<std::string> written = write_outputs(output, out_dir, format);
        std::cout << output.summary().dump(2) << "\n";
        for (const std::string& path : written) std::fprintf(stderr, "wrote %s\n", path.c_str());
        std::fprintf(stderr, "finished %s in %.2fs\n", output.preset.c_str(), secs);

        for (const Assertion& a : output.assertions)
            if (!a.pass)
                std::fprintf(stderr, "FAILED assertion: %s (%s)\n", a.name.c_str(),
                             a.detail.c_str());
        return output.all_pass() ? 0 : 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error at %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
