// kramers-qm: batch runner for the phase-space experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "cli/config.hpp"
#include "cli/runner.hpp"

using namespace kqm::cli;

int main(int argc, char** argv) {
    std::string names;
    for (auto e : all_experiments()) names += (names.empty() ? "" : ", ") + experiment_name(e);

    CLI::App app{"Modified Kramers equation experiments.\nExperiments: " + names, "kramers-qm"};
    std::string experiment, config_path, out_dir, defaults_for;
    bool quiet = false;
    app.add_option("experiment", experiment, "experiment to run");
    app.add_option("--config", config_path, "scenario configuration file");
    app.add_option("--out", out_dir, "output directory (overrides [output] directory)");
    app.add_flag("--quiet", quiet, "no progress output");
    app.add_option("--print-defaults", defaults_for, "print a template configuration for an experiment");
    app.set_version_flag("--version", code_version());
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (!defaults_for.empty()) {
        const auto e = experiment_from_name(defaults_for);
        if (!e) {
            std::cerr << "unknown experiment '" << defaults_for << "' (known: " << names << ")\n";
            return kExitConfig;
        }
        std::cout << serialize(default_config(*e), true);
        return kExitOk;
    }
    if (experiment.empty()) {
        std::cerr << "missing experiment (known: " << names << ")\n" << app.help();
        return kExitConfig;
    }
    const auto exp = experiment_from_name(experiment);
    if (!exp) {
        std::cerr << "unknown experiment '" << experiment << "' (known: " << names << ")\n";
        return kExitConfig;
    }
    if (config_path.empty()) {
        std::cerr << "--config is required (see --print-defaults " << experiment << ")\n";
        return kExitConfig;
    }

    ScenarioConfig cfg;
    try {
        cfg = parse_config(config_path, *exp);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    const RunResult r = run(cfg, {out_dir, quiet});
    if (r.exit_code == kExitConfig) {
        std::cerr << "config error: " << r.message << "\n";
    } else if (r.exit_code != kExitOk) {
        std::cerr << "run failed: " << r.message << "\n";
    } else if (!quiet) {
        std::cout << experiment << ": wrote " << r.files.size() + 1 << " files to " << r.out_dir << "\n";
    }
    return r.exit_code;
}
