// Command-line runner for single-hop vs EMH experiments.
//
//   emh run --config <file> --out <dir> [--workers N]
//   emh oracle --config <file> [--limit N] [--out <dir>]
//   emh validate [--config <file>]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "emh/config.hpp"
#include "emh/experiment.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Epsilon-greedy multi-hop routing simulator for LPWANs"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::size_t workers = 0;
    std::size_t limit = 0;

    auto* run = app.add_subcommand("run", "run SH/EMH experiments and write trace and comparison CSVs");
    run->add_option("--config", config_path, "JSON config (deployment + experiment)")->required();
    run->add_option("--out", out_dir, "output directory (overrides experiment.output_dir)");
    run->add_option("--workers", workers, "concurrent runs")->check(CLI::PositiveNumber);

    auto* oracle = app.add_subcommand("oracle", "measure every constrained routing under a deterministic channel");
    oracle->add_option("--config", config_path, "JSON config")->required();
    oracle->add_option("--limit", limit, "enumeration limit")->check(CLI::PositiveNumber);
    oracle->add_option("--out", out_dir, "also write oracle.csv here");

    auto* validate = app.add_subcommand("validate", "run the built-in invariant checks");
    validate->add_option("--config", config_path, "also check this deployment");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            std::optional<emh::Deployment> deployment;
            if (!config_path.empty()) {
                deployment = emh::load_deployment(config_path, false);
            }
            return emh::cmd_validate(std::cout, deployment);
        }

        emh::ExperimentConfig config = emh::load_experiment_config(config_path);
        if (!out_dir.empty()) {
            config.output_dir = out_dir;
        }
        if (workers > 0) {
            config.workers = workers;
        }
        if (*run) {
            return emh::cmd_run(config, std::cout, std::cerr);
        }
        if (limit > 0) {
            config.enumeration_limit = limit;
        }
        return emh::cmd_oracle(config, std::cout, std::cerr,
                               out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
