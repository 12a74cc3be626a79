#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emh/learner.hpp"
#include "emh/model.hpp"
#include "emh/routing_space.hpp"

namespace emh {

/// One JSON document: {"deployment": {...}, "experiment": {...}}.
struct ExperimentConfig {
    std::filesystem::path config_path;
    Deployment deployment;
    std::vector<Policy> policies{Policy::SingleHop, Policy::Emh};
    std::size_t iterations = 110;
    int cycles = 10;
    std::vector<std::uint64_t> seeds{1};
    std::filesystem::path output_dir = "out";
    std::size_t workers = 1;
    bool verbose = false;
    bool freeze_payoffs = false;
    double epsilon0 = 1.0;
    std::size_t enumeration_limit = kDefaultEnumerationLimit;
};

/// Throws Error/DeploymentError naming the offending field.
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Writes content to path through a temporary sibling and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Stream seed for one (master seed, policy) run, independent of run order.
std::uint64_t run_seed(std::uint64_t master_seed, Policy policy);

/// Trace CSV per (policy, seed), comparison CSV per seed with both policies,
/// a gnuplot helper, and one summary line per seed on out. Returns 0 on success.
int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Ranked exhaustive table of the constrained space under a deterministic
/// channel; also written to oracle.csv under output_dir when given.
/// Returns nonzero and prints the cardinality when the space exceeds limit.
int cmd_oracle(const ExperimentConfig& config, std::ostream& out, std::ostream& err,
               const std::optional<std::filesystem::path>& output_dir = std::nullopt);

/// Fast invariant suite; with a deployment, also checks its energy invariants.
/// Prints one PASS/FAIL line per check; nonzero on any failure.
int cmd_validate(std::ostream& out, const std::optional<Deployment>& deployment = std::nullopt);

}  // namespace emh
