#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace degroot {

struct ExperimentConfig {
    std::string name;
    std::string graph;  // GraphSpec string; empty -> experiment default
    std::string init;   // InitialOpinionSpec string; empty -> experiment default
    double eps = 0.0;   // 0 -> experiment default
    int replicas = 0;   // 0 -> experiment default
    double t_max = 0.0; // 0 -> derived default
    std::uint64_t seed = 1;
    long n = 0;         // scalar size override for scans
    int threads = 0;
    std::string out_dir;
    std::string format = "csv";
    bool strict = false;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ExperimentReport {
    nlohmann::json summary;
    bool has_verdict = false;
    bool pass = false;
    double wall_clock_s = 0.0;
};

const std::vector<std::string>& experiment_names();

// Runs one curated experiment; writes summary.json (and csv tables when the
// experiment produces them) under config.out_dir when set.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace degroot
