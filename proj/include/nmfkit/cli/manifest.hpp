#pragma once

#include "nmfkit/pipeline.hpp"
#include "nmfkit/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace nmfkit::cli {

struct RunManifest {
    std::string fixture;      // built-in fixture name, or empty
    std::string input_path;   // matrix file, or empty
    Eigen::Index rank = 4;
    Eigen::Index extra_k = 0;  // 0 = default 20% rule
    double eps1 = 1e-2;
    double eps2 = 1e-2;
    double eps = 1e-4;
    std::string algorithm = "hals";
    std::string init = "random";
    std::vector<std::uint64_t> seeds = {0};
    std::int64_t max_iterations = 1000000;
    bool trace = false;
    std::string out_dir = ".";
    std::string format = "json";  // json | csv
    int parallel = 1;
    std::string sweep_kind;            // extra-k | tolerances | rank
    std::vector<double> sweep_values;  // grid for the sweep commands
};

nlohmann::ordered_json manifest_json(const RunManifest& m);

DataMatrix load_input(const RunManifest& m);

Algorithm parse_algorithm(const std::string& name);
InitSpec parse_init(const std::string& name, std::uint64_t seed);

PipelineConfig pipeline_config(const RunManifest& m, std::uint64_t seed);
SolverConfig solver_config(const RunManifest& m);

}  // namespace nmfkit::cli
