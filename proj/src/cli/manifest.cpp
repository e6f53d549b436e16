#include "nmfkit/cli/manifest.hpp"

#include "nmfkit/fixtures.hpp"
#include "nmfkit/io.hpp"

namespace nmfkit::cli {

nlohmann::ordered_json manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["fixture"] = m.fixture;
    j["input"] = m.input_path;
    j["rank"] = m.rank;
    j["extra_k"] = m.extra_k;
    j["eps1"] = m.eps1;
    j["eps2"] = m.eps2;
    j["eps"] = m.eps;
    j["algorithm"] = m.algorithm;
    j["init"] = m.init;
    j["seeds"] = m.seeds;
    j["max_iterations"] = m.max_iterations;
    j["trace"] = m.trace;
    j["format"] = m.format;
    if (!m.sweep_kind.empty()) {
        j["sweep"] = m.sweep_kind;
        j["sweep_values"] = m.sweep_values;
    }
    return j;
}

DataMatrix load_input(const RunManifest& m) {
    if (!m.input_path.empty()) return read_matrix(m.input_path);
    if (m.fixture == "plateau") return plateau_fixture().X;
    throw DomainError("unknown fixture '" + m.fixture + "' (expected: plateau)");
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "hals") return Algorithm::HALS;
    if (name == "mu") return Algorithm::MU;
    throw DomainError("unknown algorithm '" + name + "'");
}

InitSpec parse_init(const std::string& name, std::uint64_t seed) {
    InitSpec spec;
    spec.seed = seed;
    if (name == "random") spec.kind = InitKind::Random;
    else if (name == "nndsvd") spec.kind = InitKind::NNDSVD;
    else if (name == "nndsvda") spec.kind = InitKind::NNDSVDa;
    else if (name == "nndsvdar") spec.kind = InitKind::NNDSVDar;
    else throw DomainError("unknown init '" + name + "'");
    return spec;
}

PipelineConfig pipeline_config(const RunManifest& m, std::uint64_t seed) {
    PipelineConfig cfg;
    cfg.target_rank = m.rank;
    cfg.extra_k = m.extra_k;
    cfg.eps_initial = m.eps1;
    cfg.eps_overcomplete = m.eps2;
    cfg.eps_final = m.eps;
    cfg.algorithm = parse_algorithm(m.algorithm);
    cfg.init = parse_init(m.init, seed);
    cfg.max_iterations = m.max_iterations;
    cfg.trace_stride = m.trace ? 1 : 0;
    return cfg;
}

SolverConfig solver_config(const RunManifest& m) {
    SolverConfig cfg;
    cfg.algorithm = parse_algorithm(m.algorithm);
    cfg.epsilon = m.eps;
    cfg.max_iterations = m.max_iterations;
    cfg.trace_stride = m.trace ? 1 : 0;
    return cfg;
}

}  // namespace nmfkit::cli
