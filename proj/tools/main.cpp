#include "nmfkit/cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nmfkit::cli::RunManifest;

void add_common_options(CLI::App* cmd, RunManifest& m, std::int64_t& seed_count,
                        std::vector<std::uint64_t>& seed_list) {
    cmd->add_option("--input", m.input_path, "matrix file (CSV or Matrix Market)");
    cmd->add_option("--fixture", m.fixture, "built-in fixture name (plateau)");
    cmd->add_option("--rank", m.rank, "target factorization rank");
    cmd->add_option("--extra-k", m.extra_k,
                    "extra components for recovery (0 = 20% of rank)");
    cmd->add_option("--eps1", m.eps1, "initial NMF tolerance");
    cmd->add_option("--eps2", m.eps2, "over-complete NMF tolerance");
    cmd->add_option("--eps", m.eps, "final NMF tolerance");
    cmd->add_option("--algorithm", m.algorithm, "hals | mu")
        ->check(CLI::IsMember({"hals", "mu"}));
    cmd->add_option("--init", m.init, "random | nndsvd | nndsvda | nndsvdar")
        ->check(CLI::IsMember({"random", "nndsvd", "nndsvda", "nndsvdar"}));
    cmd->add_option("--seeds", seed_count, "use seeds 0..N-1");
    cmd->add_option("--seed-list", seed_list, "explicit seed list");
    cmd->add_option("--max-iters", m.max_iterations, "iteration cap per NMF stage");
    cmd->add_flag("--trace", m.trace, "export per-iteration objective traces");
    cmd->add_option("--out", m.out_dir, "output directory");
    cmd->add_option("--format", m.format, "report format: json | csv")
        ->check(CLI::IsMember({"json", "csv", "mtx"}));
    cmd->add_option("--parallel", m.parallel, "run up to N seeds concurrently");
}

void resolve_seeds(RunManifest& m, std::int64_t seed_count,
                   const std::vector<std::uint64_t>& seed_list) {
    if (!seed_list.empty()) {
        m.seeds = seed_list;
    } else if (seed_count > 0) {
        m.seeds.clear();
        for (std::int64_t s = 0; s < seed_count; ++s)
            m.seeds.push_back(static_cast<std::uint64_t>(s));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonnegative matrix factorization with pairwise component merging"};
    app.require_subcommand(1);

    RunManifest m;
    std::int64_t seed_count = 0;
    std::vector<std::uint64_t> seed_list;

    auto* factorize = app.add_subcommand("factorize", "standard NMF per seed");
    auto* pipeline = app.add_subcommand("pipeline", "the five-stage merge pipeline per seed");
    auto* compare = app.add_subcommand(
        "compare", "paired standard-vs-pipeline runs from identical initializations");
    auto* consistency = app.add_subcommand(
        "consistency", "all-pairs subspace and permutation consistency for both methods");
    auto* sweep = app.add_subcommand("sweep", "grid execution over one parameter");
    auto* export_fixture =
        app.add_subcommand("export-fixture", "write a built-in fixture to files");

    for (CLI::App* cmd : {factorize, pipeline, compare, consistency, sweep, export_fixture})
        add_common_options(cmd, m, seed_count, seed_list);
    sweep->add_option("--sweep", m.sweep_kind, "extra-k | tolerances | rank")
        ->required()
        ->check(CLI::IsMember({"extra-k", "tolerances", "rank"}));
    sweep->add_option("--values", m.sweep_values, "grid values")->required();

    CLI11_PARSE(app, argc, argv);
    resolve_seeds(m, seed_count, seed_list);

    try {
        if (factorize->parsed()) return nmfkit::cli::cmd_factorize(m);
        if (pipeline->parsed()) return nmfkit::cli::cmd_pipeline(m);
        if (compare->parsed()) return nmfkit::cli::cmd_compare(m);
        if (consistency->parsed()) return nmfkit::cli::cmd_consistency(m);
        if (sweep->parsed()) return nmfkit::cli::cmd_sweep(m);
        if (export_fixture->parsed()) return nmfkit::cli::cmd_export_fixture(m);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
