#pragma once

#include "nmfkit/init.hpp"
#include "nmfkit/merge.hpp"
#include "nmfkit/solvers.hpp"
#include "nmfkit/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace nmfkit {

struct PipelineConfig {
    Eigen::Index target_rank = 1;
    Eigen::Index extra_k = 0;        // 0 = default, ceil(0.2 * target_rank)
    double eps_initial = 1e-2;
    double eps_overcomplete = 1e-2;
    double eps_final = 1e-4;
    Algorithm algorithm = Algorithm::HALS;
    InitSpec init;
    std::int64_t max_iterations = 1000000;
    std::int64_t trace_stride = 0;

    Eigen::Index effective_extra_k() const;
    void validate() const;
};

enum class Stage : int { InitialNmf = 0, Recovery = 1, OvercompleteNmf = 2, Merge = 3, FinalNmf = 4 };

struct PipelineResult {
    Factorization final;
    std::vector<RunTrace> stage_traces;           // one per NMF stage
    std::array<double, 5> stage_seconds{};        // initial, recovery, over-complete, merge, final
    std::vector<MergeRecord> merge_log;
    std::int64_t merge_candidate_evaluations = 0;
    std::array<std::int64_t, 3> stage_iterations{};  // initial, over-complete, final
    double fitting_error_percent = 0.0;
};

/// The five-stage merge pipeline: initial NMF, feature recovery,
/// over-complete NMF, greedy merge, final NMF.
PipelineResult run_pipeline(const DataMatrix& X, const PipelineConfig& cfg);

/// Same pipeline but with the initial NMF stage seeded from a caller-supplied
/// starting point (still solved at eps_initial).
PipelineResult run_pipeline_from(const DataMatrix& X, Factorization F0,
                                 const PipelineConfig& cfg);

/// Improve an existing rank-target solution: skip the initial NMF and feed
/// F_existing to recovery. If the merged candidate polishes worse than the
/// input, the input is re-polished at eps_final and the better of the two is
/// returned.
PipelineResult improve_existing(const DataMatrix& X, const Factorization& F_existing,
                                const PipelineConfig& cfg);

}  // namespace nmfkit
