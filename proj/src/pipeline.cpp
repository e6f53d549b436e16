#include "nmfkit/pipeline.hpp"

#include "nmfkit/recovery.hpp"

#include <chrono>
#include <iostream>

namespace nmfkit {

Eigen::Index PipelineConfig::effective_extra_k() const {
    return extra_k > 0 ? extra_k : default_extra_components(target_rank);
}

void PipelineConfig::validate() const {
    if (target_rank < 1) throw RankError("PipelineConfig: target_rank must be >= 1");
    if (eps_initial <= 0.0 || eps_overcomplete <= 0.0 || eps_final <= 0.0)
        throw DomainError("PipelineConfig: tolerances must be > 0");
    if (max_iterations < 1)
        throw DomainError("PipelineConfig: max_iterations must be >= 1");
    if (eps_initial < eps_final || eps_overcomplete < eps_final)
        std::cerr << "warning: initial/over-complete tolerance is more stringent "
                     "than the final tolerance\n";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

SolverConfig stage_config(const PipelineConfig& cfg, double epsilon) {
    SolverConfig sc;
    sc.algorithm = cfg.algorithm;
    sc.epsilon = epsilon;
    sc.max_iterations = cfg.max_iterations;
    sc.trace_stride = cfg.trace_stride;
    return sc;
}

// Stages 2-5, shared by all entry points. F0 is the initial-stage output.
PipelineResult run_tail(const DataMatrix& X, Factorization F0, const PipelineConfig& cfg,
                        PipelineResult result) {
    const Eigen::Index k = cfg.effective_extra_k();
    if (cfg.target_rank + k > std::min(X.rows(), X.cols()))
        throw RankError("pipeline: target_rank + extra_k exceeds min(m, n)");

    auto t = Clock::now();
    RecoverySpec rspec;
    rspec.k = k;
    Factorization augmented = recover_components(X, F0, rspec);
    result.stage_seconds[static_cast<int>(Stage::Recovery)] = seconds_since(t);

    t = Clock::now();
    SolveResult over = solve(X, std::move(augmented),
                             stage_config(cfg, cfg.eps_overcomplete), "overcomplete");
    result.stage_seconds[static_cast<int>(Stage::OvercompleteNmf)] = seconds_since(t);
    result.stage_traces.push_back(std::move(over.trace));
    result.stage_iterations[1] = over.iterations;

    t = Clock::now();
    GreedyMergeResult merged =
        greedy_merge(normalize_columns(over.factors), cfg.target_rank);
    result.stage_seconds[static_cast<int>(Stage::Merge)] = seconds_since(t);
    result.merge_log = std::move(merged.log);
    result.merge_candidate_evaluations = merged.candidate_evaluations;

    t = Clock::now();
    SolveResult final_nmf = solve(X, merged.factors.to_factorization(),
                                  stage_config(cfg, cfg.eps_final), "final");
    result.stage_seconds[static_cast<int>(Stage::FinalNmf)] = seconds_since(t);
    result.stage_traces.push_back(std::move(final_nmf.trace));
    result.stage_iterations[2] = final_nmf.iterations;

    result.final = std::move(final_nmf.factors);
    result.fitting_error_percent = fitting_error_percent(X, result.final);
    return result;
}

}  // namespace

PipelineResult run_pipeline_from(const DataMatrix& X, Factorization F0,
                                 const PipelineConfig& cfg) {
    cfg.validate();
    if (F0.rank() != cfg.target_rank)
        throw RankError("run_pipeline_from: starting rank differs from target_rank");
    PipelineResult result;
    auto t = Clock::now();
    SolveResult initial =
        solve(X, std::move(F0), stage_config(cfg, cfg.eps_initial), "initial");
    result.stage_seconds[static_cast<int>(Stage::InitialNmf)] = seconds_since(t);
    result.stage_traces.push_back(std::move(initial.trace));
    result.stage_iterations[0] = initial.iterations;
    return run_tail(X, std::move(initial.factors), cfg, std::move(result));
}

PipelineResult run_pipeline(const DataMatrix& X, const PipelineConfig& cfg) {
    cfg.validate();
    return run_pipeline_from(X, make_init(X, cfg.target_rank, cfg.init), cfg);
}

PipelineResult improve_existing(const DataMatrix& X, const Factorization& F_existing,
                                const PipelineConfig& cfg) {
    cfg.validate();
    if (F_existing.rank() != cfg.target_rank)
        throw RankError("improve_existing: existing rank differs from target_rank");

    PipelineResult candidate = run_tail(X, F_existing, cfg, PipelineResult{});

    const double existing_err = fitting_error_percent(X, F_existing);
    if (candidate.fitting_error_percent <= existing_err + 1e-6) return candidate;

    // Candidate polished worse; fall back to re-polishing the input at the
    // final tolerance and keep the better of the two.
    SolveResult repolished =
        solve(X, F_existing, stage_config(cfg, cfg.eps_final), "repolish");
    const double repolished_err = fitting_error_percent(X, repolished.factors);
    if (repolished_err < candidate.fitting_error_percent) {
        candidate.final = std::move(repolished.factors);
        candidate.fitting_error_percent = repolished_err;
    }
    return candidate;
}

}  // namespace nmfkit
