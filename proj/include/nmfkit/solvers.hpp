#pragma once

#include "nmfkit/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nmfkit {

enum class Algorithm { HALS, MU };

struct SolverConfig {
    Algorithm algorithm = Algorithm::HALS;
    double epsilon = 1e-4;           // relative-change tolerance, per component
    std::int64_t max_iterations = 1000000;
    std::int64_t trace_stride = 0;   // 0 = no trace

    void validate() const {
        if (epsilon <= 0.0) throw DomainError("SolverConfig: epsilon must be > 0");
        if (max_iterations < 1) throw DomainError("SolverConfig: max_iterations must be >= 1");
        if (trace_stride < 0) throw DomainError("SolverConfig: trace_stride must be >= 0");
    }
};

/// Objective samples recorded during a solve. Elapsed times are reconstructed
/// post hoc from a separate timing run (iteration * mean seconds per iteration);
/// they start out as zero.
struct RunTrace {
    struct Sample {
        std::int64_t iteration;
        double elapsed_seconds;
        double objective;
    };
    std::vector<Sample> samples;
    std::string stage_label;

    void reconstruct_times(double seconds_per_iteration) {
        for (auto& s : samples)
            s.elapsed_seconds = static_cast<double>(s.iteration) * seconds_per_iteration;
    }
};

struct SolveResult {
    Factorization factors;
    RunTrace trace;
    std::int64_t iterations = 0;
    bool converged = false;
};

/// (1/2) * ||X - W*H||_F^2
double objective(const DataMatrix& X, const Factorization& F);

/// 100 * ||X - W*H||_F^2 / ||X||_F^2
double fitting_error_percent(const DataMatrix& X, const Factorization& F);

/// One full HALS sweep: every column of W, then every row of H, via the
/// closed-form block update with clamping at zero. Columns whose Gram
/// diagonal vanishes are left untouched.
Factorization hals_sweep(const DataMatrix& X, Factorization F);

/// One multiplicative update of H then W under the Frobenius objective.
Factorization mu_sweep(const DataMatrix& X, Factorization F);

/// Per-component relative-change stopping criterion: true iff for every j,
/// ||w_j' - w_j||^2 <= eps * ||w_j' + w_j||^2 and the analogous row condition
/// on H. The 0/0 case counts as converged for that component.
bool converged(const Factorization& prev, const Factorization& next, double epsilon);

/// Iterate sweeps until the stopping criterion holds or max_iterations is hit.
SolveResult solve(const DataMatrix& X, Factorization F0, const SolverConfig& cfg,
                  const std::string& stage_label = "");

}  // namespace nmfkit
