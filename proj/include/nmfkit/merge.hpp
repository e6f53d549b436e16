#pragma once

#include "nmfkit/types.hpp"

#include <cstdint>
#include <vector>

namespace nmfkit {

/// Factorization whose nonzero W columns have unit Euclidean norm, with the
/// removed scales absorbed into the H rows. Product-preserving.
struct NormalizedFactorization {
    Matrix W_unit;
    Matrix H_scaled;

    Eigen::Index rank() const { return W_unit.cols(); }
    Factorization to_factorization() const { return {W_unit, H_scaled}; }
};

NormalizedFactorization normalize_columns(const Factorization& F);

/// Sufficient statistics for merging one component pair:
/// c = w_p . w_q, g = cosine of the H rows, h_p = |h_p|, h_q = |h_q|.
struct PairStatistics {
    double c = 0.0;
    double g = 0.0;
    double h_p = 0.0;
    double h_q = 0.0;
};

PairStatistics pair_statistics(const Vector& w_p, const Vector& h_p,
                               const Vector& w_q, const Vector& h_q);

/// Smaller eigenvalue of the 2x2 generalized eigenproblem: the exact increase
/// in squared-Frobenius error from replacing the pair with one optimal
/// component. lambda_min = tau/2 - sqrt(tau^2/4 - delta) with
/// tau = h_p^2 + 2 c g h_p h_q + h_q^2, delta = (1-c^2)(1-g^2) h_p^2 h_q^2.
double merge_penalty(const PairStatistics& s);

struct MergeSolution {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    Vector w_merged;
    Vector h_merged;
};

/// Closed-form optimal merge of two components. w_p, w_q must be unit-norm
/// (or zero) and all vectors nonnegative.
MergeSolution merge_pair(const Vector& w_p, const Vector& h_p,
                         const Vector& w_q, const Vector& h_q);

struct MergeRecord {
    Eigen::Index id_a;
    Eigen::Index id_b;
    double penalty;
    Eigen::Index resulting_rank;
};

struct GreedyMergeResult {
    NormalizedFactorization factors;
    std::vector<MergeRecord> log;
    std::int64_t candidate_evaluations = 0;
};

/// Greedy reduction from the current rank to target_rank: repeatedly merge
/// the minimum-penalty surviving pair, tracked through a priority queue with
/// version stamps for stale-entry invalidation.
GreedyMergeResult greedy_merge(const NormalizedFactorization& F, Eigen::Index target_rank);

/// Exact number of candidate evaluations greedy_merge performs when reducing
/// from rank r to rank target: C(r,2) plus (s-1) re-evaluations at each
/// intermediate rank s.
std::int64_t candidate_evaluation_count(Eigen::Index r, Eigen::Index target);

/// Closed-form quadratic estimate of the candidate count, r(3r-11)/2 -
/// (target-4)(target+1). Reported alongside the instrumented count; the two
/// disagree on some inputs.
std::int64_t candidate_evaluation_estimate(Eigen::Index r, Eigen::Index target);

}  // namespace nmfkit
