#include "nmfkit/merge.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace nmfkit {

NormalizedFactorization normalize_columns(const Factorization& F) {
    NormalizedFactorization out;
    out.W_unit = F.W;
    out.H_scaled = F.H;
    for (Eigen::Index j = 0; j < F.rank(); ++j) {
        const double norm = out.W_unit.col(j).norm();
        if (norm > 0.0) {
            out.W_unit.col(j) /= norm;
            out.H_scaled.row(j) *= norm;
        }
        // zero column: left as zero, H row untouched
    }
    return out;
}

PairStatistics pair_statistics(const Vector& w_p, const Vector& h_p,
                               const Vector& w_q, const Vector& h_q) {
    PairStatistics s;
    s.h_p = h_p.norm();
    s.h_q = h_q.norm();
    // clamp: dot products of nonnegative unit vectors can exceed 1 by ~1e-16
    s.c = std::clamp(w_p.dot(w_q), 0.0, 1.0);
    const double hh = s.h_p * s.h_q;
    s.g = (hh > 0.0) ? std::clamp(h_p.dot(h_q) / hh, 0.0, 1.0) : 0.0;
    return s;
}

namespace {

struct Eigenvalues {
    double lambda_min;
    double lambda_max;
};

Eigenvalues eigenvalues(const PairStatistics& s) {
    const double tau = s.h_p * s.h_p + 2.0 * s.c * s.g * s.h_p * s.h_q + s.h_q * s.h_q;
    const double delta = (1.0 - s.c * s.c) * (1.0 - s.g * s.g) * s.h_p * s.h_p * s.h_q * s.h_q;
    const double rad = std::max(tau * tau / 4.0 - delta, 0.0);
    const double root = std::sqrt(rad);
    return {std::max(tau / 2.0 - root, 0.0), tau / 2.0 + root};
}

}  // namespace

double merge_penalty(const PairStatistics& s) {
    return eigenvalues(s).lambda_min;
}

namespace {

// A component whose rank-1 term is zero merges for free.
bool dead(const Vector& w, const Vector& h) {
    return w.isZero(0.0) || h.isZero(0.0);
}

double pair_penalty(const Vector& w_p, const Vector& h_p,
                    const Vector& w_q, const Vector& h_q) {
    if (dead(w_p, h_p) || dead(w_q, h_q)) return 0.0;
    return merge_penalty(pair_statistics(w_p, h_p, w_q, h_q));
}

}  // namespace

MergeSolution merge_pair(const Vector& w_p, const Vector& h_p,
                         const Vector& w_q, const Vector& h_q) {
    if (dead(w_q, h_q)) {
        MergeSolution sol;
        sol.alpha = 1.0;
        sol.w_merged = w_p;
        sol.h_merged = h_p;
        return sol;
    }
    if (dead(w_p, h_p)) {
        MergeSolution sol;
        sol.beta = 1.0;
        sol.w_merged = w_q;
        sol.h_merged = h_q;
        return sol;
    }
    const PairStatistics s = pair_statistics(w_p, h_p, w_q, h_q);
    const auto [lmin, lmax] = eigenvalues(s);

    MergeSolution sol;
    sol.lambda_min = lmin;
    sol.lambda_max = lmax;

    const double denom = s.g * s.h_p * s.h_q + s.c * s.h_q * s.h_q;
    double alpha, beta;
    if (denom <= 0.0) {
        // continuous limit: keep the stronger component
        if (s.h_p >= s.h_q) { alpha = 1.0; beta = 0.0; }
        else { alpha = 0.0; beta = 1.0; }
    } else {
        const double xi =
            std::max((lmax - s.h_q * s.h_q - s.c * s.g * s.h_p * s.h_q) / denom, 0.0);
        const double scale = std::sqrt(1.0 + 2.0 * s.c * xi + xi * xi);
        alpha = xi / scale;
        beta = 1.0 / scale;
    }
    sol.alpha = alpha;
    sol.beta = beta;
    sol.w_merged = alpha * w_p + beta * w_q;
    sol.h_merged = (alpha + beta * s.c) * h_p + (alpha * s.c + beta) * h_q;
    return sol;
}

std::int64_t candidate_evaluation_count(Eigen::Index r, Eigen::Index target) {
    std::int64_t count = static_cast<std::int64_t>(r) * (r - 1) / 2;
    for (Eigen::Index s = target + 1; s <= r - 1; ++s) count += s - 1;
    return count;
}

std::int64_t candidate_evaluation_estimate(Eigen::Index r, Eigen::Index target) {
    return static_cast<std::int64_t>(r) * (3 * r - 11) / 2 -
           static_cast<std::int64_t>(target - 4) * (target + 1);
}

namespace {

struct CandidateEntry {
    double penalty;
    Eigen::Index id_a, id_b;           // id_a < id_b
    std::uint32_t stamp_a, stamp_b;    // versions at insertion time
};

struct EntryOrder {
    // min-heap on (penalty, id_a, id_b)
    bool operator()(const CandidateEntry& x, const CandidateEntry& y) const {
        return std::tie(x.penalty, x.id_a, x.id_b) > std::tie(y.penalty, y.id_a, y.id_b);
    }
};

}  // namespace

GreedyMergeResult greedy_merge(const NormalizedFactorization& F, Eigen::Index target_rank) {
    const Eigen::Index r = F.rank();
    if (target_rank < 1 || target_rank > r)
        throw RankError("greedy_merge: target rank out of range");

    GreedyMergeResult result;
    Matrix W = F.W_unit;
    Matrix H = F.H_scaled;
    std::vector<bool> alive(r, true);
    std::vector<std::uint32_t> version(r, 0);

    auto penalty_of = [&](Eigen::Index a, Eigen::Index b) {
        ++result.candidate_evaluations;
        return pair_penalty(W.col(a), H.row(a).transpose(),
                            W.col(b), H.row(b).transpose());
    };

    std::priority_queue<CandidateEntry, std::vector<CandidateEntry>, EntryOrder> queue;
    for (Eigen::Index a = 0; a < r; ++a)
        for (Eigen::Index b = a + 1; b < r; ++b)
            queue.push({penalty_of(a, b), a, b, 0, 0});

    Eigen::Index rank = r;
    while (rank > target_rank) {
        CandidateEntry e = queue.top();
        queue.pop();
        if (!alive[e.id_a] || !alive[e.id_b] ||
            version[e.id_a] != e.stamp_a || version[e.id_b] != e.stamp_b)
            continue;  // stale: a participant was merged since insertion

        const MergeSolution sol = merge_pair(W.col(e.id_a), H.row(e.id_a).transpose(),
                                             W.col(e.id_b), H.row(e.id_b).transpose());
        W.col(e.id_a) = sol.w_merged;
        H.row(e.id_a) = sol.h_merged.transpose();
        alive[e.id_b] = false;
        ++version[e.id_a];
        --rank;
        result.log.push_back({e.id_a, e.id_b, e.penalty, rank});

        if (rank > target_rank) {
            for (Eigen::Index other = 0; other < r; ++other) {
                if (!alive[other] || other == e.id_a) continue;
                const Eigen::Index a = std::min(other, e.id_a);
                const Eigen::Index b = std::max(other, e.id_a);
                queue.push({penalty_of(a, b), a, b, version[a], version[b]});
            }
        }
    }

    result.factors.W_unit.resize(W.rows(), target_rank);
    result.factors.H_scaled.resize(target_rank, H.cols());
    Eigen::Index out = 0;
    for (Eigen::Index j = 0; j < r; ++j) {
        if (!alive[j]) continue;
        result.factors.W_unit.col(out) = W.col(j);
        result.factors.H_scaled.row(out) = H.row(j);
        ++out;
    }
    return result;
}

}  // namespace nmfkit
