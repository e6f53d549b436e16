#pragma once

#include "nmfkit/types.hpp"

namespace nmfkit {

/// Moore-Penrose pseudoinverse via SVD; singular values below
/// sigma_max * max(dims) * machine epsilon are treated as zero.
Matrix pseudo_inverse(const Matrix& W);

/// D = ||W1 - W2*R2||^2 + ||W2 - W1*R1||^2 with R2 = W2+ W1 and R1 = W1+ W2.
/// Zero iff the two column spaces coincide.
double subspace_consistency(const Matrix& W1, const Matrix& W2);

/// Deviation of a square mixing matrix from a permutation matrix:
/// sum r_ij^2 (r_ij - 1)^2 minus the row/column sum deviations. Can be
/// negative for matrices far from any permutation; reported raw.
double permutation_consistency(const Matrix& R);

struct ConsistencyReport {
    double subspace_D = 0.0;
    double fit_error_delta = 0.0;  // percent, run 1 minus run 2
    double pc_R1 = 0.0;
    double pc_R2 = 0.0;
};

/// Pairwise comparison of two factorizations of the same X. W columns are
/// normalized to unit norm (product-preserving) before the metrics.
ConsistencyReport compare_runs(const DataMatrix& X, const Factorization& F1,
                               const Factorization& F2);

}  // namespace nmfkit
