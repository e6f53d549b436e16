#include "nmfkit/metrics.hpp"

#include "nmfkit/merge.hpp"
#include "nmfkit/solvers.hpp"

#include <Eigen/SVD>

#include <limits>

namespace nmfkit {

Matrix pseudo_inverse(const Matrix& W) {
    Eigen::JacobiSVD<Matrix> svd(W, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& S = svd.singularValues();
    const double cutoff = S.size() > 0
                              ? S(0) * static_cast<double>(std::max(W.rows(), W.cols())) *
                                    std::numeric_limits<double>::epsilon()
                              : 0.0;
    Vector inv = Vector::Zero(S.size());
    for (Eigen::Index i = 0; i < S.size(); ++i)
        if (S(i) > cutoff) inv(i) = 1.0 / S(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double subspace_consistency(const Matrix& W1, const Matrix& W2) {
    if (W1.rows() != W2.rows())
        throw DimensionError("subspace_consistency: row-count mismatch");
    const Matrix R1 = pseudo_inverse(W1) * W2;
    const Matrix R2 = pseudo_inverse(W2) * W1;
    return (W1 - W2 * R2).squaredNorm() + (W2 - W1 * R1).squaredNorm();
}

double permutation_consistency(const Matrix& R) {
    if (R.rows() != R.cols())
        throw DimensionError("permutation_consistency: non-square matrix");
    double first = 0.0;
    for (Eigen::Index i = 0; i < R.rows(); ++i)
        for (Eigen::Index j = 0; j < R.cols(); ++j) {
            const double r = R(i, j);
            first += r * r * (r - 1.0) * (r - 1.0);
        }
    double row_dev = 0.0, col_dev = 0.0;
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        const double s = R.row(i).sum() - 1.0;
        row_dev += s * s;
    }
    for (Eigen::Index j = 0; j < R.cols(); ++j) {
        const double s = R.col(j).sum() - 1.0;
        col_dev += s * s;
    }
    return first - (row_dev + col_dev);
}

ConsistencyReport compare_runs(const DataMatrix& X, const Factorization& F1,
                               const Factorization& F2) {
    if (F1.rank() != F2.rank())
        throw RankError("compare_runs: factorizations have different ranks");
    const NormalizedFactorization N1 = normalize_columns(F1);
    const NormalizedFactorization N2 = normalize_columns(F2);

    ConsistencyReport report;
    report.subspace_D = subspace_consistency(N1.W_unit, N2.W_unit);
    report.fit_error_delta =
        fitting_error_percent(X, F1) - fitting_error_percent(X, F2);
    const Matrix R1 = pseudo_inverse(N1.W_unit) * N2.W_unit;
    const Matrix R2 = pseudo_inverse(N2.W_unit) * N1.W_unit;
    report.pc_R1 = permutation_consistency(R1);
    report.pc_R2 = permutation_consistency(R2);
    return report;
}

}  // namespace nmfkit
