#include "nmfkit/recovery.hpp"

#include "nmfkit/rng.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace nmfkit {

Eigen::Index default_extra_components(Eigen::Index target_rank) {
    return static_cast<Eigen::Index>(std::ceil(0.2 * static_cast<double>(target_rank)));
}

namespace {

// Nonnegative rank-1 direction from the leading singular triplet of the
// residual: sign-split u and v, keep the pair with the larger norm product,
// then scale the h part by the optimal (clamped) projection coefficient so
// the objective can only decrease.
void append_residual_component(const DataMatrix& X, Matrix& W, Matrix& H,
                               Eigen::Index slot) {
    const Matrix R = X.values() - W * H;
    Eigen::BDCSVD<Matrix> svd(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector u = svd.matrixU().col(0);
    const Vector v = svd.matrixV().col(0);

    const Vector up = u.cwiseMax(0.0), un = (-u).cwiseMax(0.0);
    const Vector vp = v.cwiseMax(0.0), vn = (-v).cwiseMax(0.0);
    const double np = up.norm() * vp.norm();
    const double nn = un.norm() * vn.norm();

    W.col(slot).setZero();
    H.row(slot).setZero();
    if (std::max(np, nn) <= 0.0) return;

    Vector a = (np >= nn) ? up : un;
    Vector b = (np >= nn) ? vp : vn;
    a /= a.norm();
    b /= b.norm();
    // refine into the best nonnegative rank-1 direction of the residual by
    // alternating projected power iterations (deterministic, monotone)
    for (int sweep = 0; sweep < 30; ++sweep) {
        Vector bt = (R.transpose() * a).cwiseMax(0.0);
        if (bt.norm() <= 0.0) break;
        b = bt / bt.norm();
        Vector at = (R * b).cwiseMax(0.0);
        if (at.norm() <= 0.0) break;
        a = at / at.norm();
    }
    const double coeff = a.dot(R * b);
    if (coeff <= 0.0) return;  // no descent along this direction
    W.col(slot) = a;
    H.row(slot) = coeff * b.transpose();
}

}  // namespace

Factorization recover_components(const DataMatrix& X, const Factorization& F,
                                 const RecoverySpec& spec) {
    require_compatible(X, F);
    if (spec.k < 0) throw DomainError("recover_components: k must be >= 0");
    if (spec.k == 0) return F;
    const Eigen::Index r = F.rank();
    if (r + spec.k > std::min(X.rows(), X.cols()))
        throw RankError("recover_components: r + k exceeds min(m, n)");

    Matrix W(X.rows(), r + spec.k);
    Matrix H(r + spec.k, X.cols());
    W.leftCols(r) = F.W;
    H.topRows(r) = F.H;
    W.rightCols(spec.k).setZero();
    H.bottomRows(spec.k).setZero();

    if (spec.strategy == RecoveryStrategy::ResidualSVD) {
        for (Eigen::Index i = 0; i < spec.k; ++i)
            append_residual_component(X, W, H, r + i);
    } else {
        std::mt19937_64 eng(spec.seed);
        for (Eigen::Index i = 0; i < spec.k; ++i) {
            Vector a(W.rows()), b(H.cols());
            for (Eigen::Index row = 0; row < a.size(); ++row) a(row) = uniform01(eng);
            for (Eigen::Index col = 0; col < b.size(); ++col) b(col) = uniform01(eng);
            a /= a.norm();
            b /= b.norm();
            // scale by the projection onto the residual so appending never
            // increases the objective
            const Matrix R = X.values() - W * H;
            const double coeff = a.dot(R * b);
            if (coeff <= 0.0) continue;
            W.col(r + i) = a;
            H.row(r + i) = coeff * b.transpose();
        }
    }
    return {std::move(W), std::move(H)};
}

}  // namespace nmfkit
