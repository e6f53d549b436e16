#include "nmfkit/init.hpp"

#include "nmfkit/rng.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace nmfkit {

Factorization random_init(Eigen::Index m, Eigen::Index n, Eigen::Index r,
                          std::uint64_t seed) {
    if (m < 1 || n < 1 || r < 1)
        throw DimensionError("random_init: m, n, r must be >= 1");
    std::mt19937_64 eng(seed);
    Matrix W(m, r), H(r, n);
    for (Eigen::Index j = 0; j < r; ++j)
        for (Eigen::Index i = 0; i < m; ++i) W(i, j) = uniform01(eng);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < r; ++i) H(i, j) = uniform01(eng);
    return {std::move(W), std::move(H)};
}

Factorization nndsvd_init(const DataMatrix& X, Eigen::Index r, InitKind variant,
                          std::uint64_t seed) {
    const Eigen::Index m = X.rows(), n = X.cols();
    if (r > std::min(m, n))
        throw RankError("nndsvd_init: r exceeds min(m, n)");

    Eigen::BDCSVD<Matrix> svd(X.values(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix& U = svd.matrixU();
    const Matrix& V = svd.matrixV();
    const Vector& S = svd.singularValues();

    Matrix W = Matrix::Zero(m, r);
    Matrix H = Matrix::Zero(r, n);

    // Leading pair is nonnegative up to a global sign (Perron).
    {
        Vector u = U.col(0);
        Vector v = V.col(0);
        if (u.sum() < 0.0) { u = -u; v = -v; }
        u = u.cwiseMax(0.0);
        v = v.cwiseMax(0.0);
        const double s = std::sqrt(S(0));
        W.col(0) = s * u;
        H.row(0) = s * v.transpose();
    }

    for (Eigen::Index j = 1; j < r; ++j) {
        const Vector u = U.col(j);
        const Vector v = V.col(j);
        const Vector up = u.cwiseMax(0.0), un = (-u).cwiseMax(0.0);
        const Vector vp = v.cwiseMax(0.0), vn = (-v).cwiseMax(0.0);
        const double np = up.norm() * vp.norm();
        const double nn = un.norm() * vn.norm();
        const Vector& su = (np >= nn) ? up : un;
        const Vector& sv = (np >= nn) ? vp : vn;
        const double mu = (np >= nn) ? np : nn;
        if (mu <= 0.0) continue;  // component stays zero, filled below if /a or /ar
        const double scale = std::sqrt(S(j) * mu);
        W.col(j) = scale * su / su.norm();
        H.row(j) = scale * sv.transpose() / sv.norm();
    }

    if (variant == InitKind::NNDSVDa || variant == InitKind::NNDSVDar) {
        const double mean = X.values().mean();
        std::mt19937_64 eng(seed);
        auto fill = [&](double) {
            return variant == InitKind::NNDSVDa ? mean : uniform01(eng) * mean / 100.0;
        };
        for (Eigen::Index j = 0; j < r; ++j)
            for (Eigen::Index i = 0; i < m; ++i)
                if (W(i, j) == 0.0) W(i, j) = fill(0.0);
        for (Eigen::Index jj = 0; jj < n; ++jj)
            for (Eigen::Index i = 0; i < r; ++i)
                if (H(i, jj) == 0.0) H(i, jj) = fill(0.0);
    }
    return {std::move(W), std::move(H)};
}

Factorization make_init(const DataMatrix& X, Eigen::Index r, const InitSpec& spec) {
    if (spec.kind == InitKind::Random)
        return random_init(X.rows(), X.cols(), r, spec.seed);
    return nndsvd_init(X, r, spec.kind, spec.seed);
}

}  // namespace nmfkit
