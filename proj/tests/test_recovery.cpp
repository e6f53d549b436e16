#include "nmfkit/recovery.hpp"

#include "nmfkit/fixtures.hpp"
#include "nmfkit/init.hpp"
#include "nmfkit/metrics.hpp"
#include "nmfkit/solvers.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <Eigen/SVD>

using namespace nmfkit;

TEST_CASE("default_extra_components") {
    CHECK(default_extra_components(1) == 1);
    CHECK(default_extra_components(4) == 1);
    CHECK(default_extra_components(5) == 1);
    CHECK(default_extra_components(6) == 2);
    CHECK(default_extra_components(10) == 2);
    CHECK(default_extra_components(17) == 4);
    CHECK(default_extra_components(20) == 4);
    CHECK(default_extra_components(21) == 5);
}

TEST_CASE("recover_components with ResidualSVD") {
    const PlantedProblem fx = plateau_fixture();

    SUBCASE("prefix is bitwise untouched and shape grows by k") {
        const Factorization F = random_init(8, 8, 3, 1);
        const Factorization G =
            recover_components(fx.X, F, {2, RecoveryStrategy::ResidualSVD, 0});
        CHECK(G.rank() == 5);
        CHECK(G.W.leftCols(3) == F.W);
        CHECK(G.H.topRows(3) == F.H);
        CHECK((G.W.array() >= 0.0).all());
        CHECK((G.H.array() >= 0.0).all());
    }
    SUBCASE("never increases the objective") {
        for (int seed = 0; seed < 20; ++seed) {
            const PlantedProblem p = random_problem(9, 11, 4, 100 + seed);
            const Factorization F = random_init(9, 11, 3, seed);
            const double before = objective(p.X, F);
            const Factorization G =
                recover_components(p.X, F, {2, RecoveryStrategy::ResidualSVD, 0});
            CHECK(objective(p.X, G) <= before * (1.0 + 1e-12));
        }
    }
    SUBCASE("rank-deficient fit recovers the missing direction") {
        // X rank 2, current factors capture only the leading singular pair
        const PlantedProblem p = random_problem(10, 12, 2, 5);
        Eigen::BDCSVD<Matrix> svd(p.X.values(),
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
        Vector u = svd.matrixU().col(0), v = svd.matrixV().col(0);
        if (u.sum() < 0.0) { u = -u; v = -v; }
        // Perron pair of a positive matrix is nonnegative
        const Factorization F(u, (svd.singularValues()(0) * v).transpose());
        const double before = objective(p.X, F);
        const Factorization G =
            recover_components(p.X, F, {1, RecoveryStrategy::ResidualSVD, 0});
        // the appended component must absorb a nontrivial share of the residual
        CHECK(objective(p.X, G) < 0.9 * before);
    }
    SUBCASE("planted rank-1 terms are recovered with matching spans") {
        // X = W*H + sum of planted nonnegative rank-1 terms of distinct
        // magnitudes; ResidualSVD with k = j should recover each term
        std::mt19937_64 eng(31);
        const Eigen::Index m = 12, n = 14;
        const PlantedProblem base = random_problem(m, n, 3, 77);
        const int j = 3;
        Matrix planted_u(m, j);
        Matrix planted_v(n, j);
        Matrix X = base.X.values();
        const double magnitudes[] = {40.0, 12.0, 4.0};
        planted_u.setZero();
        planted_v.setZero();
        for (int t = 0; t < j; ++t) {
            // disjoint supports so the planted terms are mutually orthogonal
            for (Eigen::Index i = t * 4; i < t * 4 + 4; ++i)
                planted_u(i, t) = nmfkit::uniform01(eng) + 0.2;
            for (Eigen::Index i = t * 4; i < t * 4 + 4; ++i)
                planted_v(i, t) = nmfkit::uniform01(eng) + 0.2;
            planted_u.col(t) /= planted_u.col(t).norm();
            planted_v.col(t) /= planted_v.col(t).norm();
            X += magnitudes[t] * planted_u.col(t) * planted_v.col(t).transpose();
        }
        const Factorization G = recover_components(
            DataMatrix(X), base.truth, {j, RecoveryStrategy::ResidualSVD, 0});
        // recovered directions must span the planted ones
        CHECK(subspace_consistency(G.W.rightCols(j), planted_u) < 1e-3);
    }
    SUBCASE("deterministic") {
        const Factorization F = random_init(8, 8, 3, 2);
        const Factorization a =
            recover_components(fx.X, F, {2, RecoveryStrategy::ResidualSVD, 0});
        const Factorization b =
            recover_components(fx.X, F, {2, RecoveryStrategy::ResidualSVD, 0});
        CHECK(a.W == b.W);
        CHECK(a.H == b.H);
    }
    SUBCASE("exact fit appends components that contribute nothing") {
        const Factorization G = recover_components(
            fx.X, fx.truth, {1, RecoveryStrategy::ResidualSVD, 0});
        CHECK(G.rank() == 5);
        CHECK(objective(fx.X, G) == doctest::Approx(0.0).epsilon(1e-16));
    }
    SUBCASE("k = 0 returns the input unchanged") {
        const Factorization F = random_init(8, 8, 3, 4);
        const Factorization G =
            recover_components(fx.X, F, {0, RecoveryStrategy::ResidualSVD, 0});
        CHECK(G.W == F.W);
        CHECK(G.H == F.H);
    }
}

TEST_CASE("recover_components with RandomNonnegative") {
    const PlantedProblem fx = plateau_fixture();
    const Factorization F = random_init(8, 8, 3, 7);

    SUBCASE("seeded determinism, seed variation") {
        const RecoverySpec spec{2, RecoveryStrategy::RandomNonnegative, 9};
        const Factorization a = recover_components(fx.X, F, spec);
        const Factorization b = recover_components(fx.X, F, spec);
        CHECK(a.W == b.W);
        const Factorization c = recover_components(
            fx.X, F, {2, RecoveryStrategy::RandomNonnegative, 10});
        CHECK(a.W != c.W);
    }
    SUBCASE("never increases the objective") {
        for (int seed = 0; seed < 20; ++seed) {
            const double before = objective(fx.X, F);
            const Factorization G = recover_components(
                fx.X, F,
                {2, RecoveryStrategy::RandomNonnegative,
                 static_cast<std::uint64_t>(seed)});
            CHECK(objective(fx.X, G) <= before * (1.0 + 1e-12));
            CHECK((G.W.array() >= 0.0).all());
            CHECK((G.H.array() >= 0.0).all());
        }
    }
}
