#include "nmfkit/solvers.hpp"

#include "nmfkit/fixtures.hpp"
#include "nmfkit/init.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <Eigen/SVD>

using namespace nmfkit;

TEST_CASE("objective") {
    const PlantedProblem fx = plateau_fixture();

    SUBCASE("exact factorization gives zero") {
        CHECK(objective(fx.X, fx.truth) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("rank-1 ones") {
        DataMatrix X(Matrix::Ones(2, 2));
        Factorization F(Matrix::Ones(2, 1), Matrix::Ones(1, 2));
        CHECK(objective(X, F) == 0.0);
    }
    SUBCASE("matches brute-force double loop on random init") {
        const Factorization F = random_init(8, 8, 4, 0);
        const double expected =
            oracles::brute_force_objective(fx.X.values(), F.W, F.H);
        CHECK(objective(fx.X, F) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("shape mismatch throws") {
        Factorization F(Matrix::Ones(3, 1), Matrix::Ones(1, 2));
        CHECK_THROWS_AS(objective(fx.X, F), DimensionError);
    }
}

TEST_CASE("fitting_error_percent") {
    const PlantedProblem fx = plateau_fixture();

    SUBCASE("exact factorization gives zero") {
        CHECK(fitting_error_percent(fx.X, fx.truth) == doctest::Approx(0.0));
    }
    SUBCASE("zero predictor gives 100") {
        Factorization zero(Matrix::Zero(8, 4), Matrix::Zero(4, 8));
        CHECK(fitting_error_percent(fx.X, zero) == doctest::Approx(100.0));
    }
    SUBCASE("truncated 100-iteration factors checked against direct summation") {
        SolverConfig cfg;
        cfg.epsilon = 1e-30;
        cfg.max_iterations = 100;
        const Factorization F =
            solve(fx.X, random_init(8, 8, 4, 0), cfg).factors;
        const double got = fitting_error_percent(fx.X, F);
        const double expected = 100.0 *
                                2.0 * oracles::brute_force_objective(fx.X.values(), F.W, F.H) /
                                fx.X.values().squaredNorm();
        CHECK(got > 0.0);
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("hals_sweep") {
    const PlantedProblem fx = plateau_fixture();

    SUBCASE("exact factorization is a fixed point") {
        const double before = objective(fx.X, fx.truth);
        const Factorization after = hals_sweep(fx.X, fx.truth);
        CHECK(objective(fx.X, after) == doctest::Approx(before).epsilon(1e-10));
    }
    SUBCASE("rank-1 problem strictly decreases on first sweep") {
        std::mt19937_64 eng(3);
        Vector u = oracles::random_nonnegative(6, eng).array() + 0.1;
        Vector v = oracles::random_nonnegative(5, eng).array() + 0.1;
        DataMatrix X(u * v.transpose());
        Factorization F = random_init(6, 5, 1, 7);
        const double before = objective(X, F);
        const double after = objective(X, hals_sweep(X, F));
        CHECK(after < before);
    }
    SUBCASE("matches the straight-line reimplementation") {
        Factorization F = random_init(8, 8, 4, 0);
        Matrix W = F.W, H = F.H;
        oracles::naive_hals_sweep(fx.X.values(), W, H);
        const Factorization got = hals_sweep(fx.X, F);
        CHECK((got.W - W).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((got.H - H).cwiseAbs().maxCoeff() < 1e-9);
        const double expected = oracles::brute_force_objective(fx.X.values(), W, H);
        CHECK(objective(fx.X, got) == doctest::Approx(expected).epsilon(1e-9));
    }
    SUBCASE("zero H row leaves the W column untouched") {
        Factorization F = random_init(8, 8, 4, 1);
        F.H.row(2).setZero();
        const Matrix w_before = F.W.col(2);
        const Factorization after = hals_sweep(fx.X, F);
        CHECK((after.W.col(2) - w_before).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("mu_sweep") {
    SUBCASE("all-positive exact fixed point unchanged within 1e-12") {
        std::mt19937_64 eng(11);
        Matrix W = Matrix::NullaryExpr(5, 2, [&](Eigen::Index, Eigen::Index) {
            return nmfkit::uniform01(eng) + 0.5;
        });
        Matrix H = Matrix::NullaryExpr(2, 6, [&](Eigen::Index, Eigen::Index) {
            return nmfkit::uniform01(eng) + 0.5;
        });
        DataMatrix X(W * H);
        const Factorization after = mu_sweep(X, {W, H});
        CHECK((after.W - W).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((after.H - H).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("hand-computed one-step value on constant 2x2 rank 1") {
        // X = ones, W = (0.5, 0.5)^T, H = (0.5, 0.5):
        // H step: H' = 0.5 * 1 / 0.25 = 2; W step: W' = 0.5 * 4 / 4 = 0.5
        DataMatrix X(Matrix::Ones(2, 2));
        Factorization F(Matrix::Constant(2, 1, 0.5), Matrix::Constant(1, 2, 0.5));
        const Factorization after = mu_sweep(X, F);
        CHECK(after.H(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(after.H(0, 1) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(after.W(0, 0) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(after.W(1, 0) == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("zero entry in W stays zero") {
        const PlantedProblem fx = plateau_fixture();
        Factorization F = random_init(8, 8, 4, 5);
        F.W(3, 1) = 0.0;
        const Factorization after = mu_sweep(fx.X, F);
        CHECK(after.W(3, 1) == 0.0);
    }
}

TEST_CASE("converged") {
    Factorization F = random_init(6, 7, 3, 2);

    SUBCASE("identical factors converge for any eps") {
        CHECK(converged(F, F, 1e-12));
    }
    SUBCASE("boundary exceeded by factor two") {
        const double eps = 1e-3;
        Factorization G = F;
        // scale one W column so ||d||^2 / ||s||^2 == 2*eps exactly
        const double ratio = 2.0 * eps;
        const double t = (1.0 + std::sqrt(ratio)) / (1.0 - std::sqrt(ratio));
        G.W.col(1) *= t;
        const double d = (G.W.col(1) - F.W.col(1)).squaredNorm();
        const double s = (G.W.col(1) + F.W.col(1)).squaredNorm();
        CHECK(d / s == doctest::Approx(ratio).epsilon(1e-9));
        CHECK_FALSE(converged(F, G, eps));
    }
    SUBCASE("straddle in exactly one H row") {
        Factorization A(Matrix::Ones(4, 2), Matrix::Ones(2, 5));
        Factorization B = A;
        B.H.row(1) *= 1.5;  // ||d||^2/||s||^2 = 0.04
        // direct evaluation of both inequalities
        const double ratio = (B.H.row(1) - A.H.row(1)).squaredNorm() /
                             (B.H.row(1) + A.H.row(1)).squaredNorm();
        CHECK(ratio == doctest::Approx(0.04));
        CHECK(converged(A, B, 0.05));
        CHECK_FALSE(converged(A, B, 0.03));
    }
    SUBCASE("symmetry") {
        std::mt19937_64 eng(17);
        for (int trial = 0; trial < 50; ++trial) {
            Factorization A = random_init(5, 6, 3, 100 + trial);
            Factorization B = random_init(5, 6, 3, 200 + trial);
            const double eps = nmfkit::uniform01(eng);
            CHECK(converged(A, B, eps) == converged(B, A, eps));
        }
    }
    SUBCASE("both-zero component counts as converged") {
        Factorization A(Matrix::Zero(3, 1), Matrix::Zero(1, 3));
        CHECK(converged(A, A, 1e-9));
    }
}

TEST_CASE("solve") {
    const PlantedProblem fx = plateau_fixture();

    SUBCASE("huge eps returns after one sweep") {
        SolverConfig cfg;
        cfg.epsilon = 1e6;
        const SolveResult res = solve(fx.X, random_init(8, 8, 4, 0), cfg);
        CHECK(res.iterations == 1);
        CHECK(res.converged);
    }
    SUBCASE("rank-1 positive X converges to near-exact fit") {
        std::mt19937_64 eng(23);
        Vector u = oracles::random_nonnegative(10, eng).array() + 0.1;
        Vector v = oracles::random_nonnegative(9, eng).array() + 0.1;
        DataMatrix X(u * v.transpose());
        SolverConfig cfg;
        cfg.epsilon = 1e-10;
        const SolveResult res = solve(X, random_init(10, 9, 1, 1), cfg);
        CHECK(fitting_error_percent(X, res.factors) < 1e-8);
        // oracle: the best rank-1 fit is the leading singular pair, exact here
        const Vector sv = Eigen::BDCSVD<Matrix>(X.values()).singularValues();
        CHECK(sv(0) * sv(0) == doctest::Approx(X.values().squaredNorm()).epsilon(1e-10));
    }
    SUBCASE("trace iterations strictly increase and objective is monotone") {
        SolverConfig cfg;
        cfg.epsilon = 1e-6;
        cfg.max_iterations = 500;
        cfg.trace_stride = 1;
        const SolveResult res = solve(fx.X, random_init(8, 8, 4, 0), cfg);
        REQUIRE(res.trace.samples.size() > 2);
        for (std::size_t i = 1; i < res.trace.samples.size(); ++i) {
            CHECK(res.trace.samples[i].iteration > res.trace.samples[i - 1].iteration);
            CHECK(res.trace.samples[i].objective <=
                  res.trace.samples[i - 1].objective * (1.0 + 1e-12) + 1e-12);
        }
    }
    SUBCASE("determinism") {
        SolverConfig cfg;
        cfg.epsilon = 1e-6;
        cfg.max_iterations = 300;
        const SolveResult a = solve(fx.X, random_init(8, 8, 4, 3), cfg);
        const SolveResult b = solve(fx.X, random_init(8, 8, 4, 3), cfg);
        CHECK(a.iterations == b.iterations);
        CHECK(a.factors.W == b.factors.W);
        CHECK(a.factors.H == b.factors.H);
    }
}

TEST_CASE("sweep properties on random instances") {
    std::mt19937_64 eng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(nmfkit::uniform01(eng) * 28);
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(nmfkit::uniform01(eng) * 28);
        const Eigen::Index r = 1 + static_cast<Eigen::Index>(nmfkit::uniform01(eng) * 5);
        Matrix Xm(m, n);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < n; ++j) Xm(i, j) = nmfkit::uniform01(eng) + 1e-6;
        DataMatrix X(Xm);
        Factorization F = random_init(m, n, r, 1000 + trial);

        for (Algorithm alg : {Algorithm::HALS, Algorithm::MU}) {
            const double before = objective(X, F);
            const Factorization after =
                alg == Algorithm::HALS ? hals_sweep(X, F) : mu_sweep(X, F);
            CHECK(objective(X, after) <= before + 1e-10 * before);
            CHECK((after.W.array() >= 0.0).all());
            CHECK((after.H.array() >= 0.0).all());
        }
    }
}
