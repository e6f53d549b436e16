#include "nmfkit/fixtures.hpp"

#include "nmfkit/rng.hpp"

namespace nmfkit {

PlantedProblem plateau_fixture() {
    Matrix W(8, 4);
    W << 6, 0, 4, 9,
         0, 4, 8, 3,
         4, 4, 0, 7,
         9, 1, 1, 1,
         0, 3, 0, 4,
         8, 1, 4, 0,
         0, 0, 4, 2,
         0, 9, 5, 5;

    Matrix Ht(8, 4);
    Ht << 6, 0, 3, 4,
          10, 10, 5, 9,
          8, 2, 0, 10,
          2, 9, 2, 7,
          0, 10, 4, 7,
          1, 6, 0, 0,
          2, 0, 0, 0,
          10, 0, 8, 0;

    Factorization truth(W, Ht.transpose());
    DataMatrix X(truth.product());
    return {std::move(X), std::move(truth), "8x8 rank-4 integer plateau fixture"};
}

PlantedProblem random_problem(Eigen::Index m, Eigen::Index n, Eigen::Index r,
                              std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    Matrix W(m, r), H(r, n);
    for (Eigen::Index j = 0; j < r; ++j)
        for (Eigen::Index i = 0; i < m; ++i) W(i, j) = uniform01(eng) + 0.01;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < r; ++i) H(i, j) = uniform01(eng) + 0.01;
    Factorization truth(std::move(W), std::move(H));
    DataMatrix X(truth.product());
    return {std::move(X), std::move(truth), "random exactly-factorable problem"};
}

PlantedProblem planted_duplicates(Eigen::Index m, Eigen::Index n, Eigen::Index r,
                                  Eigen::Index dup_count, std::uint64_t seed) {
    if (dup_count >= r)
        throw RankError("planted_duplicates: dup_count must be < r");
    PlantedProblem base = random_problem(m, n, r, seed);
    Matrix W = base.truth.W;
    // duplicate the leading columns into the trailing slots; H rows stay distinct
    for (Eigen::Index d = 0; d < dup_count; ++d)
        W.col(r - 1 - d) = W.col(d);
    Factorization truth(std::move(W), base.truth.H);
    DataMatrix X(truth.product());
    return {std::move(X), std::move(truth), "random factors with duplicated W columns"};
}

}  // namespace nmfkit
