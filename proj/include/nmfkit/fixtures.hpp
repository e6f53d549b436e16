#pragma once

#include "nmfkit/types.hpp"

#include <cstdint>
#include <string>

namespace nmfkit {

/// Exactly factorable ground-truth problem: X == W_true * H_true by
/// construction.
struct PlantedProblem {
    DataMatrix X;
    Factorization truth;
    std::string description;
};

/// The 8x8 integer rank-4 problem whose objective trace exhibits long
/// near-stationary plateaus separated by rapid drops.
PlantedProblem plateau_fixture();

/// Random nonnegative factors where dup_count columns of W are exact copies
/// of other columns (with distinct H rows).
PlantedProblem planted_duplicates(Eigen::Index m, Eigen::Index n, Eigen::Index r,
                                  Eigen::Index dup_count, std::uint64_t seed);

/// Random exactly-factorable problem with strictly positive factors.
PlantedProblem random_problem(Eigen::Index m, Eigen::Index n, Eigen::Index r,
                              std::uint64_t seed);

}  // namespace nmfkit
