#pragma once

#include "nmfkit/types.hpp"

#include <cstdint>

namespace nmfkit {

enum class RecoveryStrategy { ResidualSVD, RandomNonnegative };

struct RecoverySpec {
    Eigen::Index k = 1;
    RecoveryStrategy strategy = RecoveryStrategy::ResidualSVD;
    std::uint64_t seed = 0;  // RandomNonnegative only
};

/// Append k nonnegative components capturing structure of X missing from
/// W*H. The first r components of the result are the input's, untouched.
/// ResidualSVD is deterministic and never increases the objective.
Factorization recover_components(const DataMatrix& X, const Factorization& F,
                                 const RecoverySpec& spec);

/// Default component count for recovery: 20% of the target rank, rounded up.
Eigen::Index default_extra_components(Eigen::Index target_rank);

}  // namespace nmfkit
