#pragma once

#include "nmfkit/types.hpp"

#include <cstdint>

namespace nmfkit {

enum class InitKind { Random, NNDSVD, NNDSVDa, NNDSVDar };

struct InitSpec {
    InitKind kind = InitKind::Random;
    std::uint64_t seed = 0;  // used by Random and NNDSVDar only
};

/// W, H with i.i.d. uniform [0,1) entries from a seeded generator.
Factorization random_init(Eigen::Index m, Eigen::Index n, Eigen::Index r,
                          std::uint64_t seed);

/// SVD-based deterministic initialization by sign-splitting of singular
/// vectors. NNDSVDa fills zeros with mean(X); NNDSVDar fills them with
/// seeded uniform draws on [0, mean(X)/100).
Factorization nndsvd_init(const DataMatrix& X, Eigen::Index r, InitKind variant,
                          std::uint64_t seed = 0);

Factorization make_init(const DataMatrix& X, Eigen::Index r, const InitSpec& spec);

}  // namespace nmfkit
