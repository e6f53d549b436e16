#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace nmfkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct RankError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Nonnegative data matrix X (m x n). Validated on construction.
class DataMatrix {
  public:
    explicit DataMatrix(Matrix values) : values_(std::move(values)) {
        if (values_.rows() < 1 || values_.cols() < 1)
            throw DimensionError("DataMatrix: empty matrix");
        if ((values_.array() < 0.0).any())
            throw DomainError("DataMatrix: negative entry");
        if (!(values_.array() > 0.0).any())
            throw DomainError("DataMatrix: all entries zero");
    }

    const Matrix& values() const { return values_; }
    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }

  private:
    Matrix values_;
};

/// Paired factors W (m x r), H (r x n), all entries nonnegative.
struct Factorization {
    Matrix W;
    Matrix H;

    Factorization() = default;
    Factorization(Matrix w, Matrix h) : W(std::move(w)), H(std::move(h)) {
        if (W.cols() != H.rows())
            throw DimensionError("Factorization: W cols != H rows");
    }

    Eigen::Index rank() const { return W.cols(); }
    Matrix product() const { return W * H; }
};

inline void require_compatible(const DataMatrix& X, const Factorization& F) {
    if (X.rows() != F.W.rows() || X.cols() != F.H.cols())
        throw DimensionError("shape mismatch between X and W*H");
}

}  // namespace nmfkit
