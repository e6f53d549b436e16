#pragma once

#include "nmfkit/types.hpp"

#include <filesystem>
#include <ostream>

namespace nmfkit {

/// Read a nonnegative dense matrix from a file. Supported formats:
///   - comma-separated dense rows, first line optionally "# m n"
///   - Matrix Market array or coordinate (reconstructed dense)
/// Negative entries are rejected with the offending coordinate.
DataMatrix read_matrix(const std::filesystem::path& path);

void write_matrix_csv(const Matrix& M, std::ostream& os);
void write_matrix_market(const Matrix& M, std::ostream& os);

}  // namespace nmfkit
