#include "nmfkit/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace nmfkit {

namespace {

[[noreturn]] void format_error(const std::filesystem::path& path, int line,
                               const std::string& what) {
    throw FormatError(path.string() + ":" + std::to_string(line) + ": " + what);
}

void check_nonnegative(double value, const std::filesystem::path& path,
                       Eigen::Index row, Eigen::Index col) {
    if (value < 0.0)
        throw DomainError(path.string() + ": negative entry at (" +
                          std::to_string(row + 1) + ", " + std::to_string(col + 1) + ")");
}

bool blank_line(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char ch) { return std::isspace(ch); });
}

DataMatrix read_matrix_market(std::ifstream& in, const std::filesystem::path& path,
                              const std::string& header) {
    std::istringstream hs(header);
    std::string banner, object, fmt, field, symmetry;
    hs >> banner >> object >> fmt >> field >> symmetry;
    if (object != "matrix" || (fmt != "array" && fmt != "coordinate"))
        format_error(path, 1, "unsupported Matrix Market header");
    const bool coordinate = fmt == "coordinate";
    const bool symmetric = symmetry == "symmetric";

    std::string line;
    int lineno = 1;
    // skip comments
    do {
        if (!std::getline(in, line)) format_error(path, lineno, "missing size line");
        ++lineno;
    } while (!line.empty() && line[0] == '%');

    std::istringstream ss(line);
    Eigen::Index m = 0, n = 0;
    long long nnz = 0;
    if (!(ss >> m >> n)) format_error(path, lineno, "bad size line");
    if (coordinate && !(ss >> nnz)) format_error(path, lineno, "bad size line");
    if (m < 1 || n < 1) format_error(path, lineno, "bad dimensions");

    Matrix M = Matrix::Zero(m, n);
    if (coordinate) {
        for (long long e = 0; e < nnz; ++e) {
            Eigen::Index i = 0, j = 0;
            double v = 0.0;
            if (!(in >> i >> j >> v)) format_error(path, lineno + 1, "bad coordinate entry");
            ++lineno;
            if (i < 1 || i > m || j < 1 || j > n)
                format_error(path, lineno, "coordinate out of range");
            check_nonnegative(v, path, i - 1, j - 1);
            M(i - 1, j - 1) = v;
            if (symmetric) M(j - 1, i - 1) = v;
        }
    } else {
        // array format is column-major
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < m; ++i) {
                double v = 0.0;
                if (!(in >> v)) format_error(path, lineno + 1, "bad array entry");
                ++lineno;
                check_nonnegative(v, path, i, j);
                M(i, j) = v;
            }
    }
    return DataMatrix(std::move(M));
}

DataMatrix read_csv(std::ifstream& in, const std::filesystem::path& path,
                    std::string first_line) {
    std::vector<std::vector<double>> rows;
    Eigen::Index expect_m = -1, expect_n = -1;

    int lineno = 1;
    std::string line = std::move(first_line);
    if (!line.empty() && line[0] == '#') {
        std::istringstream hs(line.substr(1));
        if (!(hs >> expect_m >> expect_n)) format_error(path, 1, "bad '# m n' header");
        if (!std::getline(in, line)) format_error(path, 2, "no data after header");
        ++lineno;
    }

    do {
        if (blank_line(line)) continue;
        std::vector<double> row;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                const double v = std::stod(cell, &pos);
                while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
                    ++pos;
                if (pos != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::logic_error&) {
                format_error(path, lineno, "cannot parse value '" + cell + "'");
            }
        }
        if (row.empty()) format_error(path, lineno, "empty row");
        if (!rows.empty() && row.size() != rows.front().size())
            format_error(path, lineno, "ragged row");
        rows.push_back(std::move(row));
    } while (++lineno, std::getline(in, line));

    if (rows.empty()) throw FormatError(path.string() + ": empty matrix file");
    const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index n = static_cast<Eigen::Index>(rows.front().size());
    if (expect_m >= 0 && (expect_m != m || expect_n != n))
        throw FormatError(path.string() + ": header dimensions do not match data");

    Matrix M(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            check_nonnegative(rows[i][j], path, i, j);
            M(i, j) = rows[i][j];
        }
    return DataMatrix(std::move(M));
}

}  // namespace

DataMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    std::string first;
    if (!std::getline(in, first)) throw FormatError(path.string() + ": empty file");
    if (first.rfind("%%MatrixMarket", 0) == 0)
        return read_matrix_market(in, path, first);
    return read_csv(in, path, std::move(first));
}

void write_matrix_csv(const Matrix& M, std::ostream& os) {
    os.precision(17);
    os << "# " << M.rows() << " " << M.cols() << "\n";
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) os << ",";
            os << M(i, j);
        }
        os << "\n";
    }
}

void write_matrix_market(const Matrix& M, std::ostream& os) {
    os.precision(17);
    os << "%%MatrixMarket matrix array real general\n";
    os << M.rows() << " " << M.cols() << "\n";
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i) os << M(i, j) << "\n";
}

}  // namespace nmfkit
