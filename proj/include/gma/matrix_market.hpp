#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gma/linalg.hpp"

namespace gma {

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] inline void mm_fail(const std::string &path, std::size_t line,
                                 const std::string &what) {
    throw std::invalid_argument(path + ":" + std::to_string(line) + ": " + what);
}

inline bool parse_double(const std::string &tok, double &out) {
    try {
        std::size_t used = 0;
        out = std::stod(tok, &used);
        return used == tok.size();
    } catch (const std::exception &) {
        return false;
    }
}

} // namespace detail

/// Matrix Market writer, array form (dense, column-major entry order).
/// Values carry 17 significant digits so write-then-read is value-exact.
inline void write_matrix_market(const std::string &path, const DenseMatrix &a) {
    std::ofstream out(path);
    require(out.good(), "write_matrix_market: cannot open " + path);
    out << "%%MatrixMarket matrix array real general\n";
    out << a.rows() << " " << a.cols() << "\n";
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            out << detail::fmt17(a(i, j)) << "\n";
    require(out.good(), "write_matrix_market: write failed for " + path);
}

/// Matrix Market writer, coordinate form (sparse, 1-based indices).
inline void write_matrix_market(const std::string &path, const SparseMatrix &a) {
    std::ofstream out(path);
    require(out.good(), "write_matrix_market: cannot open " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << " " << a.cols() << " " << a.nnz() << "\n";
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto cols = a.row_cols(i);
        auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k)
            out << (i + 1) << " " << (cols[k] + 1) << " " << detail::fmt17(vals[k]) << "\n";
    }
    require(out.good(), "write_matrix_market: write failed for " + path);
}

inline void write_matrix_market(const std::string &path, const MatrixAny &a) {
    std::visit([&](const auto &m) { write_matrix_market(path, m); }, a);
}

/// Matrix Market reader. Array banners produce a DenseMatrix, coordinate
/// banners a SparseMatrix. Only the "real general" field/symmetry pair is
/// accepted; malformed input fails with the offending line number.
inline MatrixAny read_matrix_market(const std::string &path) {
    std::ifstream in(path);
    require(in.good(), "read_matrix_market: cannot open " + path);

    std::string line;
    std::size_t lineno = 0;

    require(static_cast<bool>(std::getline(in, line)), "read_matrix_market: " + path + " is empty");
    ++lineno;
    std::istringstream banner(line);
    std::string magic, object, format, field, symmetry;
    banner >> magic >> object >> format >> field >> symmetry;
    if (magic != "%%MatrixMarket")
        detail::mm_fail(path, lineno, "malformed banner, expected %%MatrixMarket");
    if (object != "matrix")
        detail::mm_fail(path, lineno, "unsupported object '" + object + "', expected matrix");
    if (format != "array" && format != "coordinate")
        detail::mm_fail(path, lineno,
                        "unsupported format '" + format + "', expected array or coordinate");
    if (field != "real")
        detail::mm_fail(path, lineno, "field-type error: expected real, got '" + field + "'");
    if (symmetry != "general")
        detail::mm_fail(path, lineno,
                        "unsupported symmetry '" + symmetry + "', expected general");

    // skip comment and blank lines before the size line
    std::string size_line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%')
            continue;
        size_line = line;
        break;
    }
    if (size_line.empty())
        detail::mm_fail(path, lineno, "missing size line");

    std::istringstream sizes(size_line);
    long long rows = -1, cols = -1, nnz = -1;
    if (format == "array") {
        if (!(sizes >> rows >> cols))
            detail::mm_fail(path, lineno, "malformed size line, expected 'rows cols'");
        if (rows <= 0 || cols <= 0)
            detail::mm_fail(path, lineno, "invalid dimensions " + std::to_string(rows) + " " +
                                              std::to_string(cols));
        std::vector<double> data(static_cast<std::size_t>(rows * cols));
        for (long long j = 0; j < cols; ++j)
            for (long long i = 0; i < rows; ++i) {
                std::string tok;
                do {
                    if (!std::getline(in, line))
                        detail::mm_fail(path, lineno + 1, "unexpected end of file, expected " +
                                                              std::to_string(rows * cols) +
                                                              " entries");
                    ++lineno;
                    std::istringstream ls(line);
                    ls >> tok;
                } while (tok.empty());
                double v = 0.0;
                if (!detail::parse_double(tok, v))
                    detail::mm_fail(path, lineno, "non-numeric value '" + tok + "'");
                data[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                     static_cast<std::size_t>(j)] = v;
            }
        return DenseMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                           std::move(data));
    }

    if (!(sizes >> rows >> cols >> nnz))
        detail::mm_fail(path, lineno, "malformed size line, expected 'rows cols nnz'");
    if (rows <= 0 || cols <= 0 || nnz < 0)
        detail::mm_fail(path, lineno, "invalid dimensions " + std::to_string(rows) + " " +
                                          std::to_string(cols) + " " + std::to_string(nnz));
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(nnz));
    long long seen = 0;
    while (seen < nnz) {
        if (!std::getline(in, line))
            detail::mm_fail(path, lineno + 1, "unexpected end of file, expected " +
                                                  std::to_string(nnz) + " entries, got " +
                                                  std::to_string(seen));
        ++lineno;
        if (line.empty() || line[0] == '%')
            continue;
        std::istringstream ls(line);
        long long i = 0, j = 0;
        std::string vtok;
        if (!(ls >> i >> j >> vtok))
            detail::mm_fail(path, lineno, "malformed entry, expected 'row col value'");
        if (i < 1 || i > rows || j < 1 || j > cols)
            detail::mm_fail(path, lineno, "index out of bounds (" + std::to_string(i) + ", " +
                                              std::to_string(j) + ") for " +
                                              std::to_string(rows) + "x" + std::to_string(cols));
        double v = 0.0;
        if (!detail::parse_double(vtok, v))
            detail::mm_fail(path, lineno, "non-numeric value '" + vtok + "'");
        entries.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), v});
        ++seen;
    }
    try {
        return SparseMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                            std::move(entries));
    } catch (const std::invalid_argument &e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

} // namespace gma
