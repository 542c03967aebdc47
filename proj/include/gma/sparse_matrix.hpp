#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <tuple>
#include <vector>

#include "gma/common.hpp"
#include "gma/dense_matrix.hpp"

namespace gma {

/// One stored entry of a sparse matrix.
struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// CSR storage with column indices sorted within each row, giving row-slice
/// iteration plus O(log nnz_row) random access to a single entry. The
/// leverage-score pipeline depends on that random access: it reads only the
/// sampled entries of A. Exact zeros are dropped; duplicate (i,j) pairs are
/// rejected.
class SparseMatrix {
  public:
    SparseMatrix() = default;

    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
        : rows_(rows), cols_(cols) {
        for (const Triplet &t : entries) {
            require(t.row < rows_ && t.col < cols_,
                    "SparseMatrix: entry (" + std::to_string(t.row) + "," +
                        std::to_string(t.col) + ") outside " + shape_str(rows_, cols_));
            require(std::isfinite(t.value), "SparseMatrix: non-finite entry");
        }
        std::sort(entries.begin(), entries.end(), [](const Triplet &a, const Triplet &b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        row_start_.assign(rows_ + 1, 0);
        col_index_.reserve(entries.size());
        values_.reserve(entries.size());
        for (std::size_t k = 0; k < entries.size(); ++k) {
            if (k > 0 && entries[k].row == entries[k - 1].row &&
                entries[k].col == entries[k - 1].col)
                throw std::invalid_argument("SparseMatrix: duplicate entry (" +
                                            std::to_string(entries[k].row) + "," +
                                            std::to_string(entries[k].col) + ")");
            if (entries[k].value == 0.0)
                continue;
            col_index_.push_back(entries[k].col);
            values_.push_back(entries[k].value);
            ++row_start_[entries[k].row + 1];
        }
        for (std::size_t i = 0; i < rows_; ++i)
            row_start_[i + 1] += row_start_[i];
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    /// Value at (i, j), zero if not stored. Binary search within the row.
    double at(std::size_t i, std::size_t j) const {
        auto begin = col_index_.begin() + static_cast<std::ptrdiff_t>(row_start_[i]);
        auto end = col_index_.begin() + static_cast<std::ptrdiff_t>(row_start_[i + 1]);
        auto it = std::lower_bound(begin, end, j);
        if (it == end || *it != j)
            return 0.0;
        return values_[static_cast<std::size_t>(it - col_index_.begin())];
    }

    std::size_t row_nnz(std::size_t i) const { return row_start_[i + 1] - row_start_[i]; }

    std::span<const std::size_t> row_cols(std::size_t i) const {
        return {col_index_.data() + row_start_[i], row_nnz(i)};
    }

    std::span<const double> row_values(std::size_t i) const {
        return {values_.data() + row_start_[i], row_nnz(i)};
    }

    DenseMatrix to_dense() const {
        DenseMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            auto cols = row_cols(i);
            auto vals = row_values(i);
            for (std::size_t k = 0; k < cols.size(); ++k)
                out(i, cols[k]) = vals[k];
        }
        return out;
    }

    std::vector<Triplet> to_triplets() const {
        std::vector<Triplet> out;
        out.reserve(nnz());
        for (std::size_t i = 0; i < rows_; ++i) {
            auto cols = row_cols(i);
            auto vals = row_values(i);
            for (std::size_t k = 0; k < cols.size(); ++k)
                out.push_back({i, cols[k], vals[k]});
        }
        return out;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> col_index_;
    std::vector<double> values_;
};

} // namespace gma
