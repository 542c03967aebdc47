#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <utility>
#include <vector>

#include "gma/common.hpp"

namespace gma {

/// Row-major dense matrix of doubles. Immutable by convention once handed to
/// the solvers; entries are validated finite when constructed from user data.
class DenseMatrix {
  public:
    DenseMatrix() = default;

    /// Zero-filled rows x cols.
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    /// Takes ownership of row-major data; rejects wrong length and non-finite entries.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        require(data_.size() == rows_ * cols_,
                "DenseMatrix: data length " + std::to_string(data_.size()) +
                    " != " + shape_str(rows_, cols_));
        for (double v : data_)
            require(std::isfinite(v), "DenseMatrix: non-finite entry");
    }

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        std::size_t r = rows.size();
        std::size_t c = r == 0 ? 0 : rows.begin()->size();
        std::vector<double> data;
        data.reserve(r * c);
        for (const auto &row : rows) {
            require(row.size() == c, "DenseMatrix::from_rows: ragged rows");
            data.insert(data.end(), row.begin(), row.end());
        }
        return DenseMatrix(r, c, std::move(data));
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix eye(n, n);
        for (std::size_t i = 0; i < n; ++i)
            eye(i, i) = 1.0;
        return eye;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const double *data() const { return data_.data(); }
    double *data() { return data_.data(); }
    const double *row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
    double *row_ptr(std::size_t i) { return data_.data() + i * cols_; }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_)
            m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v))
                return false;
        return true;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace gma
