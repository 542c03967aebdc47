#pragma once

#include <cmath>
#include <variant>

#include <Eigen/Dense>

#include "gma/common.hpp"
#include "gma/dense_matrix.hpp"
#include "gma/sparse_matrix.hpp"

namespace gma {

/// A data matrix that may be stored dense or sparse.
using MatrixAny = std::variant<DenseMatrix, SparseMatrix>;

namespace detail {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EigenMap = Eigen::Map<EigenRowMajor>;
using EigenConstMap = Eigen::Map<const EigenRowMajor>;

inline EigenConstMap map_of(const DenseMatrix &a) {
    return EigenConstMap(a.data(), static_cast<Eigen::Index>(a.rows()),
                         static_cast<Eigen::Index>(a.cols()));
}

inline EigenMap map_of(DenseMatrix &a) {
    return EigenMap(a.data(), static_cast<Eigen::Index>(a.rows()),
                    static_cast<Eigen::Index>(a.cols()));
}

} // namespace detail

inline std::size_t rows_of(const MatrixAny &a) {
    return std::visit([](const auto &m) { return m.rows(); }, a);
}

inline std::size_t cols_of(const MatrixAny &a) {
    return std::visit([](const auto &m) { return m.cols(); }, a);
}

/// Stored entries: nnz for sparse, rows*cols for dense.
inline std::size_t entry_count(const MatrixAny &a) {
    if (std::holds_alternative<SparseMatrix>(a))
        return std::get<SparseMatrix>(a).nnz();
    return std::get<DenseMatrix>(a).size();
}

inline DenseMatrix densified(const MatrixAny &a) {
    if (std::holds_alternative<SparseMatrix>(a))
        return std::get<SparseMatrix>(a).to_dense();
    return std::get<DenseMatrix>(a);
}

inline double fro_norm(const DenseMatrix &a) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        sum += a.data()[k] * a.data()[k];
    return std::sqrt(sum);
}

inline double fro_norm(const SparseMatrix &a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (double v : a.row_values(i))
            sum += v * v;
    return std::sqrt(sum);
}

inline double fro_norm(const MatrixAny &a) {
    return std::visit([](const auto &m) { return fro_norm(m); }, a);
}

inline void check_inner(std::size_t a_rows, std::size_t a_cols, std::size_t b_rows,
                        std::size_t b_cols, const char *op) {
    require(a_cols == b_rows, std::string(op) + ": inner dimensions disagree, " +
                                  shape_str(a_rows, a_cols) + " * " + shape_str(b_rows, b_cols));
}

/// Dense product, BLAS-backed.
inline DenseMatrix matmul(const DenseMatrix &a, const DenseMatrix &b) {
    check_inner(a.rows(), a.cols(), b.rows(), b.cols(), "matmul");
    DenseMatrix c(a.rows(), b.cols());
    detail::map_of(c).noalias() = detail::map_of(a) * detail::map_of(b);
    return c;
}

/// Sparse * dense: one pass over stored entries, never densifies the operand.
inline DenseMatrix matmul(const SparseMatrix &a, const DenseMatrix &b) {
    check_inner(a.rows(), a.cols(), b.rows(), b.cols(), "matmul");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto cols = a.row_cols(i);
        auto vals = a.row_values(i);
        double *out = c.row_ptr(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const double *brow = b.row_ptr(cols[k]);
            const double v = vals[k];
            for (std::size_t j = 0; j < b.cols(); ++j)
                out[j] += v * brow[j];
        }
    }
    return c;
}

/// Dense * sparse: accumulates rank-1 column updates from stored entries.
inline DenseMatrix matmul(const DenseMatrix &a, const SparseMatrix &b) {
    check_inner(a.rows(), a.cols(), b.rows(), b.cols(), "matmul");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t k = 0; k < b.rows(); ++k) {
        auto cols = b.row_cols(k);
        auto vals = b.row_values(k);
        if (cols.empty())
            continue;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const double aik = a(i, k);
            if (aik == 0.0)
                continue;
            double *out = c.row_ptr(i);
            for (std::size_t t = 0; t < cols.size(); ++t)
                out[cols[t]] += aik * vals[t];
        }
    }
    return c;
}

inline DenseMatrix matmul(const MatrixAny &a, const DenseMatrix &b) {
    return std::visit([&](const auto &m) { return matmul(m, b); }, a);
}

inline DenseMatrix matmul(const DenseMatrix &a, const MatrixAny &b) {
    return std::visit([&](const auto &m) { return matmul(a, m); }, b);
}

inline void check_residual_shapes(std::size_t am, std::size_t an, const DenseMatrix &m,
                                  const DenseMatrix &x, const DenseMatrix &n) {
    require(m.rows() == am && n.cols() == an && x.rows() == m.cols() && x.cols() == n.rows(),
            "residual_norm: incompatible shapes A=" + shape_str(am, an) + " M=" +
                shape_str(m.rows(), m.cols()) + " X=" + shape_str(x.rows(), x.cols()) +
                " N=" + shape_str(n.rows(), n.cols()));
}

/// ||A - M*X*N||_F, forming (M*X)*N.
inline double residual_norm(const DenseMatrix &a, const DenseMatrix &m, const DenseMatrix &x,
                            const DenseMatrix &n) {
    check_residual_shapes(a.rows(), a.cols(), m, x, n);
    DenseMatrix fit = matmul(matmul(m, x), n);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = a.data()[k] - fit.data()[k];
        sum += d * d;
    }
    return std::sqrt(sum);
}

/// Sparse-A variant: sum over the dense fit, corrected on stored entries only.
inline double residual_norm(const SparseMatrix &a, const DenseMatrix &m, const DenseMatrix &x,
                            const DenseMatrix &n) {
    check_residual_shapes(a.rows(), a.cols(), m, x, n);
    DenseMatrix fit = matmul(matmul(m, x), n);
    double sum = 0.0;
    for (std::size_t k = 0; k < fit.size(); ++k)
        sum += fit.data()[k] * fit.data()[k];
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto cols = a.row_cols(i);
        auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            double f = fit(i, cols[k]);
            double d = vals[k] - f;
            sum += d * d - f * f;
        }
    }
    // tiny negative sums are roundoff from the correction terms
    return std::sqrt(std::max(sum, 0.0));
}

inline double residual_norm(const MatrixAny &a, const DenseMatrix &m, const DenseMatrix &x,
                            const DenseMatrix &n) {
    return std::visit([&](const auto &mat) { return residual_norm(mat, m, x, n); }, a);
}

} // namespace gma
