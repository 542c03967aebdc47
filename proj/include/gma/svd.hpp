#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "gma/linalg.hpp"

namespace gma {

/// Default relative threshold separating numerical rank from noise:
/// singular values above rank_tol * sigma_1 count toward the rank.
inline constexpr double kDefaultRankTol = 1e-12;

/// Condensed SVD: A = U * diag(sigma) * Vt with only the singular values above
/// the rank cut retained. U is m x rank with orthonormal columns, Vt is
/// rank x n with orthonormal rows, sigma is positive and nonincreasing.
/// A rank-0 (all-zero) input yields empty factors.
struct SvdFactors {
    DenseMatrix u;
    std::vector<double> sigma;
    DenseMatrix vt;
    std::size_t rank = 0;
};

/// Condensed SVD via Jacobi iteration (QR-preconditioned).
inline SvdFactors svd(const DenseMatrix &a, double rank_tol = kDefaultRankTol) {
    require(!a.empty(), "svd: empty matrix");
    require(a.all_finite(), "svd: non-finite entries");

    Eigen::JacobiSVD<Eigen::MatrixXd> solver(detail::map_of(a),
                                             Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success)
        throw NumericalError("svd: Jacobi iteration failed to converge (sweep limit reached)");

    const auto &sv = solver.singularValues();
    const double cutoff = sv.size() > 0 ? rank_tol * sv(0) : 0.0;
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff && sv(i) > 0.0)
            ++rank;

    SvdFactors f;
    f.rank = rank;
    f.sigma.assign(sv.data(), sv.data() + rank);
    f.u = DenseMatrix(a.rows(), rank);
    f.vt = DenseMatrix(rank, a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < rank; ++k)
            f.u(i, k) = solver.matrixU()(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(k));
    for (std::size_t k = 0; k < rank; ++k)
        for (std::size_t j = 0; j < a.cols(); ++j)
            f.vt(k, j) = solver.matrixV()(static_cast<Eigen::Index>(j),
                                          static_cast<Eigen::Index>(k));
    return f;
}

/// Pseudoinverse assembled from already-computed factors.
inline DenseMatrix pinv(const SvdFactors &f) {
    const std::size_t m = f.u.rows();
    const std::size_t n = f.vt.cols();
    if (f.rank == 0)
        return DenseMatrix(n, m);
    DenseMatrix vsi(n, f.rank);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < f.rank; ++k)
            vsi(j, k) = f.vt(k, j) / f.sigma[k];
    return matmul(vsi, f.u.transposed());
}

/// Moore-Penrose pseudoinverse A+ = V * diag(1/sigma) * Ut. The all-zero
/// matrix maps to the zero n x m matrix.
inline DenseMatrix pinv(const DenseMatrix &a, double rank_tol = kDefaultRankTol) {
    return pinv(svd(a, rank_tol));
}

/// Largest singular value; 0 for the zero matrix.
inline double spec_norm(const DenseMatrix &a) {
    SvdFactors f = svd(a);
    return f.rank > 0 ? f.sigma.front() : 0.0;
}

} // namespace gma
