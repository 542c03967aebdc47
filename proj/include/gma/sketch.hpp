#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "gma/linalg.hpp"
#include "gma/rng.hpp"
#include "gma/svd.hpp"

namespace gma {

// =============================================================================
// Sketch families. Each operator S maps R^m -> R^s (s << m in useful regimes)
// and supports application from the left (S*A) against dense or sparse data,
// and from the right as its transpose (A*S^T). None of them materializes a
// dense s x m array unless asked to.
// =============================================================================

/// CountSketch: each input coordinate is hashed to one output bucket and
/// carries a random sign. Entries are +-1 with no 1/sqrt scaling. Applying to
/// the m x m identity yields exactly m nonzeros, all +-1.
class SparseEmbedding {
  public:
    SparseEmbedding(std::size_t input_dim, std::size_t sketch_dim,
                    std::vector<std::size_t> bucket, std::vector<double> sign,
                    std::uint64_t seed = 0)
        : input_dim_(input_dim), sketch_dim_(sketch_dim), bucket_(std::move(bucket)),
          sign_(std::move(sign)), seed_(seed) {
        require(sketch_dim_ > 0, "SparseEmbedding: sketch dimension must be positive");
        require(bucket_.size() == input_dim_ && sign_.size() == input_dim_,
                "SparseEmbedding: bucket/sign maps must cover every input coordinate");
        for (std::size_t h : bucket_)
            require(h < sketch_dim_, "SparseEmbedding: bucket out of range");
        for (double s : sign_)
            require(s == 1.0 || s == -1.0, "SparseEmbedding: signs must be +-1");
    }

    std::size_t input_dim() const { return input_dim_; }
    std::size_t sketch_dim() const { return sketch_dim_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::size_t> &bucket() const { return bucket_; }
    const std::vector<double> &sign() const { return sign_; }

    /// S*A in one pass over stored entries: row i of A lands in output row
    /// bucket[i] with its sign. Cost O(nnz(A) + sketch_dim * cols).
    DenseMatrix apply_left(const DenseMatrix &a) const {
        require(a.rows() == input_dim_, "SparseEmbedding::apply_left: A has " +
                                            std::to_string(a.rows()) + " rows, sketch expects " +
                                            std::to_string(input_dim_));
        DenseMatrix out(sketch_dim_, a.cols());
        for (std::size_t i = 0; i < input_dim_; ++i) {
            double *dst = out.row_ptr(bucket_[i]);
            const double *src = a.row_ptr(i);
            const double s = sign_[i];
            for (std::size_t j = 0; j < a.cols(); ++j)
                dst[j] += s * src[j];
        }
        count_entry_touches(a.size());
        return out;
    }

    DenseMatrix apply_left(const SparseMatrix &a) const {
        require(a.rows() == input_dim_, "SparseEmbedding::apply_left: A has " +
                                            std::to_string(a.rows()) + " rows, sketch expects " +
                                            std::to_string(input_dim_));
        DenseMatrix out(sketch_dim_, a.cols());
        for (std::size_t i = 0; i < input_dim_; ++i) {
            auto cols = a.row_cols(i);
            auto vals = a.row_values(i);
            double *dst = out.row_ptr(bucket_[i]);
            const double s = sign_[i];
            for (std::size_t k = 0; k < cols.size(); ++k)
                dst[cols[k]] += s * vals[k];
            count_entry_touches(cols.size());
        }
        return out;
    }

    DenseMatrix apply_left(const MatrixAny &a) const {
        return std::visit([&](const auto &m) { return apply_left(m); }, a);
    }

    /// A*S^T: column j of A lands in output column bucket[j].
    DenseMatrix apply_right(const DenseMatrix &a) const {
        require(a.cols() == input_dim_, "SparseEmbedding::apply_right: A has " +
                                            std::to_string(a.cols()) +
                                            " cols, sketch expects " + std::to_string(input_dim_));
        DenseMatrix out(a.rows(), sketch_dim_);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const double *src = a.row_ptr(i);
            double *dst = out.row_ptr(i);
            for (std::size_t j = 0; j < input_dim_; ++j)
                dst[bucket_[j]] += sign_[j] * src[j];
        }
        count_entry_touches(a.size());
        return out;
    }

    DenseMatrix apply_right(const SparseMatrix &a) const {
        require(a.cols() == input_dim_, "SparseEmbedding::apply_right: A has " +
                                            std::to_string(a.cols()) +
                                            " cols, sketch expects " + std::to_string(input_dim_));
        DenseMatrix out(a.rows(), sketch_dim_);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            auto cols = a.row_cols(i);
            auto vals = a.row_values(i);
            double *dst = out.row_ptr(i);
            for (std::size_t k = 0; k < cols.size(); ++k)
                dst[bucket_[cols[k]]] += sign_[cols[k]] * vals[k];
            count_entry_touches(cols.size());
        }
        return out;
    }

    /// Dense s x m form, for small-scale reference checks only.
    DenseMatrix to_dense() const {
        DenseMatrix out(sketch_dim_, input_dim_);
        for (std::size_t i = 0; i < input_dim_; ++i)
            out(bucket_[i], i) = sign_[i];
        return out;
    }

  private:
    std::size_t input_dim_;
    std::size_t sketch_dim_;
    std::vector<std::size_t> bucket_;
    std::vector<double> sign_;
    std::uint64_t seed_;
};

/// Bucket and sign maps drawn i.i.d. uniform from a counter-based stream, so
/// the same (input_dim, sketch_dim, seed) always rebuilds the same operator.
inline SparseEmbedding build_sparse_embedding(std::size_t input_dim, std::size_t sketch_dim,
                                              std::uint64_t seed) {
    require(sketch_dim > 0, "build_sparse_embedding: sketch dimension must be positive");
    require(input_dim > 0, "build_sparse_embedding: input dimension must be positive");
    CounterRng rng(seed, /*stream_id=*/0x5E);
    std::vector<std::size_t> bucket(input_dim);
    std::vector<double> sign(input_dim);
    for (std::size_t i = 0; i < input_dim; ++i) {
        bucket[i] = rng.index(sketch_dim);
        sign[i] = rng.sign();
    }
    return SparseEmbedding(input_dim, sketch_dim, std::move(bucket), std::move(sign), seed);
}

/// Dense sketch with i.i.d. N(0, 1/s) entries, s = sketch_dim.
class GaussianSketch {
  public:
    GaussianSketch(std::size_t input_dim, std::size_t sketch_dim, DenseMatrix entries,
                   std::uint64_t seed = 0)
        : input_dim_(input_dim), sketch_dim_(sketch_dim), entries_(std::move(entries)),
          seed_(seed) {
        require(entries_.rows() == sketch_dim_ && entries_.cols() == input_dim_,
                "GaussianSketch: entry matrix must be sketch_dim x input_dim");
    }

    std::size_t input_dim() const { return input_dim_; }
    std::size_t sketch_dim() const { return sketch_dim_; }
    std::uint64_t seed() const { return seed_; }
    const DenseMatrix &entries() const { return entries_; }

    DenseMatrix apply_left(const DenseMatrix &a) const {
        DenseMatrix out = matmul(entries_, a);
        count_entry_touches(a.size());
        return out;
    }

    DenseMatrix apply_left(const SparseMatrix &a) const {
        require(a.rows() == input_dim_, "GaussianSketch::apply_left: dimension mismatch");
        // out[:, j] += G[:, k] * a_kj over stored entries
        DenseMatrix out(sketch_dim_, a.cols());
        for (std::size_t k = 0; k < a.rows(); ++k) {
            auto cols = a.row_cols(k);
            auto vals = a.row_values(k);
            for (std::size_t s = 0; s < sketch_dim_; ++s) {
                const double g = entries_(s, k);
                double *dst = out.row_ptr(s);
                for (std::size_t t = 0; t < cols.size(); ++t)
                    dst[cols[t]] += g * vals[t];
            }
            count_entry_touches(cols.size());
        }
        return out;
    }

    DenseMatrix apply_left(const MatrixAny &a) const {
        return std::visit([&](const auto &m) { return apply_left(m); }, a);
    }

    DenseMatrix apply_right(const DenseMatrix &a) const {
        require(a.cols() == input_dim_, "GaussianSketch::apply_right: dimension mismatch");
        DenseMatrix out(a.rows(), sketch_dim_);
        detail::map_of(out).noalias() =
            detail::map_of(a) * detail::map_of(entries_).transpose();
        count_entry_touches(a.size());
        return out;
    }

  private:
    std::size_t input_dim_;
    std::size_t sketch_dim_;
    DenseMatrix entries_;
    std::uint64_t seed_;
};

inline GaussianSketch build_gaussian(std::size_t input_dim, std::size_t sketch_dim,
                                     std::uint64_t seed) {
    require(sketch_dim > 0, "build_gaussian: sketch dimension must be positive");
    require(input_dim > 0, "build_gaussian: input dimension must be positive");
    CounterRng rng(seed, /*stream_id=*/0x6A);
    const double scale = 1.0 / std::sqrt(static_cast<double>(sketch_dim));
    DenseMatrix entries(sketch_dim, input_dim);
    for (std::size_t i = 0; i < sketch_dim; ++i)
        for (std::size_t j = 0; j < input_dim; ++j)
            entries(i, j) = scale * rng.normal();
    return GaussianSketch(input_dim, sketch_dim, std::move(entries), seed);
}

/// Row-sampling sketch: indices drawn i.i.d. with replacement from the given
/// score distribution, row j rescaled by 1/sqrt(score * sample_count).
class LeverageScoreSketch {
  public:
    LeverageScoreSketch(std::size_t input_dim, std::vector<std::size_t> indices,
                        std::vector<double> scales, std::vector<double> scores,
                        std::uint64_t seed = 0)
        : input_dim_(input_dim), indices_(std::move(indices)), scales_(std::move(scales)),
          scores_(std::move(scores)), seed_(seed) {
        require(indices_.size() == scales_.size(),
                "LeverageScoreSketch: index/scale lists must match");
        require(scores_.size() == input_dim_, "LeverageScoreSketch: one score per coordinate");
        for (std::size_t i : indices_) {
            require(i < input_dim_, "LeverageScoreSketch: sampled index out of range");
            require(scores_[i] > 0.0, "LeverageScoreSketch: sampled a zero-probability index");
        }
    }

    std::size_t input_dim() const { return input_dim_; }
    std::size_t sample_count() const { return indices_.size(); }
    std::size_t sketch_dim() const { return sample_count(); }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::size_t> &indices() const { return indices_; }
    const std::vector<double> &scales() const { return scales_; }
    const std::vector<double> &scores() const { return scores_; }

    /// (S*A)[j, :] = scale_j * A[index_j, :]; reads only the sampled rows.
    DenseMatrix apply_left(const DenseMatrix &a) const {
        require(a.rows() == input_dim_, "LeverageScoreSketch::apply_left: A has " +
                                            std::to_string(a.rows()) + " rows, sketch expects " +
                                            std::to_string(input_dim_));
        DenseMatrix out(sample_count(), a.cols());
        for (std::size_t j = 0; j < sample_count(); ++j) {
            const double *src = a.row_ptr(indices_[j]);
            double *dst = out.row_ptr(j);
            for (std::size_t k = 0; k < a.cols(); ++k)
                dst[k] = scales_[j] * src[k];
            count_entry_touches(a.cols());
        }
        return out;
    }

    DenseMatrix apply_left(const SparseMatrix &a) const {
        require(a.rows() == input_dim_, "LeverageScoreSketch::apply_left: A has " +
                                            std::to_string(a.rows()) + " rows, sketch expects " +
                                            std::to_string(input_dim_));
        DenseMatrix out(sample_count(), a.cols());
        for (std::size_t j = 0; j < sample_count(); ++j) {
            auto cols = a.row_cols(indices_[j]);
            auto vals = a.row_values(indices_[j]);
            double *dst = out.row_ptr(j);
            for (std::size_t k = 0; k < cols.size(); ++k)
                dst[cols[k]] = scales_[j] * vals[k];
            count_entry_touches(cols.size());
        }
        return out;
    }

    DenseMatrix apply_left(const MatrixAny &a) const {
        return std::visit([&](const auto &m) { return apply_left(m); }, a);
    }

    /// A*S^T: output column j is scale_j times column index_j of A.
    DenseMatrix apply_right(const DenseMatrix &a) const {
        require(a.cols() == input_dim_,
                "LeverageScoreSketch::apply_right: dimension mismatch");
        DenseMatrix out(a.rows(), sample_count());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const double *src = a.row_ptr(i);
            double *dst = out.row_ptr(i);
            for (std::size_t j = 0; j < sample_count(); ++j)
                dst[j] = scales_[j] * src[indices_[j]];
        }
        count_entry_touches(a.rows() * sample_count());
        return out;
    }

    DenseMatrix to_dense() const {
        DenseMatrix out(sample_count(), input_dim_);
        for (std::size_t j = 0; j < sample_count(); ++j)
            out(j, indices_[j]) += scales_[j];
        return out;
    }

  private:
    std::size_t input_dim_;
    std::vector<std::size_t> indices_;
    std::vector<double> scales_;
    std::vector<double> scores_;
    std::uint64_t seed_;
};

/// Row leverage scores of M: squared row norms of an orthonormal column basis,
/// divided by the rank. Sums to 1. The basis comes from the condensed SVD.
inline std::vector<double> compute_leverage_scores(const DenseMatrix &m,
                                                   double rank_tol = kDefaultRankTol) {
    SvdFactors f = svd(m, rank_tol);
    if (f.rank == 0)
        throw std::invalid_argument("compute_leverage_scores: no column space to sample");
    std::vector<double> scores(m.rows(), 0.0);
    const double inv_k = 1.0 / static_cast<double>(f.rank);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < f.rank; ++k)
            s += f.u(i, k) * f.u(i, k);
        scores[i] = s * inv_k;
    }
    return scores;
}

/// Draws sample_count indices i.i.d. with replacement from the score
/// distribution via inverse-CDF lookup; deterministic under the seed.
inline LeverageScoreSketch build_leverage_sketch(const std::vector<double> &scores,
                                                 std::size_t sample_count, std::uint64_t seed) {
    require(sample_count > 0, "build_leverage_sketch: sample count must be positive");
    require(!scores.empty(), "build_leverage_sketch: empty score vector");
    double total = 0.0;
    for (double s : scores) {
        require(s >= 0.0, "build_leverage_sketch: negative score");
        total += s;
    }
    require(std::abs(total - 1.0) <= 1e-8,
            "build_leverage_sketch: scores sum to " + std::to_string(total) + ", expected 1");

    std::vector<double> cdf(scores.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        acc += scores[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0; // absorb roundoff so u < 1 always lands

    CounterRng rng(seed, /*stream_id=*/0x7C);
    std::vector<std::size_t> indices(sample_count);
    std::vector<double> scales(sample_count);
    const double rs = static_cast<double>(sample_count);
    for (std::size_t j = 0; j < sample_count; ++j) {
        const double u = rng.uniform();
        std::size_t i = static_cast<std::size_t>(
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (i >= scores.size())
            i = scores.size() - 1;
        // trailing zero-score bins own no mass, but the final clamp can hand
        // them the roundoff sliver below 1; that sliver belongs to the last
        // positive bin
        while (i > 0 && scores[i] == 0.0)
            --i;
        indices[j] = i;
        scales[j] = 1.0 / std::sqrt(scores[i] * rs);
    }
    return LeverageScoreSketch(scores.size(), std::move(indices), std::move(scales), scores,
                               seed);
}

/// Gaussian-after-CountSketch composition S = G * Pi, applied right-to-left
/// so the dense product G * Pi is never formed.
class ComposedSketch {
  public:
    ComposedSketch(GaussianSketch outer, SparseEmbedding inner)
        : outer_(std::move(outer)), inner_(std::move(inner)) {
        require(outer_.input_dim() == inner_.sketch_dim(),
                "ComposedSketch: outer input dim " + std::to_string(outer_.input_dim()) +
                    " != inner sketch dim " + std::to_string(inner_.sketch_dim()));
    }

    std::size_t input_dim() const { return inner_.input_dim(); }
    std::size_t sketch_dim() const { return outer_.sketch_dim(); }
    std::size_t inner_dim() const { return inner_.sketch_dim(); }
    const GaussianSketch &outer() const { return outer_; }
    const SparseEmbedding &inner() const { return inner_; }

    /// G * (Pi * A); cost O(nnz(A) + sketch_dim * inner_dim * cols). Only the
    /// Pi stage reads A, so the touch counter advances by nnz(A).
    DenseMatrix apply_left(const DenseMatrix &a) const {
        DenseMatrix mid = inner_.apply_left(a);
        return matmul(outer_.entries(), mid);
    }

    DenseMatrix apply_left(const SparseMatrix &a) const {
        DenseMatrix mid = inner_.apply_left(a);
        return matmul(outer_.entries(), mid);
    }

    DenseMatrix apply_left(const MatrixAny &a) const {
        return std::visit([&](const auto &m) { return apply_left(m); }, a);
    }

    DenseMatrix apply_right(const DenseMatrix &a) const {
        DenseMatrix mid = inner_.apply_right(a);
        DenseMatrix out(mid.rows(), outer_.sketch_dim());
        detail::map_of(out).noalias() =
            detail::map_of(mid) * detail::map_of(outer_.entries()).transpose();
        return out;
    }

  private:
    GaussianSketch outer_;
    SparseEmbedding inner_;
};

/// Identity operator; lets the sketched solver reproduce the exact one.
class IdentitySketch {
  public:
    explicit IdentitySketch(std::size_t dim) : dim_(dim) {}

    std::size_t input_dim() const { return dim_; }
    std::size_t sketch_dim() const { return dim_; }

    DenseMatrix apply_left(const DenseMatrix &a) const {
        require(a.rows() == dim_, "IdentitySketch::apply_left: dimension mismatch");
        count_entry_touches(a.size());
        return a;
    }

    DenseMatrix apply_left(const SparseMatrix &a) const {
        require(a.rows() == dim_, "IdentitySketch::apply_left: dimension mismatch");
        count_entry_touches(a.nnz());
        return a.to_dense();
    }

    DenseMatrix apply_left(const MatrixAny &a) const {
        return std::visit([&](const auto &m) { return apply_left(m); }, a);
    }

    DenseMatrix apply_right(const DenseMatrix &a) const {
        require(a.cols() == dim_, "IdentitySketch::apply_right: dimension mismatch");
        count_entry_touches(a.size());
        return a;
    }

  private:
    std::size_t dim_;
};

/// Any of the supported left/right sketching operators.
using SketchOperator =
    std::variant<SparseEmbedding, GaussianSketch, LeverageScoreSketch, ComposedSketch,
                 IdentitySketch>;

inline std::size_t input_dim(const SketchOperator &s) {
    return std::visit([](const auto &op) { return op.input_dim(); }, s);
}

inline std::size_t sketch_dim(const SketchOperator &s) {
    return std::visit([](const auto &op) { return op.sketch_dim(); }, s);
}

inline DenseMatrix apply_left(const SketchOperator &s, const MatrixAny &a) {
    return std::visit([&](const auto &op) { return op.apply_left(a); }, s);
}

inline DenseMatrix apply_left(const SketchOperator &s, const DenseMatrix &a) {
    return std::visit([&](const auto &op) { return op.apply_left(a); }, s);
}

inline DenseMatrix apply_right(const SketchOperator &s, const DenseMatrix &a) {
    return std::visit([&](const auto &op) { return op.apply_right(a); }, s);
}

// =============================================================================
// Dimension planning
// =============================================================================

/// Everything a sketched solve needs beyond the problem itself. epsilon is the
/// target relative error; epsilon0 is the embedding distortion the pipelines
/// are built around (carried for reporting; the dimension formulas already
/// assume 1/2). delta is a failure-probability target used only in reports,
/// never to size sketches. The dimension constants scale the asymptotic rates
/// into concrete sizes.
struct SketchPlan {
    double epsilon = 0.25;
    double epsilon0 = 0.5;
    double delta = 0.1;
    double c_embed = 4.0;
    double c_prod = 4.0;
    double c_log = 2.0;
    std::uint64_t seed = 0;

    void validate() const {
        require(epsilon > 0.0 && epsilon < 1.0, "SketchPlan: epsilon must lie in (0,1)");
        require(epsilon0 > 0.0 && epsilon0 < 1.0, "SketchPlan: epsilon0 must lie in (0,1)");
        require(c_embed >= 1.0 && c_prod >= 1.0 && c_log >= 1.0,
                "SketchPlan: dimension constants must be >= 1");
    }
};

enum class SketchMethod { sparse_gaussian, leverage };

/// Sketch dimensions for one solve. t / t_prime are the CountSketch stage
/// sizes (zero for the leverage method, which has no inner stage).
struct PlanDims {
    std::size_t s_c = 0;
    std::size_t s_r = 0;
    std::size_t t = 0;
    std::size_t t_prime = 0;
};

/// Concrete dimensions from the asymptotic rates:
///   sparse+gaussian:  t = ceil(c_embed*(c/eps + c^2)),  s_c = ceil(c_prod*c/eps)
///   leverage:         s_c = ceil(c_prod*c/eps + c_log*c*ln(c+1))
/// and symmetrically in r. Sketch sizes are clamped to c+1 (r+1) from below so
/// the sketched factors can keep full rank.
inline PlanDims plan_dims(const SketchPlan &plan, std::size_t c, std::size_t r,
                          SketchMethod method) {
    plan.validate();
    require(c >= 1 && r >= 1, "plan_dims: factor ranks must be >= 1");
    const double cd = static_cast<double>(c);
    const double rd = static_cast<double>(r);
    PlanDims dims;
    if (method == SketchMethod::sparse_gaussian) {
        dims.t = static_cast<std::size_t>(
            std::ceil(plan.c_embed * (cd / plan.epsilon + cd * cd)));
        dims.t_prime = static_cast<std::size_t>(
            std::ceil(plan.c_embed * (rd / plan.epsilon + rd * rd)));
        dims.s_c = static_cast<std::size_t>(std::ceil(plan.c_prod * cd / plan.epsilon));
        dims.s_r = static_cast<std::size_t>(std::ceil(plan.c_prod * rd / plan.epsilon));
        dims.t = std::max(dims.t, c + 1);
        dims.t_prime = std::max(dims.t_prime, r + 1);
    } else {
        dims.s_c = static_cast<std::size_t>(
            std::ceil(plan.c_prod * cd / plan.epsilon + plan.c_log * cd * std::log(cd + 1.0)));
        dims.s_r = static_cast<std::size_t>(
            std::ceil(plan.c_prod * rd / plan.epsilon + plan.c_log * rd * std::log(rd + 1.0)));
    }
    dims.s_c = std::max(dims.s_c, c + 1);
    dims.s_r = std::max(dims.s_r, r + 1);
    return dims;
}

} // namespace gma
