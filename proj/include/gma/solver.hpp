#pragma once

#include <chrono>
#include <limits>
#include <string>

#include "gma/sketch.hpp"

namespace gma {

/// min_X ||A - M*X*N||_F with A m x n, M m x c, N r x n.
struct GmaProblem {
    MatrixAny a;
    DenseMatrix m;
    DenseMatrix n;

    GmaProblem(MatrixAny a_, DenseMatrix m_, DenseMatrix n_)
        : a(std::move(a_)), m(std::move(m_)), n(std::move(n_)) {
        require(m.rows() == rows_of(a),
                "GmaProblem: M has " + std::to_string(m.rows()) + " rows, A has " +
                    std::to_string(rows_of(a)));
        require(n.cols() == cols_of(a),
                "GmaProblem: N has " + std::to_string(n.cols()) + " cols, A has " +
                    std::to_string(cols_of(a)));
        require(m.cols() <= m.rows(), "GmaProblem: requires c <= m");
        require(n.rows() <= n.cols(), "GmaProblem: requires r <= n");
    }

    std::size_t rows() const { return rows_of(a); }
    std::size_t cols() const { return cols_of(a); }
    std::size_t c() const { return m.cols(); }
    std::size_t r() const { return n.rows(); }
};

enum class Method { exact, sparse_gaussian, leverage, sketched };

inline const char *to_string(Method m) {
    switch (m) {
    case Method::exact: return "exact";
    case Method::sparse_gaussian: return "sparse-gaussian";
    case Method::leverage: return "leverage";
    case Method::sketched: return "sketched";
    }
    return "unknown";
}

/// Per-stage wall times in seconds.
struct StageTimes {
    double build = 0.0;
    double apply = 0.0;
    double pinv = 0.0;
    double multiply = 0.0;
    double total = 0.0;
};

struct GmaSolution {
    DenseMatrix x;
    double residual = 0.0;
    Method method = Method::exact;
    bool symmetrized = false;
    PlanDims dims_used;
    StageTimes wall_times;
    std::uint64_t seed = 0;
    std::uint64_t entries_of_a_touched = 0;
    std::string warning; // set when a sketched factor lost rank
};

namespace detail {

class StageClock {
  public:
    StageClock() : start_(std::chrono::steady_clock::now()), last_(start_) {}

    double lap() {
        auto now = std::chrono::steady_clock::now();
        double dt = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return dt;
    }

    double total() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
    std::chrono::steady_clock::time_point last_;
};

} // namespace detail

/// X* = pinv(M) * A * pinv(N), associated in whichever order costs less given
/// the actual dimensions (and nnz, when A is sparse).
inline GmaSolution solve_exact(const GmaProblem &p) {
    detail::StageClock clock;
    GmaSolution sol;
    sol.method = Method::exact;

    SvdFactors fm = svd(p.m);
    SvdFactors fn = svd(p.n);
    DenseMatrix m_pinv = pinv(fm);
    DenseMatrix n_pinv = pinv(fn);
    sol.wall_times.pinv = clock.lap();

    const double nnz_a = static_cast<double>(entry_count(p.a));
    const double c = static_cast<double>(p.c());
    const double r = static_cast<double>(p.r());
    const double mm = static_cast<double>(p.rows());
    const double nn = static_cast<double>(p.cols());
    const double cost_left_first = nnz_a * c + c * nn * r;
    const double cost_right_first = nnz_a * r + mm * c * r;
    if (cost_left_first <= cost_right_first)
        sol.x = matmul(matmul(m_pinv, p.a), n_pinv);
    else
        sol.x = matmul(m_pinv, matmul(p.a, n_pinv));
    sol.wall_times.multiply = clock.lap();

    sol.entries_of_a_touched = entry_count(p.a);
    sol.residual = residual_norm(p.a, p.m, sol.x, p.n);
    sol.wall_times.total = clock.total();
    return sol;
}

/// Sketched solve X^ = pinv(S_M*M) * (S_M*A*S_N^T) * pinv(N*S_N^T). When both
/// operators sample rows (leverage family), the core S_M*A*S_N^T is assembled
/// from exactly s_c * s_r random accesses into A. Rank loss in a sketched
/// factor is recorded as a warning and the pseudoinverse proceeds.
inline GmaSolution solve_sketched(const GmaProblem &p, const SketchOperator &s_m,
                                  const SketchOperator &s_n) {
    require(input_dim(s_m) == p.rows(), "solve_sketched: S_M expects " +
                                            std::to_string(input_dim(s_m)) +
                                            " rows, A has " + std::to_string(p.rows()));
    require(input_dim(s_n) == p.cols(), "solve_sketched: S_N expects " +
                                            std::to_string(input_dim(s_n)) +
                                            " cols, A has " + std::to_string(p.cols()));
    detail::StageClock clock;
    GmaSolution sol;
    sol.method = Method::sketched;
    sol.dims_used.s_c = sketch_dim(s_m);
    sol.dims_used.s_r = sketch_dim(s_n);

    DenseMatrix sketched_m = apply_left(s_m, p.m);      // s_c x c
    DenseMatrix n_sketched = apply_right(s_n, p.n);     // r x s_r

    DenseMatrix core; // s_c x s_r
    const auto *lev_m = std::get_if<LeverageScoreSketch>(&s_m);
    const auto *lev_n = std::get_if<LeverageScoreSketch>(&s_n);
    const std::uint64_t touches_before = entry_touches();
    if (lev_m && lev_n) {
        // (S_M A S_N^T)[i][j] = scale_i * scale_j * A[idx_i, idx_j]
        core = DenseMatrix(lev_m->sample_count(), lev_n->sample_count());
        if (std::holds_alternative<SparseMatrix>(p.a)) {
            const SparseMatrix &a = std::get<SparseMatrix>(p.a);
            for (std::size_t i = 0; i < lev_m->sample_count(); ++i)
                for (std::size_t j = 0; j < lev_n->sample_count(); ++j) {
                    core(i, j) = lev_m->scales()[i] * lev_n->scales()[j] *
                                 a.at(lev_m->indices()[i], lev_n->indices()[j]);
                    count_entry_touches(1);
                }
        } else {
            const DenseMatrix &a = std::get<DenseMatrix>(p.a);
            for (std::size_t i = 0; i < lev_m->sample_count(); ++i)
                for (std::size_t j = 0; j < lev_n->sample_count(); ++j) {
                    core(i, j) = lev_m->scales()[i] * lev_n->scales()[j] *
                                 a(lev_m->indices()[i], lev_n->indices()[j]);
                    count_entry_touches(1);
                }
        }
        sol.entries_of_a_touched = entry_touches() - touches_before;
    } else {
        DenseMatrix sketched_a = apply_left(s_m, p.a); // s_c x n, the only read of A
        sol.entries_of_a_touched = entry_touches() - touches_before;
        core = apply_right(s_n, sketched_a);
    }
    sol.wall_times.apply = clock.lap();

    SvdFactors f_left = svd(sketched_m);
    SvdFactors f_right = svd(n_sketched);
    if (f_left.rank < std::min(sketched_m.rows(), sketched_m.cols()))
        sol.warning = "S_M*M rank " + std::to_string(f_left.rank) + " below full " +
                      shape_str(sketched_m.rows(), sketched_m.cols()) +
                      "; (1+eps) guarantee not covered";
    if (f_right.rank < std::min(n_sketched.rows(), n_sketched.cols())) {
        if (!sol.warning.empty())
            sol.warning += "; ";
        sol.warning += "N*S_N^T rank " + std::to_string(f_right.rank) + " below full " +
                       shape_str(n_sketched.rows(), n_sketched.cols()) +
                       "; (1+eps) guarantee not covered";
    }
    DenseMatrix left_pinv = pinv(f_left);   // c x s_c
    DenseMatrix right_pinv = pinv(f_right); // s_r x r
    sol.wall_times.pinv = clock.lap();

    const double sc = static_cast<double>(core.rows());
    const double sr = static_cast<double>(core.cols());
    const double c = static_cast<double>(p.c());
    const double r = static_cast<double>(p.r());
    if (c * sc * sr + c * sr * r <= sc * sr * r + c * sc * r)
        sol.x = matmul(matmul(left_pinv, core), right_pinv);
    else
        sol.x = matmul(left_pinv, matmul(core, right_pinv));
    sol.wall_times.multiply = clock.lap();

    sol.residual = residual_norm(p.a, p.m, sol.x, p.n);
    sol.wall_times.total = clock.total();
    return sol;
}

/// CountSketch-then-Gaussian pipeline at the dimensions plan_dims picks.
inline GmaSolution solve_sparse_gaussian(const GmaProblem &p, const SketchPlan &plan) {
    detail::StageClock clock;
    PlanDims dims = plan_dims(plan, p.c(), p.r(), SketchMethod::sparse_gaussian);

    SparseEmbedding pi_m =
        build_sparse_embedding(p.rows(), dims.t, CounterRng::derive(plan.seed, 0x11));
    GaussianSketch g_m = build_gaussian(dims.t, dims.s_c, CounterRng::derive(plan.seed, 0x12));
    SparseEmbedding pi_n =
        build_sparse_embedding(p.cols(), dims.t_prime, CounterRng::derive(plan.seed, 0x13));
    GaussianSketch g_n =
        build_gaussian(dims.t_prime, dims.s_r, CounterRng::derive(plan.seed, 0x14));
    double build_time = clock.lap();

    GmaSolution sol = solve_sketched(p, ComposedSketch(std::move(g_m), std::move(pi_m)),
                                     ComposedSketch(std::move(g_n), std::move(pi_n)));
    sol.method = Method::sparse_gaussian;
    sol.seed = plan.seed;
    sol.dims_used = dims;
    sol.wall_times.build = build_time;
    sol.wall_times.total += build_time;
    return sol;
}

/// Leverage-score pipeline: samples rows of M and rows of N^T by their exact
/// leverage scores; the sketched core reads only s_c * s_r entries of A.
inline GmaSolution solve_leverage(const GmaProblem &p, const SketchPlan &plan) {
    detail::StageClock clock;
    PlanDims dims = plan_dims(plan, p.c(), p.r(), SketchMethod::leverage);

    std::vector<double> scores_m = compute_leverage_scores(p.m);
    std::vector<double> scores_n = compute_leverage_scores(p.n.transposed());
    LeverageScoreSketch s_m =
        build_leverage_sketch(scores_m, dims.s_c, CounterRng::derive(plan.seed, 0x21));
    LeverageScoreSketch s_n =
        build_leverage_sketch(scores_n, dims.s_r, CounterRng::derive(plan.seed, 0x22));
    double build_time = clock.lap();

    GmaSolution sol = solve_sketched(p, std::move(s_m), std::move(s_n));
    sol.method = Method::leverage;
    sol.seed = plan.seed;
    sol.dims_used = dims;
    sol.wall_times.build = build_time;
    sol.wall_times.total += build_time;
    return sol;
}

/// Symmetric variant: A symmetric, N = M^T, two independently drawn sketches
/// for M. The estimate is symmetrized as (X^ + X^T)/2, which is exact in IEEE
/// arithmetic, so the result is bitwise symmetric.
inline GmaSolution solve_symmetric(const DenseMatrix &a, const DenseMatrix &m,
                                   const SketchPlan &plan,
                                   SketchMethod method = SketchMethod::sparse_gaussian) {
    require(a.rows() == a.cols(), "solve_symmetric: A must be square");
    double asym = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
    require(asym <= 1e-10, "solve_symmetric: A is not symmetric (max |A-A^T| = " +
                               std::to_string(asym) + ")");

    detail::StageClock clock;
    GmaProblem p(a, m, m.transposed());
    const std::size_t c = p.c();
    PlanDims dims;
    GmaSolution sol;
    if (method == SketchMethod::sparse_gaussian) {
        dims = plan_dims(plan, c, c, SketchMethod::sparse_gaussian);
        SparseEmbedding pi_1 =
            build_sparse_embedding(p.rows(), dims.t, CounterRng::derive(plan.seed, 0x31));
        GaussianSketch g_1 =
            build_gaussian(dims.t, dims.s_c, CounterRng::derive(plan.seed, 0x32));
        SparseEmbedding pi_2 =
            build_sparse_embedding(p.cols(), dims.t_prime,
                                   CounterRng::derive(plan.seed, 0x33));
        GaussianSketch g_2 =
            build_gaussian(dims.t_prime, dims.s_r, CounterRng::derive(plan.seed, 0x34));
        double build_time = clock.lap();
        sol = solve_sketched(p, ComposedSketch(std::move(g_1), std::move(pi_1)),
                             ComposedSketch(std::move(g_2), std::move(pi_2)));
        sol.method = Method::sparse_gaussian;
        sol.wall_times.build = build_time;
    } else {
        dims = plan_dims(plan, c, c, SketchMethod::leverage);
        std::vector<double> scores = compute_leverage_scores(m);
        LeverageScoreSketch s_1 =
            build_leverage_sketch(scores, dims.s_c, CounterRng::derive(plan.seed, 0x35));
        LeverageScoreSketch s_2 =
            build_leverage_sketch(scores, dims.s_r, CounterRng::derive(plan.seed, 0x36));
        double build_time = clock.lap();
        sol = solve_sketched(p, std::move(s_1), std::move(s_2));
        sol.method = Method::leverage;
        sol.wall_times.build = build_time;
    }

    // (X^ + X^T)/2: addition commutes exactly, so X(i,j) == X(j,i) bitwise
    DenseMatrix sym(c, c);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j)
            sym(i, j) = 0.5 * (sol.x(i, j) + sol.x(j, i));
    sol.x = std::move(sym);
    sol.symmetrized = true;
    sol.seed = plan.seed;
    sol.dims_used = dims;
    sol.residual = residual_norm(p.a, p.m, sol.x, p.n);
    sol.wall_times.total = clock.total();
    return sol;
}

/// Residual floor: below it the exact residual is numerical noise and ratios
/// are meaningless.
inline constexpr double kRatioFloorRel = 1e-12;

/// sol.residual / exact residual, with the floor rule: when the exact residual
/// is at the noise floor, a sketched residual also at floor scores 1, anything
/// else scores +inf.
inline double error_ratio(double exact_residual, double sketched_residual, double a_fro) {
    if (exact_residual <= kRatioFloorRel * a_fro) {
        if (sketched_residual <= 1e-10 * a_fro)
            return 1.0;
        return std::numeric_limits<double>::infinity();
    }
    return sketched_residual / exact_residual;
}

inline double error_ratio(const GmaProblem &p, const GmaSolution &sol) {
    GmaSolution exact = solve_exact(p);
    return error_ratio(exact.residual, sol.residual, fro_norm(p.a));
}

} // namespace gma
