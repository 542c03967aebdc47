#pragma once

#include <string>
#include <vector>

#include "gma/solver.hpp"
#include "gma/synthetic.hpp"

namespace gma {

// =============================================================================
// Statistical certificates. Each checker runs seeded independent trials of a
// single distributional property and reports the pass count against a required
// pass fraction. The pass fractions (0.95 for embedding, 0.9 elsewhere) are
// conventions standing in for "with high probability"; they are not derived
// from tail bounds. Checkers only call public operations.
// =============================================================================

struct PropertyReport {
    std::string property;
    std::size_t trials = 0;
    std::size_t passes = 0;
    double threshold = 0.9;       // required pass fraction
    double worst_violation = 0.0; // largest observed overshoot past the bound
    std::uint64_t seed = 0;

    bool verdict() const {
        return static_cast<double>(passes) >=
               threshold * static_cast<double>(trials) - 1e-12;
    }
};

enum class SketchFamily { sparse_embedding, gaussian, leverage, composed };

inline const char *to_string(SketchFamily f) {
    switch (f) {
    case SketchFamily::sparse_embedding: return "sparse-embedding";
    case SketchFamily::gaussian: return "gaussian";
    case SketchFamily::leverage: return "leverage";
    case SketchFamily::composed: return "composed";
    }
    return "unknown";
}

// Certification constants scaling the per-family embedding rates
// (d^2/eps^2, d/eps^2, d*log(d+1)/eps^2). The Gaussian family needs 8, not 4:
// at s = 4d/eps^2 the top singular value of S*U concentrates at
// 1 + sqrt(d/s), which sits above sqrt(1+eps) for d=8, eps=1/2, so the
// certificate cannot clear a 0.95 pass rate no matter the seed. Constant 8
// puts the concentration point at 1.18 against a 1.22 bound, which passes
// with margin. The sparse and leverage families are comfortable at 4.
inline constexpr double kEmbedConstSparse = 4.0;
inline constexpr double kEmbedConstGaussian = 8.0;
inline constexpr double kEmbedConstLeverage = 4.0;

/// Sketch dimension certifying an epsilon-embedding of a d-dimensional
/// subspace for the given family, at the given rate constant.
inline std::size_t embedding_dim(SketchFamily family, std::size_t d, double epsilon,
                                 double constant) {
    const double dd = static_cast<double>(d);
    double s = 0.0;
    switch (family) {
    case SketchFamily::sparse_embedding:
        s = constant * dd * dd / (epsilon * epsilon);
        break;
    case SketchFamily::gaussian:
    case SketchFamily::composed: // outer Gaussian stage size
        s = constant * dd / (epsilon * epsilon);
        break;
    case SketchFamily::leverage:
        s = constant * dd * std::log(dd + 1.0) / (epsilon * epsilon);
        break;
    }
    return std::max<std::size_t>(d + 1, static_cast<std::size_t>(std::ceil(s)));
}

inline std::size_t embedding_dim(SketchFamily family, std::size_t d, double epsilon) {
    switch (family) {
    case SketchFamily::sparse_embedding:
        return embedding_dim(family, d, epsilon, kEmbedConstSparse);
    case SketchFamily::gaussian:
    case SketchFamily::composed:
        return embedding_dim(family, d, epsilon, kEmbedConstGaussian);
    case SketchFamily::leverage:
        return embedding_dim(family, d, epsilon, kEmbedConstLeverage);
    }
    return d + 1;
}

namespace detail {

/// Random m x d matrix with orthonormal columns (thin Q of a Gaussian).
inline DenseMatrix random_orthonormal(std::size_t m, std::size_t d, CounterRng &rng) {
    require(d <= m, "random_orthonormal: d must not exceed m");
    Eigen::MatrixXd g(m, d);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j)
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(
                                                static_cast<Eigen::Index>(m),
                                                static_cast<Eigen::Index>(d));
    DenseMatrix out(m, d);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out(i, j) = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

inline SketchOperator build_family(SketchFamily family, std::size_t input_dim, std::size_t s,
                                   const DenseMatrix &target, std::uint64_t seed) {
    switch (family) {
    case SketchFamily::sparse_embedding:
        return build_sparse_embedding(input_dim, s, seed);
    case SketchFamily::gaussian:
        return build_gaussian(input_dim, s, seed);
    case SketchFamily::leverage: {
        auto scores = compute_leverage_scores(target);
        return build_leverage_sketch(scores, s, seed);
    }
    case SketchFamily::composed: {
        // inner CountSketch sized as an epsilon-embedding in its own right is
        // the caller's job; here it rides along with the outer dimension
        throw std::invalid_argument("build_family: composed needs explicit stages");
    }
    }
    throw std::invalid_argument("build_family: unknown family");
}

} // namespace detail

/// Embedding certificate: all singular values of S*U inside
/// [sqrt(1-eps), sqrt(1+eps)] for random orthonormal U. The composed family is
/// checked against the doubled-distortion interval
/// [sqrt(1-2eps-eps^2), sqrt(1+2eps+eps^2)], which is what composing two
/// epsilon-embeddings provably gives; its inner stage is sized at the sparse
/// family's own certification dimension.
inline PropertyReport check_embedding(SketchFamily family, std::size_t m, std::size_t d,
                                      double epsilon, std::size_t s, std::size_t trials,
                                      std::uint64_t seed, double threshold = 0.95) {
    require(d <= s && s >= 1, "check_embedding: need d <= s");
    require(d <= m, "check_embedding: need d <= m");
    PropertyReport report;
    report.property = std::string("embedding/") + to_string(family);
    report.trials = trials;
    report.threshold = threshold;
    report.seed = seed;

    double lo, hi;
    if (family == SketchFamily::composed) {
        lo = std::sqrt(std::max(0.0, 1.0 - 2.0 * epsilon - epsilon * epsilon));
        hi = std::sqrt(1.0 + 2.0 * epsilon + epsilon * epsilon);
    } else {
        lo = std::sqrt(1.0 - epsilon);
        hi = std::sqrt(1.0 + epsilon);
    }

    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = CounterRng::derive(seed, t);
        CounterRng rng(trial_seed, 0xE0);
        DenseMatrix u = detail::random_orthonormal(m, d, rng);
        DenseMatrix su;
        if (family == SketchFamily::composed) {
            const std::size_t t_inner =
                embedding_dim(SketchFamily::sparse_embedding, d, epsilon);
            SparseEmbedding inner =
                build_sparse_embedding(m, t_inner, CounterRng::derive(trial_seed, 1));
            GaussianSketch outer =
                build_gaussian(t_inner, s, CounterRng::derive(trial_seed, 2));
            su = ComposedSketch(std::move(outer), std::move(inner)).apply_left(u);
        } else {
            SketchOperator op =
                detail::build_family(family, m, s, u, CounterRng::derive(trial_seed, 1));
            su = apply_left(op, u);
        }
        SvdFactors f = svd(su);
        const double smax = f.rank > 0 ? f.sigma.front() : 0.0;
        const double smin = f.rank == d ? f.sigma.back() : 0.0;
        const double overshoot = std::max({0.0, smax - hi, lo - smin});
        report.worst_violation = std::max(report.worst_violation, overshoot);
        if (overshoot == 0.0)
            ++report.passes;
    }
    return report;
}

/// Product certificate: ||A^T S^T S B - A^T B||_F <= eps ||A||_F ||B||_F on
/// independent Gaussian A (m x k1) and B (m x k2). The leverage family is
/// checked in its conditioned setting: A is replaced by an orthonormal basis
/// of its own column space and the sketch samples by that basis's scores.
/// The composed family is held to the looser 5*eps bound.
inline PropertyReport check_product(SketchFamily family, std::size_t m, std::size_t k1,
                                    std::size_t k2, double epsilon, std::size_t s,
                                    std::size_t trials, std::uint64_t seed,
                                    double threshold = 0.9) {
    PropertyReport report;
    report.property = std::string("product/") + to_string(family);
    report.trials = trials;
    report.threshold = threshold;
    report.seed = seed;
    const double bound_scale = family == SketchFamily::composed ? 5.0 : 1.0;

    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = CounterRng::derive(seed, t);
        CounterRng rng(trial_seed, 0xE1);
        DenseMatrix a = detail::random_normal(m, k1, rng);
        DenseMatrix b = detail::random_normal(m, k2, rng);
        if (family == SketchFamily::leverage)
            a = detail::random_orthonormal(m, k1, rng);

        DenseMatrix sa, sb;
        if (family == SketchFamily::composed) {
            SparseEmbedding inner =
                build_sparse_embedding(m, s, CounterRng::derive(trial_seed, 1));
            GaussianSketch outer = build_gaussian(s, s, CounterRng::derive(trial_seed, 2));
            ComposedSketch op(std::move(outer), std::move(inner));
            sa = op.apply_left(a);
            sb = op.apply_left(b);
        } else {
            SketchOperator op =
                detail::build_family(family, m, s, a, CounterRng::derive(trial_seed, 1));
            sa = apply_left(op, a);
            sb = apply_left(op, b);
        }

        DenseMatrix lhs = matmul(sa.transposed(), sb);
        DenseMatrix rhs = matmul(a.transposed(), b);
        double err = 0.0;
        for (std::size_t k = 0; k < lhs.size(); ++k) {
            const double d = lhs.data()[k] - rhs.data()[k];
            err += d * d;
        }
        err = std::sqrt(err);
        const double bound = bound_scale * epsilon * fro_norm(a) * fro_norm(b);
        if (err <= bound)
            ++report.passes;
        else if (bound > 0.0)
            report.worst_violation = std::max(report.worst_violation, err / bound - 1.0);
    }
    return report;
}

/// Frobenius-preservation certificate: ||S A||_F^2 = (1 +- eps) ||A||_F^2.
inline PropertyReport check_fro_norm(SketchFamily family, std::size_t m, std::size_t k,
                                     double epsilon, std::size_t s, std::size_t trials,
                                     std::uint64_t seed, double threshold = 0.9) {
    PropertyReport report;
    report.property = std::string("fro-norm/") + to_string(family);
    report.trials = trials;
    report.threshold = threshold;
    report.seed = seed;

    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = CounterRng::derive(seed, t);
        CounterRng rng(trial_seed, 0xE2);
        DenseMatrix a = detail::random_normal(m, k, rng);
        SketchOperator op =
            detail::build_family(family, m, s, a, CounterRng::derive(trial_seed, 1));
        DenseMatrix sa = apply_left(op, a);
        const double before = fro_norm(a);
        const double after = fro_norm(sa);
        if (before == 0.0) { // zero input: preserved exactly
            if (after == 0.0)
                ++report.passes;
            continue;
        }
        const double ratio = (after * after) / (before * before);
        if (ratio >= 1.0 - epsilon && ratio <= 1.0 + epsilon)
            ++report.passes;
        else
            report.worst_violation =
                std::max(report.worst_violation, std::abs(ratio - 1.0) - epsilon);
    }
    return report;
}

enum class RatioMethod { identity_control, sparse_gaussian, leverage };

inline const char *to_string(RatioMethod m) {
    switch (m) {
    case RatioMethod::identity_control: return "identity-control";
    case RatioMethod::sparse_gaussian: return "sparse-gaussian";
    case RatioMethod::leverage: return "leverage";
    }
    return "unknown";
}

/// End-to-end certificate against the exact oracle:
/// error_ratio <= 1 + eps per trial on a synthetic instance family.
inline PropertyReport check_gma_ratio(const SyntheticSpec &instances, RatioMethod method,
                                      const SketchPlan &plan, std::size_t trials,
                                      std::uint64_t seed, double threshold = 0.9) {
    PropertyReport report;
    report.property = std::string("gma-ratio/") + to_string(method);
    report.trials = trials;
    report.threshold = threshold;
    report.seed = seed;

    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = CounterRng::derive(seed, t);
        GmaProblem problem = generate_synthetic(instances, trial_seed);
        GmaSolution exact = solve_exact(problem);

        SketchPlan trial_plan = plan;
        trial_plan.seed = CounterRng::derive(trial_seed, 0xA0);
        GmaSolution sketched;
        switch (method) {
        case RatioMethod::identity_control:
            sketched = solve_sketched(problem, IdentitySketch(problem.rows()),
                                      IdentitySketch(problem.cols()));
            break;
        case RatioMethod::sparse_gaussian:
            sketched = solve_sparse_gaussian(problem, trial_plan);
            break;
        case RatioMethod::leverage:
            sketched = solve_leverage(problem, trial_plan);
            break;
        }
        const double ratio =
            error_ratio(exact.residual, sketched.residual, fro_norm(problem.a));
        if (ratio <= 1.0 + plan.epsilon)
            ++report.passes;
        else
            report.worst_violation =
                std::max(report.worst_violation, ratio - (1.0 + plan.epsilon));
    }
    return report;
}

/// The standard certification battery the CLI exposes: embedding, product and
/// Frobenius checks per family at their certification dimensions, plus small
/// end-to-end ratio checks for each solver pipeline.
inline std::vector<PropertyReport> default_verification_suite(std::size_t trials,
                                                              std::uint64_t seed,
                                                              double epsilon = 0.5) {
    std::vector<PropertyReport> reports;
    const std::size_t m = 2000;
    const std::size_t d = 8;

    for (SketchFamily f : {SketchFamily::sparse_embedding, SketchFamily::gaussian,
                           SketchFamily::leverage, SketchFamily::composed})
        reports.push_back(
            check_embedding(f, m, d, epsilon, embedding_dim(f, d, epsilon), trials,
                            CounterRng::derive(seed, 10 + static_cast<std::uint64_t>(f))));

    const std::size_t s_prod = static_cast<std::size_t>(
        std::ceil(4.0 / (epsilon * epsilon)));
    // composed rides on two c_prod-sized stages and is held to the 5-eps bound
    for (SketchFamily f : {SketchFamily::sparse_embedding, SketchFamily::gaussian,
                           SketchFamily::leverage, SketchFamily::composed})
        reports.push_back(check_product(f, 500, 6, 4, epsilon, s_prod, trials,
                                        CounterRng::derive(seed, 20 + static_cast<std::uint64_t>(f))));

    const std::size_t s_fro = static_cast<std::size_t>(std::ceil(8.0 / (epsilon * epsilon)));
    for (SketchFamily f : {SketchFamily::sparse_embedding, SketchFamily::gaussian})
        reports.push_back(check_fro_norm(f, 500, 6, epsilon, s_fro, trials,
                                         CounterRng::derive(seed, 30 + static_cast<std::uint64_t>(f))));

    SyntheticSpec instances;
    instances.m = 200;
    instances.n = 200;
    instances.c = 6;
    instances.r = 6;
    instances.eta = 0.5;
    SketchPlan plan;
    plan.epsilon = 0.25;
    const std::size_t ratio_trials = std::max<std::size_t>(10, trials / 4);
    for (RatioMethod method : {RatioMethod::identity_control, RatioMethod::sparse_gaussian,
                               RatioMethod::leverage})
        reports.push_back(check_gma_ratio(instances, method, plan, ratio_trials,
                                          CounterRng::derive(seed, 40 + static_cast<std::uint64_t>(method))));
    return reports;
}

} // namespace gma
