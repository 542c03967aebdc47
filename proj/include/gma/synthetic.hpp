#pragma once

#include <unordered_set>

#include "gma/solver.hpp"

namespace gma {

/// Shape and noise level of a generated instance. With sparse_density == 0 the
/// data matrix is dense A = M*X0*N + noise scaled so that
/// ||noise|| = eta * ||M*X0*N||; with sparse_density in (0, 1] A is instead a
/// uniformly sparse matrix with that fraction of cells stored.
struct SyntheticSpec {
    std::size_t m = 100;
    std::size_t n = 100;
    std::size_t c = 4;
    std::size_t r = 4;
    double eta = 0.5;
    double sparse_density = 0.0;

    void validate() const {
        require(m >= 1 && n >= 1 && c >= 1 && r >= 1, "SyntheticSpec: counts must be >= 1");
        require(c <= m && r <= n, "SyntheticSpec: requires c <= m and r <= n");
        require(eta >= 0.0, "SyntheticSpec: eta must be nonnegative");
        require(sparse_density >= 0.0 && sparse_density <= 1.0,
                "SyntheticSpec: density must lie in [0, 1]");
    }
};

namespace detail {

inline DenseMatrix random_normal(std::size_t rows, std::size_t cols, CounterRng &rng) {
    DenseMatrix out(rows, cols);
    for (std::size_t k = 0; k < out.size(); ++k)
        out.data()[k] = rng.normal();
    return out;
}

} // namespace detail

/// Deterministic given (spec, seed). The factors M, N and the planted X0 have
/// i.i.d. standard normal entries.
inline GmaProblem generate_synthetic(const SyntheticSpec &spec, std::uint64_t seed) {
    spec.validate();
    CounterRng rng_m(CounterRng::derive(seed, 1));
    CounterRng rng_n(CounterRng::derive(seed, 2));
    CounterRng rng_x(CounterRng::derive(seed, 3));
    CounterRng rng_noise(CounterRng::derive(seed, 4));

    DenseMatrix m = detail::random_normal(spec.m, spec.c, rng_m);
    DenseMatrix n = detail::random_normal(spec.r, spec.n, rng_n);

    if (spec.sparse_density > 0.0) {
        const std::size_t target =
            std::max<std::size_t>(1, static_cast<std::size_t>(
                std::llround(spec.sparse_density * static_cast<double>(spec.m) *
                             static_cast<double>(spec.n))));
        std::unordered_set<std::uint64_t> taken;
        taken.reserve(target * 2);
        std::vector<Triplet> entries;
        entries.reserve(target);
        while (entries.size() < target) {
            std::size_t i = rng_noise.index(spec.m);
            std::size_t j = rng_noise.index(spec.n);
            std::uint64_t cell = static_cast<std::uint64_t>(i) * spec.n + j;
            if (!taken.insert(cell).second)
                continue;
            double v = rng_x.normal();
            if (v == 0.0)
                v = 1.0;
            entries.push_back({i, j, v});
        }
        return GmaProblem(SparseMatrix(spec.m, spec.n, std::move(entries)), std::move(m),
                          std::move(n));
    }

    DenseMatrix x0 = detail::random_normal(spec.c, spec.r, rng_x);
    DenseMatrix base = matmul(matmul(m, x0), n);
    if (spec.eta == 0.0)
        return GmaProblem(std::move(base), std::move(m), std::move(n));

    DenseMatrix noise = detail::random_normal(spec.m, spec.n, rng_noise);
    const double scale = spec.eta * fro_norm(base) / fro_norm(noise);
    for (std::size_t k = 0; k < base.size(); ++k)
        base.data()[k] += scale * noise.data()[k];
    return GmaProblem(std::move(base), std::move(m), std::move(n));
}

} // namespace gma
