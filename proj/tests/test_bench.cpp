#include <gtest/gtest.h>

#include <sstream>

#include "gma/bench.hpp"

using namespace gma;

namespace {

BenchConfig small_config() {
    BenchConfig config;
    config.instances = {50, 45, 4, 3, 0.5, 0.0};
    config.epsilon = 0.25;
    config.methods = {Method::sparse_gaussian, Method::leverage};
    config.trials = 5;
    config.seed = 404;
    return config;
}

// strips the time_* columns (17..21) so byte-stability can be asserted
std::string strip_time_columns(const std::string &csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string cell;
        int idx = 0;
        while (std::getline(cells, cell, ',')) {
            if (idx < 17 || idx > 21)
                out << cell << ",";
            ++idx;
        }
        out << "\n";
    }
    return out.str();
}

} // namespace

TEST(GenerateSynthetic, NoiselessSystemIsConsistent) {
    SyntheticSpec spec{40, 35, 4, 3, 0.0, 0.0};
    GmaProblem p = generate_synthetic(spec, 1);
    GmaSolution sol = solve_exact(p);
    EXPECT_LE(sol.residual, 1e-8 * fro_norm(p.a));
}

TEST(GenerateSynthetic, DeterministicUnderSeed) {
    SyntheticSpec spec{30, 30, 3, 3, 0.5, 0.0};
    GmaProblem a = generate_synthetic(spec, 9);
    GmaProblem b = generate_synthetic(spec, 9);
    const DenseMatrix &da = std::get<DenseMatrix>(a.a);
    const DenseMatrix &db = std::get<DenseMatrix>(b.a);
    for (std::size_t k = 0; k < da.size(); ++k)
        ASSERT_EQ(da.data()[k], db.data()[k]);
}

TEST(GenerateSynthetic, NoiseLevelLandsInExpectedWindow) {
    SyntheticSpec spec{200, 180, 6, 6, 0.5, 0.0};
    GmaProblem p = generate_synthetic(spec, 21);
    GmaSolution sol = solve_exact(p);
    const double rel = sol.residual / fro_norm(p.a);
    EXPECT_GT(rel, 0.2);
    EXPECT_LT(rel, 0.6);
}

TEST(GenerateSynthetic, SparseModeHitsTargetDensity) {
    SyntheticSpec spec{100, 80, 4, 4, 0.0, 0.05};
    GmaProblem p = generate_synthetic(spec, 31);
    ASSERT_TRUE(std::holds_alternative<SparseMatrix>(p.a));
    const SparseMatrix &a = std::get<SparseMatrix>(p.a);
    EXPECT_EQ(a.nnz(), static_cast<std::size_t>(std::llround(0.05 * 100 * 80)));
}

TEST(GenerateSynthetic, RejectsBadShapes) {
    SyntheticSpec spec{3, 10, 5, 2, 0.5, 0.0}; // c > m
    EXPECT_THROW(generate_synthetic(spec, 1), std::invalid_argument);
}

TEST(RunBench, RowCountAndOrdering) {
    BenchConfig config = small_config();
    auto reports = run_bench(config);
    ASSERT_EQ(reports.size(), 10u); // trials * methods
    for (std::size_t t = 0; t < 5; ++t) {
        EXPECT_EQ(reports[2 * t].trial, t);
        EXPECT_EQ(reports[2 * t].method, Method::sparse_gaussian);
        EXPECT_EQ(reports[2 * t + 1].method, Method::leverage);
    }
}

TEST(RunBench, RatiosSaneAndLeverageCounterExact) {
    auto reports = run_bench(small_config());
    for (const TrialReport &r : reports) {
        EXPECT_GE(r.error_ratio, 1.0 - 1e-8);
        if (r.method == Method::leverage)
            EXPECT_EQ(r.entries_of_a_touched,
                      static_cast<std::uint64_t>(r.dims.s_c) * r.dims.s_r);
    }
}

TEST(RunBench, ThreadedMatchesSerial) {
    BenchConfig serial = small_config();
    BenchConfig threaded = small_config();
    threaded.threads = 4;
    auto a = run_bench(serial);
    auto b = run_bench(threaded);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].error_ratio, b[i].error_ratio);
        EXPECT_EQ(a[i].sketched_residual, b[i].sketched_residual);
        EXPECT_EQ(a[i].entries_of_a_touched, b[i].entries_of_a_touched);
    }
}

TEST(WriteCsv, StableOutsideTimeColumns) {
    BenchConfig config = small_config();
    std::ostringstream first, second;
    write_csv(first, config, run_bench(config));
    write_csv(second, config, run_bench(config));
    EXPECT_EQ(strip_time_columns(first.str()), strip_time_columns(second.str()));

    // header plus one row per (trial, method)
    std::string csv = first.str();
    std::size_t lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
    EXPECT_EQ(lines, 11u);
    EXPECT_EQ(csv.substr(0, 5), "trial");
}

TEST(Summaries, MedianAndTouchMeans) {
    BenchConfig config = small_config();
    auto reports = run_bench(config);
    auto summaries = summarize(reports);
    ASSERT_EQ(summaries.size(), 2u);
    for (const MethodSummary &s : summaries) {
        EXPECT_GE(s.median_ratio, 1.0 - 1e-8);
        EXPECT_LE(s.median_ratio, s.p95_ratio + 1e-12);
        EXPECT_GT(s.mean_entries_touched, 0.0);
    }
}

TEST(BenchConfig, Validation) {
    BenchConfig config = small_config();
    config.trials = 0;
    EXPECT_THROW(config.validate(), std::invalid_argument);
    config = small_config();
    config.methods.clear();
    EXPECT_THROW(config.validate(), std::invalid_argument);
    config = small_config();
    config.epsilon = 1.5;
    EXPECT_THROW(config.validate(), std::invalid_argument);
}
