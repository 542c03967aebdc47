// End-to-end tests of the gma binary; the executable path arrives as argv[1].

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gma/matrix_market.hpp"
#include "gma/rng.hpp"
#include "gma/solver.hpp"

namespace {

std::string g_cli;

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() / "gma_cli_test";
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    RunResult run(const std::string &args, const std::string &env = "") {
        std::string out_file = path("stdout.txt"), err_file = path("stderr.txt");
        std::string cmd =
            env + " " + g_cli + " " + args + " >" + out_file + " 2>" + err_file;
        int status = std::system(cmd.c_str());
        RunResult r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out_file);
        r.err = slurp(err_file);
        return r;
    }

    // writes a consistent triple A = M X0 N
    void write_problem(std::size_t m, std::size_t n, std::size_t c, std::size_t r,
                       std::uint64_t seed) {
        gma::CounterRng rng(seed);
        auto fill = [&](std::size_t rows, std::size_t cols) {
            gma::DenseMatrix x(rows, cols);
            for (std::size_t k = 0; k < x.size(); ++k)
                x.data()[k] = rng.normal();
            return x;
        };
        gma::DenseMatrix mm = fill(m, c), nn = fill(r, n), x0 = fill(c, r);
        gma::DenseMatrix a = gma::matmul(gma::matmul(mm, x0), nn);
        gma::write_matrix_market(path("a.mtx"), a);
        gma::write_matrix_market(path("m.mtx"), mm);
        gma::write_matrix_market(path("n.mtx"), nn);
    }

    std::filesystem::path dir_;
};

} // namespace

TEST_F(CliTest, SolveExactConsistentTriple) {
    write_problem(30, 25, 4, 3, 1);
    auto r = run("solve --a " + path("a.mtx") + " --m " + path("m.mtx") + " --n " +
                 path("n.mtx") + " --method exact --out " + path("x.mtx") + " --report " +
                 path("rep.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    auto rep = nlohmann::json::parse(slurp(path("rep.json")));
    const auto a = gma::read_matrix_market(path("a.mtx"));
    EXPECT_LE(rep["residual"].get<double>(), 1e-8 * gma::fro_norm(a));
    EXPECT_EQ(rep["method"], "exact");
    EXPECT_TRUE(std::filesystem::exists(path("x.mtx")));
}

TEST_F(CliTest, SolveWritesReadableSolution) {
    write_problem(20, 18, 3, 3, 2);
    auto r = run("solve --a " + path("a.mtx") + " --m " + path("m.mtx") + " --n " +
                 path("n.mtx") + " --method exact --out " + path("x.mtx"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    auto x = gma::read_matrix_market(path("x.mtx"));
    ASSERT_TRUE(std::holds_alternative<gma::DenseMatrix>(x));
    EXPECT_EQ(std::get<gma::DenseMatrix>(x).rows(), 3u);
    EXPECT_EQ(std::get<gma::DenseMatrix>(x).cols(), 3u);
}

TEST_F(CliTest, MissingFileExitsTwoAndNamesPath) {
    auto r = run("solve --a /definitely/not/here.mtx --m x.mtx --n y.mtx --method exact");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("/definitely/not/here.mtx"), std::string::npos);
}

TEST_F(CliTest, LeverageReportsTouchCounter) {
    write_problem(120, 100, 4, 4, 3);
    auto r = run("solve --a " + path("a.mtx") + " --m " + path("m.mtx") + " --n " +
                 path("n.mtx") + " --method leverage --epsilon 0.25 --seed 5 --report " +
                 path("rep.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    auto rep = nlohmann::json::parse(slurp(path("rep.json")));
    const std::uint64_t s_c = rep["dims_used"]["s_c"].get<std::uint64_t>();
    const std::uint64_t s_r = rep["dims_used"]["s_r"].get<std::uint64_t>();
    EXPECT_EQ(rep["entries_of_a_touched"].get<std::uint64_t>(), s_c * s_r);
}

TEST_F(CliTest, SymmetricSolve) {
    gma::CounterRng rng(4);
    const std::size_t m = 40, c = 3;
    gma::DenseMatrix factor(m, c);
    for (std::size_t k = 0; k < factor.size(); ++k)
        factor.data()[k] = rng.normal();
    gma::DenseMatrix raw(m, m);
    for (std::size_t k = 0; k < raw.size(); ++k)
        raw.data()[k] = rng.normal();
    gma::DenseMatrix a(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            a(i, j) = 0.5 * (raw(i, j) + raw(j, i));
    gma::write_matrix_market(path("a.mtx"), a);
    gma::write_matrix_market(path("m.mtx"), factor);

    auto r = run("solve --a " + path("a.mtx") + " --m " + path("m.mtx") +
                 " --method symmetric --epsilon 0.25 --seed 8 --out " + path("x.mtx"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto x = std::get<gma::DenseMatrix>(gma::read_matrix_market(path("x.mtx")));
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j)
            EXPECT_EQ(x(i, j), x(j, i));
}

TEST_F(CliTest, BenchEmitsCsvRowsAndSummary) {
    auto r = run("bench --rows 40 --cols 36 --c 3 --r 3 --trials 5 --seed 6 "
                 "--methods sparse-gaussian,leverage --csv " +
                 path("bench.csv"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::string csv = slurp(path("bench.csv"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11); // header + 10 rows
    EXPECT_NE(r.out.find("median_ratio"), std::string::npos);
    EXPECT_NE(r.out.find("method=leverage"), std::string::npos);
}

TEST_F(CliTest, BenchDeterministicOutsideTimes) {
    const std::string args = "bench --rows 30 --cols 28 --c 3 --r 2 --trials 4 --seed 17 "
                             "--methods leverage --csv ";
    ASSERT_EQ(run(args + path("b1.csv")).exit_code, 0);
    ASSERT_EQ(run(args + path("b2.csv")).exit_code, 0);
    auto strip_times = [](const std::string &csv) {
        std::istringstream in(csv);
        std::ostringstream out;
        std::string line, cell;
        while (std::getline(in, line)) {
            std::istringstream cells(line);
            int idx = 0;
            while (std::getline(cells, cell, ',')) {
                if (idx < 17 || idx > 21)
                    out << cell << "|";
                ++idx;
            }
        }
        return out.str();
    };
    EXPECT_EQ(strip_times(slurp(path("b1.csv"))), strip_times(slurp(path("b2.csv"))));
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
    write_problem(25, 20, 3, 3, 7);
    const std::string base = "solve --a " + path("a.mtx") + " --m " + path("m.mtx") +
                             " --n " + path("n.mtx") + " --method sparse-gaussian --report ";
    auto via_env = run(base + path("r1.json"), "GMA_SEED=12345");
    auto via_flag = run(base + path("r2.json") + " --seed 12345");
    ASSERT_EQ(via_env.exit_code, 0);
    ASSERT_EQ(via_flag.exit_code, 0);
    auto r1 = nlohmann::json::parse(slurp(path("r1.json")));
    auto r2 = nlohmann::json::parse(slurp(path("r2.json")));
    EXPECT_EQ(r1["residual"].get<double>(), r2["residual"].get<double>());
    EXPECT_EQ(r1["seed"], r2["seed"]);
}

TEST_F(CliTest, VerifySmallRunHealthy) {
    auto r = run("verify --trials 30 --seed 2 --report " + path("verify.json"));
    EXPECT_EQ(r.exit_code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("[pass]"), std::string::npos);
    EXPECT_EQ(r.out.find("[FAIL]"), std::string::npos);
    auto rep = nlohmann::json::parse(slurp(path("verify.json")));
    EXPECT_GE(rep.size(), 8u);
}

TEST_F(CliTest, UnknownMethodExitsTwo) {
    write_problem(10, 10, 2, 2, 9);
    auto r = run("solve --a " + path("a.mtx") + " --m " + path("m.mtx") + " --n " +
                 path("n.mtx") + " --method frobnicate");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("frobnicate"), std::string::npos);
}

TEST_F(CliTest, BadFlagExitsTwo) {
    EXPECT_EQ(run("solve --nonsense").exit_code, 2);
    EXPECT_EQ(run("bench --trials 0").exit_code, 2);
}

int main(int argc, char **argv) {
    ::testing::InitGoogleTest(&argc, argv);
    g_cli = argc > 1 ? argv[1] : "./gma";
    return RUN_ALL_TESTS();
}
