// Command-line front end: solve one problem from Matrix Market files, run a
// synthetic benchmark campaign, or run the statistical certification suite.
//
// Exit codes: 0 success, 1 failed verification verdict, 2 input/config error,
// 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gma/gma.hpp"

namespace {

using nlohmann::json;

std::uint64_t seed_or_env(const CLI::Option *opt, std::uint64_t value) {
    if (opt->count() > 0)
        return value;
    if (const char *env = std::getenv("GMA_SEED"))
        return std::strtoull(env, nullptr, 10);
    return value;
}

gma::DenseMatrix read_dense(const std::string &path, const char *role) {
    gma::MatrixAny any = gma::read_matrix_market(path);
    if (!std::holds_alternative<gma::DenseMatrix>(any))
        throw std::invalid_argument(std::string(role) + " (" + path +
                                    ") must be in array (dense) form");
    return std::get<gma::DenseMatrix>(any);
}

json dims_json(const gma::PlanDims &d) {
    return json{{"s_c", d.s_c}, {"s_r", d.s_r}, {"t", d.t}, {"t_prime", d.t_prime}};
}

json times_json(const gma::StageTimes &t) {
    return json{{"build", t.build},
                {"apply", t.apply},
                {"pinv", t.pinv},
                {"multiply", t.multiply},
                {"total", t.total}};
}

int cmd_solve(const std::string &a_path, const std::string &m_path, const std::string &n_path,
              const std::string &method, double epsilon, std::uint64_t seed,
              const std::string &out_path, const std::string &report_path, double c_embed,
              double c_prod, double c_log) {
    gma::MatrixAny a = gma::read_matrix_market(a_path);
    gma::DenseMatrix m = read_dense(m_path, "M");

    gma::SketchPlan plan;
    plan.epsilon = epsilon;
    plan.c_embed = c_embed;
    plan.c_prod = c_prod;
    plan.c_log = c_log;
    plan.seed = seed;

    gma::GmaSolution sol;
    if (method == "symmetric") {
        if (!std::holds_alternative<gma::DenseMatrix>(a))
            throw std::invalid_argument("symmetric solve requires a dense A");
        sol = gma::solve_symmetric(std::get<gma::DenseMatrix>(a), m, plan,
                                   gma::SketchMethod::sparse_gaussian);
    } else {
        if (n_path.empty())
            throw std::invalid_argument("--n is required for method " + method);
        gma::DenseMatrix n = read_dense(n_path, "N");
        gma::GmaProblem problem(std::move(a), std::move(m), std::move(n));
        if (method == "exact")
            sol = gma::solve_exact(problem);
        else if (method == "sparse-gaussian")
            sol = gma::solve_sparse_gaussian(problem, plan);
        else if (method == "leverage")
            sol = gma::solve_leverage(problem, plan);
        else
            throw std::invalid_argument("unknown method '" + method + "'");
    }

    if (!out_path.empty())
        gma::write_matrix_market(out_path, sol.x);

    json report{{"method", gma::to_string(sol.method)},
                {"symmetrized", sol.symmetrized},
                {"residual", sol.residual},
                {"dims_used", dims_json(sol.dims_used)},
                {"wall_times", times_json(sol.wall_times)},
                {"seed", sol.seed},
                {"entries_of_a_touched", sol.entries_of_a_touched},
                {"warning", sol.warning}};
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        gma::require(out.good(), "cannot open report path " + report_path);
        out << report.dump(2) << "\n";
    }
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_bench(const gma::BenchConfig &config, const std::string &csv_path) {
    std::vector<gma::TrialReport> reports = gma::run_bench(config);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        gma::require(out.good(), "cannot open CSV path " + csv_path);
        gma::write_csv(out, config, reports);
    } else {
        gma::write_csv(std::cout, config, reports);
    }
    for (const gma::MethodSummary &s : gma::summarize(reports)) {
        std::cout << "method=" << gma::to_string(s.method)
                  << " median_ratio=" << s.median_ratio << " p95_ratio=" << s.p95_ratio
                  << " mean_total_time=" << s.mean_total_time
                  << " mean_entries_of_a_touched=" << s.mean_entries_touched << "\n";
    }
    return 0;
}

int cmd_verify(std::size_t trials, std::uint64_t seed, double epsilon,
               const std::string &report_path) {
    std::vector<gma::PropertyReport> reports =
        gma::default_verification_suite(trials, seed, epsilon);
    bool all_ok = true;
    json out = json::array();
    for (const gma::PropertyReport &r : reports) {
        const bool ok = r.verdict();
        all_ok = all_ok && ok;
        std::cout << (ok ? "[pass] " : "[FAIL] ") << r.property << " passes=" << r.passes
                  << "/" << r.trials << " required=" << r.threshold
                  << " worst_violation=" << r.worst_violation << "\n";
        out.push_back(json{{"property", r.property},
                           {"trials", r.trials},
                           {"passes", r.passes},
                           {"threshold", r.threshold},
                           {"worst_violation", r.worst_violation},
                           {"seed", r.seed},
                           {"verdict", ok}});
    }
    if (!report_path.empty()) {
        std::ofstream f(report_path);
        gma::require(f.good(), "cannot open report path " + report_path);
        f << out.dump(2) << "\n";
    }
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Generalized matrix approximation: exact and sketched solvers"};
    app.require_subcommand(1);

    // solve
    auto *solve = app.add_subcommand("solve", "Solve min_X ||A - M X N||_F from files");
    std::string a_path, m_path, n_path, method = "exact", out_path, report_path;
    double epsilon = 0.25;
    std::uint64_t seed = 0;
    double c_embed = 4.0, c_prod = 4.0, c_log = 2.0;
    solve->add_option("--a", a_path, "A, Matrix Market array or coordinate")->required();
    solve->add_option("--m", m_path, "M, Matrix Market array")->required();
    solve->add_option("--n", n_path, "N, Matrix Market array (omit for symmetric)");
    solve->add_option("--method", method,
                      "exact | sparse-gaussian | leverage | symmetric "
                      "(symmetric sketches with the sparse-gaussian pipeline)");
    solve->add_option("--epsilon", epsilon, "target relative error in (0,1)");
    auto *solve_seed = solve->add_option("--seed", seed, "RNG seed (falls back to GMA_SEED)");
    solve->add_option("--out", out_path, "write X here, Matrix Market array");
    solve->add_option("--report", report_path, "write the JSON solve record here");
    solve->add_option("--c-embed", c_embed, "CountSketch stage dimension constant");
    solve->add_option("--c-prod", c_prod, "product-approximation dimension constant");
    solve->add_option("--c-log", c_log, "leverage log-term dimension constant");

    // bench
    auto *bench = app.add_subcommand("bench", "Run a synthetic benchmark campaign, emit CSV");
    gma::BenchConfig config;
    std::vector<std::string> method_names = {"sparse-gaussian", "leverage"};
    std::string csv_path;
    bench->add_option("--rows", config.instances.m, "rows of A");
    bench->add_option("--cols", config.instances.n, "cols of A");
    bench->add_option("--c", config.instances.c, "cols of M");
    bench->add_option("--r", config.instances.r, "rows of N");
    bench->add_option("--epsilon", config.epsilon, "target relative error");
    bench->add_option("--eta", config.instances.eta, "noise level of the instance family");
    bench->add_option("--density", config.instances.sparse_density,
                      "generate sparse A with this fill fraction (0 = dense)");
    bench->add_option("--methods", method_names,
                      "subset of: exact sparse-gaussian leverage")
        ->delimiter(',');
    bench->add_option("--trials", config.trials, "trials per method");
    auto *bench_seed =
        bench->add_option("--seed", config.seed, "campaign seed (falls back to GMA_SEED)");
    bench->add_option("--threads", config.threads,
                      "trial-level parallelism; default 1 keeps output byte-stable");
    bench->add_option("--c-embed", config.c_embed, "CountSketch stage dimension constant");
    bench->add_option("--c-prod", config.c_prod, "product-approximation dimension constant");
    bench->add_option("--c-log", config.c_log, "leverage log-term dimension constant");
    bench->add_option("--csv", csv_path, "CSV output path (stdout when omitted)");
    bench->footer(std::string("CSV columns, in order:\n  ") + gma::kCsvHeader +
                  "\nIdentical config and seed reproduce every column except time_*.");

    // verify
    auto *verify = app.add_subcommand("verify", "Run the statistical certification suite");
    std::size_t v_trials = 200;
    std::uint64_t v_seed = 0;
    double v_epsilon = 0.5;
    std::string v_report;
    verify->add_option("--trials", v_trials, "trials per property");
    auto *verify_seed =
        verify->add_option("--seed", v_seed, "suite seed (falls back to GMA_SEED)");
    verify->add_option("--epsilon", v_epsilon, "distortion parameter for the certificates");
    verify->add_option("--report", v_report, "write JSON property reports here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed())
            return cmd_solve(a_path, m_path, n_path, method, epsilon,
                             seed_or_env(solve_seed, seed), out_path, report_path, c_embed,
                             c_prod, c_log);
        if (bench->parsed()) {
            config.seed = seed_or_env(bench_seed, config.seed);
            config.methods.clear();
            for (const std::string &name : method_names) {
                if (name == "exact")
                    config.methods.push_back(gma::Method::exact);
                else if (name == "sparse-gaussian")
                    config.methods.push_back(gma::Method::sparse_gaussian);
                else if (name == "leverage")
                    config.methods.push_back(gma::Method::leverage);
                else
                    throw std::invalid_argument("unknown bench method '" + name + "'");
            }
            return cmd_bench(config, csv_path);
        }
        if (verify->parsed())
            return cmd_verify(v_trials, seed_or_env(verify_seed, v_seed), v_epsilon, v_report);
    } catch (const gma::NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
