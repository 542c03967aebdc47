#pragma once

#include <algorithm>
#include <ostream>
#include <thread>

#include "gma/matrix_market.hpp"
#include "gma/synthetic.hpp"
#include "gma/verify.hpp"

namespace gma {

/// One benchmark campaign: a synthetic instance family, the methods to run on
/// it, and the sketch-plan constants. Per-trial seeds are derived from the
/// campaign seed, so the trial matrix is reproducible and thread-count
/// independent.
struct BenchConfig {
    SyntheticSpec instances;
    double epsilon = 0.25;
    std::vector<Method> methods = {Method::sparse_gaussian, Method::leverage};
    std::size_t trials = 10;
    std::uint64_t seed = 0;
    double c_embed = 4.0;
    double c_prod = 4.0;
    double c_log = 2.0;
    std::size_t threads = 1;

    void validate() const {
        instances.validate();
        require(trials >= 1, "BenchConfig: trials must be >= 1");
        require(!methods.empty(), "BenchConfig: no methods selected");
        require(threads >= 1, "BenchConfig: threads must be >= 1");
        SketchPlan probe{epsilon, 0.5, 0.1, c_embed, c_prod, c_log, 0};
        probe.validate();
    }

    SketchPlan plan_for(std::uint64_t trial_seed, std::size_t method_index) const {
        SketchPlan plan;
        plan.epsilon = epsilon;
        plan.c_embed = c_embed;
        plan.c_prod = c_prod;
        plan.c_log = c_log;
        plan.seed = CounterRng::derive(trial_seed, 0xB0 + method_index);
        return plan;
    }
};

struct TrialReport {
    std::size_t trial = 0;
    Method method = Method::exact;
    PlanDims dims;
    double error_ratio = 1.0;
    double exact_residual = 0.0;
    double sketched_residual = 0.0;
    StageTimes wall_times;
    std::uint64_t entries_of_a_touched = 0;
    std::uint64_t seed = 0;
    std::string warning;
};

struct MethodSummary {
    Method method = Method::exact;
    double median_ratio = 0.0;
    double p95_ratio = 0.0;
    double mean_total_time = 0.0;
    double mean_entries_touched = 0.0;
};

namespace detail {

inline double percentile(std::vector<double> values, double q) {
    if (values.empty())
        return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

} // namespace detail

/// Runs the campaign; reports come back ordered by (trial, method) regardless
/// of thread count.
inline std::vector<TrialReport> run_bench(const BenchConfig &config) {
    config.validate();
    const std::size_t total = config.trials * config.methods.size();
    std::vector<TrialReport> reports(total);

    auto run_trial = [&](std::size_t trial) {
        const std::uint64_t trial_seed = CounterRng::derive(config.seed, trial);
        GmaProblem problem = generate_synthetic(config.instances, trial_seed);
        GmaSolution exact = solve_exact(problem);
        const double a_fro = fro_norm(problem.a);

        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
            TrialReport &row = reports[trial * config.methods.size() + mi];
            row.trial = trial;
            row.method = config.methods[mi];
            row.exact_residual = exact.residual;
            row.seed = trial_seed;

            GmaSolution sol;
            switch (config.methods[mi]) {
            case Method::exact:
                sol = exact;
                break;
            case Method::sparse_gaussian:
                sol = solve_sparse_gaussian(problem, config.plan_for(trial_seed, mi));
                break;
            case Method::leverage:
                sol = solve_leverage(problem, config.plan_for(trial_seed, mi));
                break;
            case Method::sketched:
                throw std::invalid_argument("run_bench: 'sketched' is not a bench method");
            }
            row.dims = sol.dims_used;
            row.sketched_residual = sol.residual;
            row.error_ratio = error_ratio(exact.residual, sol.residual, a_fro);
            row.wall_times = sol.wall_times;
            row.entries_of_a_touched = sol.entries_of_a_touched;
            row.warning = sol.warning;
        }
    };

    if (config.threads <= 1) {
        for (std::size_t trial = 0; trial < config.trials; ++trial)
            run_trial(trial);
    } else {
        std::vector<std::thread> pool;
        std::size_t n_threads = std::min(config.threads, config.trials);
        for (std::size_t w = 0; w < n_threads; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t trial = w; trial < config.trials; trial += n_threads)
                    run_trial(trial);
            });
        for (auto &th : pool)
            th.join();
    }
    return reports;
}

inline std::vector<MethodSummary> summarize(const std::vector<TrialReport> &reports) {
    std::vector<MethodSummary> out;
    std::vector<Method> seen;
    for (const TrialReport &r : reports)
        if (std::find(seen.begin(), seen.end(), r.method) == seen.end())
            seen.push_back(r.method);
    for (Method m : seen) {
        MethodSummary s;
        s.method = m;
        std::vector<double> ratios;
        double time_sum = 0.0, touch_sum = 0.0;
        std::size_t count = 0;
        for (const TrialReport &r : reports) {
            if (r.method != m)
                continue;
            ratios.push_back(r.error_ratio);
            time_sum += r.wall_times.total;
            touch_sum += static_cast<double>(r.entries_of_a_touched);
            ++count;
        }
        s.median_ratio = detail::percentile(ratios, 0.5);
        s.p95_ratio = detail::percentile(ratios, 0.95);
        s.mean_total_time = time_sum / static_cast<double>(count);
        s.mean_entries_touched = touch_sum / static_cast<double>(count);
        out.push_back(s);
    }
    return out;
}

/// Fixed column order; floats carry 17 significant digits so reruns with the
/// same seed are byte-identical outside the time_* columns.
inline constexpr const char *kCsvHeader =
    "trial,method,m,n,c,r,epsilon,eta,seed,s_c,s_r,t,t_prime,"
    "exact_residual,sketched_residual,error_ratio,entries_of_a_touched,"
    "time_build,time_apply,time_pinv,time_multiply,time_total,warning";

inline void write_csv(std::ostream &out, const BenchConfig &config,
                      const std::vector<TrialReport> &reports) {
    out << kCsvHeader << "\n";
    for (const TrialReport &r : reports) {
        out << r.trial << ',' << to_string(r.method) << ',' << config.instances.m << ','
            << config.instances.n << ',' << config.instances.c << ',' << config.instances.r
            << ',' << detail::fmt17(config.epsilon) << ',' << detail::fmt17(config.instances.eta)
            << ',' << r.seed << ',' << r.dims.s_c << ',' << r.dims.s_r << ',' << r.dims.t << ','
            << r.dims.t_prime << ',' << detail::fmt17(r.exact_residual) << ','
            << detail::fmt17(r.sketched_residual) << ',' << detail::fmt17(r.error_ratio) << ','
            << r.entries_of_a_touched << ',' << detail::fmt17(r.wall_times.build) << ','
            << detail::fmt17(r.wall_times.apply) << ',' << detail::fmt17(r.wall_times.pinv)
            << ',' << detail::fmt17(r.wall_times.multiply) << ','
            << detail::fmt17(r.wall_times.total) << ',' << r.warning << "\n";
    }
}

} // namespace gma
