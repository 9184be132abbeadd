#pragma once

// Scenario-driven experiment harness: runs trials x planners with derived
// seeds (optionally the same sample sequence for every planner), writes
// per-trial trace CSVs, an aggregate CSV and SVG snapshots, and computes
// per-checkpoint statistics plus the cumulative-runtime ratio against the
// first planner in the list.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pathlab/geometry.hpp"
#include "pathlab/graph.hpp"
#include "pathlab/json_io.hpp"
#include "pathlab/planar_optimum.hpp"
#include "pathlab/planners.hpp"
#include "pathlab/svg.hpp"

namespace pathlab {

inline constexpr const char* kToolVersion = "pathlab 0.1.0";

struct ExperimentConfig {
    Scenario scenario;
    std::string scenario_path;  // informational, echoed into file headers
    std::vector<PlannerSpec> planners;
    int trials = 1;
    /// Iterations at which statistics are collected; empty selects ~20
    /// logarithmically spaced checkpoints per planner.
    std::vector<int> checkpoints;
    /// Run every planner on the same sample sequence within a trial.
    bool paired_seeds = true;
    std::uint64_t seed = 0;
    std::optional<double> optimal_cost;
    bool render = false;
    bool dump_graphs = false;
    /// When false, elapsed columns are written as zero so outputs are
    /// byte-reproducible across runs.
    bool record_walltime = true;
    int threads = 1;
    std::string out_dir;  // empty: compute the report without writing files

    void validate() const {
        if (trials < 1) throw std::invalid_argument("experiment needs trials >= 1");
        if (planners.empty()) throw std::invalid_argument("experiment needs at least one planner");
        for (const PlannerSpec& p : planners) p.validate();
        for (int c : checkpoints)
            if (c < 1) throw std::invalid_argument("checkpoints must be >= 1");
    }
};

struct CheckpointStat {
    int iteration = 0;
    int trials = 0;
    int solved = 0;             // trials with a finite best cost
    double mean_cost = kInf;    // over solved trials
    double variance = 0.0;      // over solved trials
    double mean_normalized = std::numeric_limits<double>::quiet_NaN();
    double mean_elapsed_s = 0.0;
    double time_ratio_vs_first = std::numeric_limits<double>::quiet_NaN();
};

struct PlannerAggregate {
    std::string planner;
    std::vector<CheckpointStat> rows;
};

struct AggregateReport {
    double normalization = std::numeric_limits<double>::quiet_NaN();
    std::vector<PlannerAggregate> planners;
};

inline std::vector<int> default_checkpoints(int n, int count = 20) {
    std::vector<int> out;
    for (int i = 1; i <= count; ++i) {
        const double frac = static_cast<double>(i) / count;
        int c = static_cast<int>(std::lround(std::exp(std::log(static_cast<double>(std::max(n, 1))) * frac)));
        c = std::clamp(c, 1, std::max(n, 1));
        if (out.empty() || out.back() != c) out.push_back(c);
    }
    return out;
}

inline ExperimentConfig experiment_config_from_json(const json& j, const std::string& base_dir = "") {
    ExperimentConfig cfg;
    cfg.scenario_path = j.at("scenario").get<std::string>();
    std::filesystem::path sp(cfg.scenario_path);
    if (sp.is_relative() && !base_dir.empty()) sp = std::filesystem::path(base_dir) / sp;
    const ScenarioFile sf = load_scenario_file(sp.string());
    cfg.scenario = sf.scenario;
    if (j.contains("planners")) {
        for (const json& p : j.at("planners")) cfg.planners.push_back(planner_spec_from_json(p));
    } else if (sf.planner) {
        cfg.planners.push_back(*sf.planner);
    } else {
        throw std::invalid_argument("experiment config needs \"planners\" or a scenario with an "
                                    "embedded \"planner\" object");
    }
    cfg.trials = j.value("trials", 1);
    if (j.contains("checkpoints")) cfg.checkpoints = j.at("checkpoints").get<std::vector<int>>();
    cfg.paired_seeds = j.value("paired_seeds", true);
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(0));
    if (j.contains("optimal_cost")) cfg.optimal_cost = j.at("optimal_cost").get<double>();
    cfg.render = j.value("render", false);
    cfg.dump_graphs = j.value("dump_graphs", false);
    cfg.record_walltime = j.value("record_walltime", true);
    cfg.threads = j.value("threads", 1);
    cfg.validate();
    return cfg;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_trace_csv(const std::string& path, const RunTrace& trace, std::uint64_t seed,
                            const std::string& planner) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# " << kToolVersion << " seed=" << seed << " planner=" << planner << "\n";
    out << "iteration,best_cost,elapsed_s,collision_calls\n";
    for (const TracePoint& p : trace.points)
        out << p.iteration << "," << format_double(p.best_cost) << "," << format_double(p.elapsed_s)
            << "," << p.collision_calls << "\n";
}

inline std::optional<double> resolve_normalization(const ExperimentConfig& cfg) {
    if (cfg.optimal_cost) return cfg.optimal_cost;
    if (cfg.scenario.d == 2 && cfg.scenario.cost_regions.empty())
        return optimal_cost_2d(cfg.scenario);
    return std::nullopt;
}

inline std::optional<double> query_cost_for(const RoadmapGraph& g, const Scenario& s,
                                            const PlannerSpec& spec) {
    const bool attach = spec.algorithm == Algorithm::PRM;
    const QueryResult q = query_best_path(g, s, attach ? spec.fixed_radius : std::nullopt);
    if (!q.found()) return std::nullopt;
    return q.cost;
}

}  // namespace detail

inline AggregateReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const Scenario& scen = cfg.scenario;
    const bool write_files = !cfg.out_dir.empty();
    if (write_files) std::filesystem::create_directories(cfg.out_dir);

    const std::size_t num_planners = cfg.planners.size();
    std::vector<std::vector<RunTrace>> traces(num_planners, std::vector<RunTrace>(static_cast<std::size_t>(cfg.trials)));

    std::mutex io_mutex;
    std::atomic<std::size_t> next_task{0};
    const std::size_t total_tasks = num_planners * static_cast<std::size_t>(cfg.trials);
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t task = next_task.fetch_add(1);
            if (task >= total_tasks) return;
            const std::size_t p = task / static_cast<std::size_t>(cfg.trials);
            const int t = static_cast<int>(task % static_cast<std::size_t>(cfg.trials));
            try {
                const PlannerSpec& spec = cfg.planners[p];
                RngStream stream = RngStream(cfg.seed).derived(static_cast<std::uint64_t>(t));
                if (!cfg.paired_seeds) stream = stream.derived(p + 1);

                PlannerOptions opts;
                opts.checkpoints = cfg.checkpoints.empty() ? default_checkpoints(spec.n) : cfg.checkpoints;
                opts.measure_time = cfg.record_walltime;
                const bool artifacts = t == 0 && write_files && (cfg.render || cfg.dump_graphs);
                if (t == 0 && write_files && cfg.render && scen.d == 2) {
                    opts.snapshot = [&](int iter, const RoadmapGraph& g) {
                        const QueryResult q = query_best_path(
                            g, scen, spec.algorithm == Algorithm::PRM ? spec.fixed_radius : std::nullopt);
                        char name[64];
                        std::snprintf(name, sizeof name, "snap_p%zu_%s_iter%06d.svg", p,
                                      algorithm_name(spec.algorithm), iter);
                        std::string header = std::string(kToolVersion) + " seed=" + std::to_string(stream.seed());
                        render_svg(g, scen, (std::filesystem::path(cfg.out_dir) / name).string(),
                                   q.path, header);
                    };
                }

                PlannerResult result = run_planner(scen, spec, stream, opts);
                if (artifacts && cfg.dump_graphs) {
                    json meta{{"tool", kToolVersion}, {"seed", stream.seed()},
                              {"planner", algorithm_name(spec.algorithm)}};
                    char gname[64];
                    std::snprintf(gname, sizeof gname, "graph_p%zu_%s.json", p,
                                  algorithm_name(spec.algorithm));
                    save_json_file((std::filesystem::path(cfg.out_dir) / gname).string(),
                                   graph_to_json(result.graph, meta));
                }
                if (write_files) {
                    char name[64];
                    std::snprintf(name, sizeof name, "trace_p%zu_%s_t%04d.csv", p,
                                  algorithm_name(spec.algorithm), t);
                    std::lock_guard<std::mutex> lock(io_mutex);
                    detail::write_trace_csv((std::filesystem::path(cfg.out_dir) / name).string(),
                                            result.trace, stream.seed(), algorithm_name(spec.algorithm));
                }
                traces[p][static_cast<std::size_t>(t)] = std::move(result.trace);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const int nthreads = std::max(1, cfg.threads);
    std::vector<std::thread> pool;
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    AggregateReport report;
    const auto norm = detail::resolve_normalization(cfg);
    if (norm) report.normalization = *norm;

    for (std::size_t p = 0; p < num_planners; ++p) {
        PlannerAggregate agg;
        agg.planner = algorithm_name(cfg.planners[p].algorithm);
        const std::size_t rows = traces[p][0].points.size();
        for (std::size_t r = 0; r < rows; ++r) {
            CheckpointStat st;
            st.iteration = traces[p][0].points[r].iteration;
            st.trials = cfg.trials;
            double sum = 0.0, sum_sq = 0.0, time_sum = 0.0;
            for (int t = 0; t < cfg.trials; ++t) {
                const TracePoint& pt = traces[p][static_cast<std::size_t>(t)].points[r];
                time_sum += pt.elapsed_s;
                if (std::isfinite(pt.best_cost)) {
                    ++st.solved;
                    sum += pt.best_cost;
                    sum_sq += pt.best_cost * pt.best_cost;
                }
            }
            st.mean_elapsed_s = time_sum / cfg.trials;
            if (st.solved > 0) {
                st.mean_cost = sum / st.solved;
                if (st.solved > 1)
                    st.variance = std::max(0.0, (sum_sq - sum * sum / st.solved) / (st.solved - 1));
                if (norm) st.mean_normalized = st.mean_cost / *norm;
            }
            agg.rows.push_back(st);
        }
        report.planners.push_back(std::move(agg));
    }

    // Cumulative-runtime ratio against the first planner at matching iterations.
    if (!report.planners.empty()) {
        const auto& base_rows = report.planners[0].rows;
        for (std::size_t p = 0; p < report.planners.size(); ++p) {
            for (CheckpointStat& st : report.planners[p].rows) {
                for (const CheckpointStat& b : base_rows) {
                    if (b.iteration == st.iteration && b.mean_elapsed_s > 0.0) {
                        st.time_ratio_vs_first = st.mean_elapsed_s / b.mean_elapsed_s;
                        break;
                    }
                }
            }
        }
    }

    if (write_files) {
        std::ofstream out(std::filesystem::path(cfg.out_dir) / "aggregate.csv");
        if (!out) throw std::runtime_error("cannot write aggregate.csv");
        out << "# " << kToolVersion << " seed=" << cfg.seed << " scenario=" << cfg.scenario_path
            << " normalization=" << detail::format_double(report.normalization) << "\n";
        out << "planner,iteration,trials,solved,mean_cost,variance,mean_normalized,mean_elapsed_s,"
               "time_ratio_vs_first\n";
        for (const PlannerAggregate& agg : report.planners)
            for (const CheckpointStat& st : agg.rows)
                out << agg.planner << "," << st.iteration << "," << st.trials << "," << st.solved
                    << "," << detail::format_double(st.mean_cost) << ","
                    << detail::format_double(st.variance) << ","
                    << detail::format_double(st.mean_normalized) << ","
                    << detail::format_double(st.mean_elapsed_s) << ","
                    << detail::format_double(st.time_ratio_vs_first) << "\n";
    }
    return report;
}

}  // namespace pathlab
