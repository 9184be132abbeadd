// Command-line front end: `run` executes a scenario-driven experiment,
// `rgg-sweep` estimates connectivity curves for random geometric graphs,
// `render` draws a dumped roadmap over its scenario.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathlab/pathlab.hpp"

namespace {

std::vector<double> parse_param_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("--params", "expected a comma-separated list");
    return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::optional<int> threads) {
    const auto base_dir = std::filesystem::path(config_path).parent_path().string();
    pathlab::ExperimentConfig cfg =
        pathlab::experiment_config_from_json(pathlab::load_json_file(config_path), base_dir);
    cfg.out_dir = out_dir;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;

    const pathlab::AggregateReport report = pathlab::run_experiment(cfg);
    if (std::isfinite(report.normalization))
        std::printf("optimal cost: %.6f\n", report.normalization);
    for (const auto& agg : report.planners) {
        if (agg.rows.empty()) continue;
        const auto& last = agg.rows.back();
        std::printf("%-20s n=%-8d solved %d/%d  mean cost %.6f", agg.planner.c_str(),
                    last.iteration, last.solved, last.trials, last.mean_cost);
        if (std::isfinite(last.mean_normalized)) std::printf("  (%.4f x optimal)", last.mean_normalized);
        std::printf("\n");
    }
    if (!out_dir.empty()) std::printf("wrote traces and aggregate.csv to %s\n", out_dir.c_str());
    return 0;
}

int cmd_rgg_sweep(const std::string& model_name, int d, int n, const std::string& params_csv,
                  bool rc_multiples, bool poissonized, int trials, std::uint64_t seed,
                  const std::string& out_path) {
    pathlab::RggModel model;
    model.kind = pathlab::rgg_kind_from_name(model_name);
    model.d = d;
    model.n = n;
    model.poissonized = poissonized;

    std::vector<double> grid = parse_param_list(params_csv);
    if (rc_multiples) {
        if (model.kind != pathlab::RggKind::rDisc)
            throw CLI::ValidationError("--rc-multiples", "only meaningful for the rdisc model");
        const double rc = pathlab::connectivity_threshold_radius(n, d);
        for (double& g : grid) g *= rc;
    }

    pathlab::RngStream rng(seed);
    const auto rows = pathlab::run_rgg_sweep(model, grid, trials, rng);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw CLI::RuntimeError("cannot write " + out_path, 1);
        out = &file;
    }
    *out << "# " << pathlab::kToolVersion << " seed=" << seed << "\n";
    *out << "model,d,n,param,p_connected,se,mean_lcc_fraction\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%.17g,%.17g,%.17g,%.17g\n", r.model.c_str(), r.d,
                      r.n, r.param, r.p_connected, r.std_err, r.mean_lcc_fraction);
        *out << buf;
    }
    return 0;
}

int cmd_render(const std::string& graph_path, const std::string& scenario_path,
               const std::string& out_path, std::optional<double> attach_radius) {
    const pathlab::Scenario scenario = pathlab::load_scenario_file(scenario_path).scenario;
    const pathlab::json graph_json = pathlab::load_json_file(graph_path);
    const pathlab::RoadmapGraph graph = pathlab::graph_from_json(graph_json);
    std::string comment = pathlab::kToolVersion;
    if (graph_json.contains("meta") && graph_json["meta"].contains("seed"))
        comment += " seed=" + graph_json["meta"]["seed"].dump();

    std::optional<pathlab::PathPolyline> best;
    if (!graph.vertices.empty()) {
        std::optional<double> attach;
        if (attach_radius) {
            attach = attach_radius;
        } else if (!(graph.vertices[0] == scenario.x_init)) {
            attach = std::nullopt;  // roadmap without x_init and no radius given: draw edges only
        }
        if (attach || graph.vertices[0] == scenario.x_init) {
            const auto q = pathlab::query_best_path(graph, scenario, attach);
            if (q.found()) best = q.path;
        }
    }
    pathlab::render_svg(graph, scenario, out_path, best, comment);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sampling-based motion planning benchmark harness"};
    app.require_subcommand(1);

    // run
    std::string run_config, run_out;
    std::optional<std::uint64_t> run_seed;
    std::optional<int> run_threads;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("--config", run_config, "experiment JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "output directory")->required();
    run->add_option("--seed", run_seed, "override the config seed");
    run->add_option("--threads", run_threads, "trial-level worker threads");

    // rgg-sweep
    std::string sweep_model = "rdisc", sweep_params, sweep_out;
    int sweep_d = 2, sweep_n = 1000, sweep_trials = 50;
    std::uint64_t sweep_seed = 0;
    bool sweep_rc = false, sweep_poisson = false;
    auto* sweep = app.add_subcommand("rgg-sweep", "Monte Carlo connectivity sweep");
    sweep->add_option("--model", sweep_model, "rdisc | knearest | onlinenn");
    sweep->add_option("--d", sweep_d, "dimension")->check(CLI::PositiveNumber);
    sweep->add_option("--n", sweep_n, "vertex count (Poisson mean when --poissonized)")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--params", sweep_params, "comma-separated radii or k values")->required();
    sweep->add_flag("--rc-multiples", sweep_rc, "interpret params as multiples of the connectivity threshold radius");
    sweep->add_flag("--poissonized", sweep_poisson, "draw the vertex count as Poisson(n)");
    sweep->add_option("--trials", sweep_trials, "trials per grid point")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", sweep_seed, "base seed");
    sweep->add_option("--out", sweep_out, "CSV path (stdout when omitted)");

    // render
    std::string render_graph, render_scenario, render_out;
    std::optional<double> render_attach;
    auto* render = app.add_subcommand("render", "render a roadmap dump to SVG");
    render->add_option("--graph", render_graph, "graph JSON")->required()->check(CLI::ExistingFile);
    render->add_option("--scenario", render_scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
    render->add_option("--out", render_out, "SVG path")->required();
    render->add_option("--attach-radius", render_attach,
                       "connect x_init to the roadmap at query time (PRM dumps)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_config, run_out, run_seed, run_threads);
        if (sweep->parsed())
            return cmd_rgg_sweep(sweep_model, sweep_d, sweep_n, sweep_params, sweep_rc,
                                 sweep_poisson, sweep_trials, sweep_seed, sweep_out);
        if (render->parsed()) return cmd_render(render_graph, render_scenario, render_out, render_attach);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
