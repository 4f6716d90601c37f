// Command-line front end: scenario generation, single solves, traces and sweeps.
#include "cranopt/experiment.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace cranopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNonConverged = 3;

struct Options {
    std::string scenario_path;
    std::string config_path;
    std::vector<std::string> algorithms;
    std::vector<std::uint64_t> seeds;
    std::string out = ".";
    int grid = 0;
    int jobs = 0;
    int m = 0;
};

int exit_code(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return kExitOk;
        case SolveStatus::infeasible: return kExitInfeasible;
        case SolveStatus::non_converged: return kExitNonConverged;
    }
    return kExitError;
}

ExperimentConfig load_config(const std::string& mode, const Options& o) {
    ExperimentConfig c = preset(mode);
    if (!o.config_path.empty()) c = merge_experiment_config(std::move(c), read_text(o.config_path));
    if (o.grid > 0) c.esa.grid_points = o.grid;
    if (o.jobs > 0) {
        c.axis_sweep.jobs = o.jobs;
        c.esa.threads = o.jobs;
    }
    if (o.m > 0) c.trace_m = o.m;
    if (!o.seeds.empty()) c.axis_sweep.seeds = o.seeds;
    if (!o.algorithms.empty()) {
        c.axis_sweep.algorithms.clear();
        for (const auto& a : o.algorithms) c.axis_sweep.algorithms.push_back(parse_algorithm(a));
    }
    return c;
}

Scenario scenario_for(const ExperimentConfig& c, const Options& o) {
    if (!o.scenario_path.empty()) return load_file(o.scenario_path);
    ScenarioConfig sc = c.scenario;
    if (!o.seeds.empty()) sc.seed = o.seeds.front();
    return generate(sc);
}

Algorithm single_algorithm(const Options& o) {
    if (o.algorithms.empty()) return Algorithm::joint;
    if (o.algorithms.size() > 1) throw ValidationError("this command takes a single --algo");
    return parse_algorithm(o.algorithms.front());
}

void write_result(const fs::path& dir, const std::string& name, const Scenario& scenario, const PowerParams& params,
                  const SolveResult& result) {
    const std::string doc = result_document(scenario, params, result);
    validate_result_document(doc);
    write_text(dir / name, doc);
}

int cmd_generate(const Options& o) {
    const ExperimentConfig c = load_config("generate", o);
    std::vector<std::uint64_t> seeds = o.seeds;
    if (seeds.empty()) seeds.push_back(c.scenario.seed);
    for (std::uint64_t seed : seeds) {
        ScenarioConfig sc = c.scenario;
        sc.seed = seed;
        const fs::path path = fs::path(o.out) / fmt::format("scenario_{}.json", seed);
        save_file(generate(sc), path);
        fmt::print("{}\n", path.string());
    }
    return kExitOk;
}

int cmd_solve(const Options& o) {
    const ExperimentConfig c = load_config("solve", o);
    const Scenario scenario = scenario_for(c, o);
    const SolveResult result = run_algorithm(scenario, c, single_algorithm(o));
    const fs::path dir(o.out);
    write_result(dir, "result.json", scenario, c.power, result);
    write_text(dir / "trace.csv", trace_csv(result));
    fmt::print("{} {} total={:.6f} W m={}\n", result.algorithm, to_string(result.status), result.breakdown.total,
               result.m_star);
    return exit_code(result.status);
}

int cmd_trace(const Options& o) {
    const ExperimentConfig c = load_config("trace", o);
    const Scenario scenario = scenario_for(c, o);
    const SolveResult result = to_solve_result(solve_fixed_m(scenario, c.power, c.trace_m, c.solver));
    const fs::path dir(o.out);
    write_result(dir, "result.json", scenario, c.power, result);
    write_text(dir / "trace.csv", trace_csv(result));
    fmt::print("m={} {} outer_iterations={} total={:.6f} W\n", c.trace_m, to_string(result.status),
               result.trace.size(), result.breakdown.total);
    return exit_code(result.status);
}

int cmd_sweep_load(const Options& o) {
    const ExperimentConfig c = load_config("sweep-load", o);
    const Scenario scenario = scenario_for(c, o);
    const auto rows = run_load_sweep(scenario, c.power, c.load_sweep);
    write_text(fs::path(o.out) / "load_sweep.csv", load_sweep_csv(rows));
    std::size_t feasible = 0;
    for (const auto& r : rows) feasible += r.feasible ? 1 : 0;
    fmt::print("{} points, {} feasible\n", rows.size(), feasible);
    return kExitOk;
}

int cmd_sweep_axis(const Options& o, const std::string& mode, SweepAxis axis) {
    const ExperimentConfig c = load_config(mode, o);
    const auto rows = run_axis_sweep(c, axis);
    const fs::path dir(o.out);
    write_text(dir / "sweep.csv", sweep_csv(rows));
    write_text(dir / "sweep_mean.csv", sweep_aggregate_csv(rows));
    for (const auto& r : rows)
        if (r.status == "error" || r.status == "non_converged")
            std::fprintf(stderr, "axis=%d seed=%llu %s: %s %s\n", r.axis, static_cast<unsigned long long>(r.seed),
                         to_string(r.algorithm).c_str(), r.status.c_str(), r.message.c_str());
    fmt::print("{} rows\n", rows.size());
    return all_terminal(rows) ? kExitOk : kExitNonConverged;
}

int cmd_baseline(const Options& o) {
    const ExperimentConfig c = load_config("baseline", o);
    const Scenario scenario = scenario_for(c, o);
    const fs::path dir(o.out);
    std::vector<Algorithm> algorithms{Algorithm::joint, Algorithm::esa, Algorithm::tpoa};
    if (!o.algorithms.empty()) {
        algorithms.clear();
        for (const auto& a : o.algorithms) algorithms.push_back(parse_algorithm(a));
    }
    std::string table = "algo,status,total,wtp,bpp,m_star\n";
    int code = kExitOk;
    for (Algorithm a : algorithms) {
        try {
            const SolveResult r = run_algorithm(scenario, c, a);
            write_result(dir, fmt::format("result_{}.json", to_string(a)), scenario, c.power, r);
            table += fmt::format("{},{},{:.9g},{:.9g},{:.9g},{}\n", to_string(a), to_string(r.status),
                                 r.breakdown.total, r.breakdown.wireless, r.breakdown.baseband, r.m_star);
            if (r.status == SolveStatus::non_converged) code = kExitNonConverged;
        } catch (const GuardError& e) {
            table += fmt::format("{},error,0,0,0,0\n", to_string(a));
            std::fprintf(stderr, "%s: %s\n", to_string(a).c_str(), e.what());
            code = kExitError;
        }
    }
    write_text(dir / "comparison.csv", table);
    std::fputs(table.c_str(), stdout);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint RRH transmission and BBU baseband power optimisation"};
    app.require_subcommand(1);
    Options o;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON config overlay")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seeds, "Seed list, comma separated")->delimiter(',');
        sub->add_option("--out", o.out, "Output directory");
    };
    const auto add_scenario = [&](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario_path, "Scenario JSON; generated from the config when absent")
            ->check(CLI::ExistingFile);
    };

    auto* generate_cmd = app.add_subcommand("generate", "Write scenario_<seed>.json for each seed");
    add_common(generate_cmd);

    auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario");
    add_common(solve_cmd);
    add_scenario(solve_cmd);
    solve_cmd->add_option("--algo", o.algorithms, "joint, esa or tpoa");
    solve_cmd->add_option("--grid", o.grid, "ESA grid points per RRH");
    solve_cmd->add_option("--jobs", o.jobs, "ESA worker threads");

    auto* trace_cmd = app.add_subcommand("trace", "Outer-iteration trace at a fixed BBU count");
    add_common(trace_cmd);
    add_scenario(trace_cmd);
    trace_cmd->add_option("--m", o.m, "Active BBUs");

    auto* load_cmd = app.add_subcommand("sweep-load", "Vary one RRH's power with the others fixed");
    add_common(load_cmd);
    add_scenario(load_cmd);

    auto* rrh_cmd = app.add_subcommand("sweep-rrh", "Sweep the number of RRHs");
    auto* users_cmd = app.add_subcommand("sweep-users", "Sweep the users per RRH");
    for (auto* sub : {rrh_cmd, users_cmd}) {
        add_common(sub);
        sub->add_option("--algo", o.algorithms, "Algorithms, comma separated")->delimiter(',');
        sub->add_option("--grid", o.grid, "ESA grid points per RRH");
        sub->add_option("--jobs", o.jobs, "Worker threads");
    }

    auto* baseline_cmd = app.add_subcommand("baseline", "Compare joint, ESA and TPOA on one scenario");
    add_common(baseline_cmd);
    add_scenario(baseline_cmd);
    baseline_cmd->add_option("--algo", o.algorithms, "Algorithms, comma separated")->delimiter(',');
    baseline_cmd->add_option("--grid", o.grid, "ESA grid points per RRH");
    baseline_cmd->add_option("--jobs", o.jobs, "ESA worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (generate_cmd->parsed()) return cmd_generate(o);
        if (solve_cmd->parsed()) return cmd_solve(o);
        if (trace_cmd->parsed()) return cmd_trace(o);
        if (load_cmd->parsed()) return cmd_sweep_load(o);
        if (rrh_cmd->parsed()) return cmd_sweep_axis(o, "sweep-rrh", SweepAxis::rrh);
        if (users_cmd->parsed()) return cmd_sweep_axis(o, "sweep-users", SweepAxis::users);
        if (baseline_cmd->parsed()) return cmd_baseline(o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
