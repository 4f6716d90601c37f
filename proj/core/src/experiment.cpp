#include "cranopt/experiment.hpp"

#include "json_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace cranopt {

namespace {

using detail::json;
using Index = Eigen::Index;

std::vector<std::uint64_t> default_seeds() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::string num(double v) { return fmt::format("{:.9g}", v); }

json breakdown_json(const PowerBreakdown& b) {
    return json{{"total", b.total}, {"wireless", b.wireless}, {"circuit", b.circuit},
                {"baseband", b.baseband}, {"m", b.m},          {"y", b.y}};
}

void check_type(const json& doc, const char* key, json::value_t type, const char* what) {
    const json& v = detail::require(doc, key, what);
    const bool ok = type == json::value_t::number_float ? v.is_number()
                    : type == json::value_t::number_integer ? v.is_number_integer()
                                                            : v.type() == type;
    if (!ok) throw ValidationError(fmt::format("{} field '{}' has the wrong type", what, key));
}

void check_number_array(const json& doc, const char* key, const char* what) {
    const json& v = detail::require(doc, key, what);
    if (!v.is_array()) throw ValidationError(fmt::format("{} field '{}' must be an array", what, key));
    for (const json& e : v)
        if (!e.is_number()) throw ValidationError(fmt::format("{} field '{}' must hold numbers", what, key));
}

SweepRow row_from(int axis, std::uint64_t seed, Algorithm algorithm, const SolveResult& r) {
    SweepRow row;
    row.axis = axis;
    row.seed = seed;
    row.algorithm = algorithm;
    row.status = to_string(r.status);
    row.message = r.message;
    if (r.status != SolveStatus::infeasible) {
        row.total = r.breakdown.total;
        row.wtp = r.breakdown.wireless;
        row.bpp = r.breakdown.baseband;
        row.m_star = r.m_star;
    }
    return row;
}

}  // namespace

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::joint: return "joint";
        case Algorithm::esa: return "esa";
        case Algorithm::tpoa: return "tpoa";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "joint") return Algorithm::joint;
    if (name == "esa") return Algorithm::esa;
    if (name == "tpoa") return Algorithm::tpoa;
    throw ValidationError(fmt::format("unknown algorithm '{}'", name));
}

ExperimentConfig preset(std::string_view mode) {
    ExperimentConfig c;
    if (mode == "solve" || mode == "baseline" || mode == "generate" || mode == "sweep-load") return c;
    if (mode == "trace") {
        c.scenario.n_rrh = 6;
        c.scenario.users_per_rrh = 12;
        c.scenario.demand_bps = 1e6;
        c.trace_m = 3;
        return c;
    }
    if (mode == "sweep-rrh") {
        c.scenario.users_per_rrh = 18;
        c.scenario.demand_bps = 750e3;
        c.axis_sweep.values = {3, 4, 5, 6, 7, 8, 9};
        c.axis_sweep.seeds = default_seeds();
        return c;
    }
    if (mode == "sweep-users") {
        c.scenario.n_rrh = 9;
        c.scenario.demand_bps = 500e3;
        c.axis_sweep.values = {6, 9, 12, 15, 18, 21, 24};
        c.axis_sweep.seeds = default_seeds();
        return c;
    }
    throw ValidationError(fmt::format("unknown mode '{}'", mode));
}

ExperimentConfig merge_experiment_config(ExperimentConfig base, std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!doc.is_object()) throw ValidationError("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        static const char* known[] = {"scenario", "power", "solver", "esa", "tpoa", "sweep", "trace"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw ValidationError(fmt::format("unknown config section '{}'", key));
    }
    try {
        if (doc.contains("scenario")) detail::merge_json(doc["scenario"], base.scenario);
        if (doc.contains("power")) detail::merge_json(doc["power"], base.power);
        if (doc.contains("solver")) detail::merge_json(doc["solver"], base.solver);
        if (doc.contains("esa")) detail::merge_json(doc["esa"], base.esa);
        if (doc.contains("tpoa")) detail::merge_json(doc["tpoa"], base.tpoa);
        if (doc.contains("trace")) base.trace_m = doc["trace"].value("m", base.trace_m);
        if (doc.contains("sweep")) {
            const json& s = doc["sweep"];
            LoadSweepConfig& l = base.load_sweep;
            AxisSweepConfig& a = base.axis_sweep;
            l.varied_rrh = s.value("varied_rrh", l.varied_rrh);
            l.lo_dbm = s.value("lo_dbm", l.lo_dbm);
            l.hi_dbm = s.value("hi_dbm", l.hi_dbm);
            l.points = s.value("points", l.points);
            l.m = s.value("m", l.m);
            if (s.contains("fixed_power")) l.fixed_power_w = detail::power_from_json(s["fixed_power"], "fixed_power");
            if (s.contains("values")) a.values = s["values"].get<std::vector<int>>();
            if (s.contains("seeds")) a.seeds = s["seeds"].get<std::vector<std::uint64_t>>();
            if (s.contains("algorithms")) {
                a.algorithms.clear();
                for (const auto& name : s["algorithms"]) a.algorithms.push_back(parse_algorithm(name.get<std::string>()));
            }
            a.jobs = s.value("jobs", a.jobs);
        }
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("config: {}", e.what()));
    }
    return base;
}

SolveResult run_algorithm(const Scenario& scenario, const ExperimentConfig& config, Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::joint: return solve(scenario, config.power, config.solver);
        case Algorithm::esa: return esa(scenario, config.power, config.esa);
        case Algorithm::tpoa: return tpoa(scenario, config.power, config.tpoa);
    }
    throw ValidationError("unknown algorithm");
}

SolveResult to_solve_result(const FixedMResult& fixed) {
    SolveResult out;
    out.algorithm = "joint";
    out.status = fixed.status;
    out.message = fixed.message;
    out.per_m.push_back({fixed.m, fixed.status == SolveStatus::infeasible ? 0.0 : fixed.breakdown.total,
                         fixed.status, fixed.outer_iterations});
    out.trace = fixed.trace;
    out.initial_total = fixed.initial_total;
    if (fixed.status != SolveStatus::infeasible) {
        out.p_star = fixed.p;
        out.x_star = fixed.x;
        out.m_star = fixed.m;
        out.breakdown = fixed.breakdown;
    }
    return out;
}

std::string result_document(const Scenario& scenario, const PowerParams& params, const SolveResult& r) {
    json doc;
    doc["algorithm"] = r.algorithm;
    doc["status"] = to_string(r.status);
    doc["message"] = r.message;
    doc["scenario"] = json{{"seed", scenario.seed()}, {"n_rrh", scenario.num_rrh()}, {"n_users", scenario.num_users()}};
    doc["m_star"] = r.m_star;
    doc["p_star_w"] = detail::vector_to_json(r.p_star);
    json dbm = json::array();
    for (Index i = 0; i < r.p_star.size(); ++i) dbm.push_back(watts_to_dbm(r.p_star[i]));
    doc["p_star_dbm"] = dbm;
    doc["x_star"] = detail::vector_to_json(r.x_star);
    doc["breakdown"] = breakdown_json(r.breakdown);
    json per_m = json::array();
    for (const PerMResult& m : r.per_m)
        per_m.push_back(json{{"m", m.m}, {"total", m.total}, {"status", to_string(m.status)},
                             {"outer_iterations", m.outer_iterations}});
    doc["per_m"] = per_m;
    doc["outer_iterations"] = r.trace.size();
    doc["initial_total"] = r.initial_total;
    doc["clamped"] = r.clamped;
    if (r.status != SolveStatus::infeasible && r.p_star.size() > 0) {
        const FeasibilityReport f = check_p0_feasibility(scenario, params, r.p_star, r.x_star, r.m_star);
        doc["feasibility"] = json{{"nlce", f.nlce},
                                  {"bbu", f.bbu},
                                  {"load_bounds", f.load_bounds},
                                  {"power_bounds", f.power_bounds},
                                  {"residual", f.residual}};
    } else {
        doc["feasibility"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

void validate_result_document(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("result is not valid JSON: {}", e.what()));
    }
    const char* what = "result";
    if (!doc.is_object()) throw ValidationError("result must be an object");
    check_type(doc, "algorithm", json::value_t::string, what);
    check_type(doc, "status", json::value_t::string, what);
    const std::string status = doc["status"];
    if (status != "optimal" && status != "infeasible" && status != "non_converged")
        throw ValidationError(fmt::format("result status '{}' is not recognised", status));
    check_type(doc, "message", json::value_t::string, what);
    check_type(doc, "scenario", json::value_t::object, what);
    check_type(doc, "m_star", json::value_t::number_integer, what);
    check_number_array(doc, "p_star_w", what);
    check_number_array(doc, "p_star_dbm", what);
    check_number_array(doc, "x_star", what);
    if (doc["p_star_w"].size() != doc["x_star"].size())
        throw ValidationError("p_star_w and x_star differ in length");
    check_type(doc, "breakdown", json::value_t::object, what);
    for (const char* key : {"total", "wireless", "circuit", "baseband", "y"})
        check_type(doc["breakdown"], key, json::value_t::number_float, "breakdown");
    check_type(doc["breakdown"], "m", json::value_t::number_integer, "breakdown");
    check_type(doc, "per_m", json::value_t::array, what);
    for (const json& m : doc["per_m"]) {
        check_type(m, "m", json::value_t::number_integer, "per_m");
        check_type(m, "total", json::value_t::number_float, "per_m");
        check_type(m, "status", json::value_t::string, "per_m");
        check_type(m, "outer_iterations", json::value_t::number_integer, "per_m");
    }
    check_type(doc, "outer_iterations", json::value_t::number_integer, what);
    check_type(doc, "initial_total", json::value_t::number_float, what);
    check_type(doc, "clamped", json::value_t::array, what);
    const json& f = detail::require(doc, "feasibility", what);
    if (status == "optimal" && !f.is_object()) throw ValidationError("optimal result lacks a feasibility report");
    if (f.is_object()) {
        for (const char* key : {"nlce", "bbu", "load_bounds", "power_bounds"})
            check_type(f, key, json::value_t::boolean, "feasibility");
        check_type(f, "residual", json::value_t::number_float, "feasibility");
    }
}

std::string trace_csv(const SolveResult& result) {
    std::string out = "iteration,p_total,dp2,dual,max_violation,step_fraction\n";
    for (const OuterRecord& r : result.trace)
        out += fmt::format("{},{},{},{},{},{}\n", r.iteration, num(r.objective), num(r.dp2), num(r.dual),
                           num(r.max_violation), num(r.step_fraction));
    return out;
}

std::vector<LoadSweepRow> run_load_sweep(const Scenario& scenario, const PowerParams& params,
                                         const LoadSweepConfig& config) {
    params.validate();
    const std::size_t n = scenario.num_rrh();
    if (config.varied_rrh >= n) throw DomainError("varied RRH is out of range");
    if (config.points < 2) throw ValidationError("a load sweep needs at least 2 points");
    if (config.m < 1) throw ValidationError("a load sweep needs at least one BBU");
    const Index vi = static_cast<Index>(config.varied_rrh);
    Vector p = Vector::Constant(static_cast<Index>(n), config.fixed_power_w.value_or(params.p_max));
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<LoadSweepRow> rows;
    rows.reserve(static_cast<std::size_t>(config.points));
    for (int k = 0; k < config.points; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(config.points - 1);
        p[vi] = dbm_to_watts(config.lo_dbm + (config.hi_dbm - config.lo_dbm) * frac);
        LoadSweepRow row;
        row.p_w = p[vi];
        const FixedPointResult fp = nlce_fixed_point(scenario, p);
        if (!fp.feasible()) {
            row.x = row.wtp = row.bpp = row.total = row.net_wtp = row.net_bpp = row.net_total = nan;
            rows.push_back(row);
            continue;
        }
        const Vector& x = fp.x;
        row.x = x[vi];
        row.wtp = params.a() * p[vi] * x[vi];
        row.bpp = params.b() * x[vi];
        row.total = row.wtp + row.bpp + params.p_rf;
        row.net_wtp = params.a() * p.dot(x);
        row.net_bpp = config.m * params.p0 + params.b() * x.sum();
        row.net_total = row.net_wtp + row.net_bpp + static_cast<double>(n) * params.p_rf;
        row.feasible = x.maxCoeff() <= 1.0 && required_bbus(x, params) <= config.m;
        rows.push_back(row);
    }
    return rows;
}

std::string load_sweep_csv(const std::vector<LoadSweepRow>& rows) {
    std::string out = "p_w,p_dbm,x,wtp,bpp,total,net_wtp,net_bpp,net_total,feasible\n";
    for (const LoadSweepRow& r : rows)
        out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", num(r.p_w), num(watts_to_dbm(r.p_w)), num(r.x),
                           num(r.wtp), num(r.bpp), num(r.total), num(r.net_wtp), num(r.net_bpp),
                           num(r.net_total), r.feasible ? 1 : 0);
    return out;
}

std::vector<SweepRow> run_axis_sweep(const ExperimentConfig& config, SweepAxis axis) {
    const AxisSweepConfig& a = config.axis_sweep;
    if (a.values.empty() || a.seeds.empty() || a.algorithms.empty())
        throw ValidationError("sweep values, seeds and algorithms must be nonempty");
    if (a.jobs < 1) throw ValidationError("jobs must be at least 1");

    struct Task {
        int value;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (int v : a.values)
        for (std::uint64_t seed : a.seeds) tasks.push_back({v, seed});
    std::vector<std::vector<SweepRow>> results(tasks.size());

    const auto run_task = [&](std::size_t t) {
        const Task& task = tasks[t];
        ScenarioConfig sc = config.scenario;
        (axis == SweepAxis::rrh ? sc.n_rrh : sc.users_per_rrh) = task.value;
        sc.seed = task.seed;
        std::vector<SweepRow>& rows = results[t];
        std::optional<Scenario> scenario;
        std::string failure;
        try {
            scenario.emplace(generate(sc));
        } catch (const Error& e) {
            failure = e.what();
        }
        for (Algorithm algorithm : a.algorithms) {
            if (!scenario) {
                rows.push_back({task.value, task.seed, algorithm, "error", 0.0, 0.0, 0.0, 0, failure});
                continue;
            }
            try {
                rows.push_back(row_from(task.value, task.seed, algorithm, run_algorithm(*scenario, config, algorithm)));
            } catch (const Error& e) {
                rows.push_back({task.value, task.seed, algorithm, "error", 0.0, 0.0, 0.0, 0, e.what()});
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(a.jobs), tasks.size());
    if (workers <= 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < tasks.size(); t = next++) run_task(t);
            });
    }

    std::vector<SweepRow> rows;
    for (auto& group : results)
        for (auto& row : group) rows.push_back(std::move(row));
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "axis,seed,algo,total,wtp,bpp,m_star,status\n";
    for (const SweepRow& r : rows)
        out += fmt::format("{},{},{},{},{},{},{},{}\n", r.axis, r.seed, to_string(r.algorithm), num(r.total),
                           num(r.wtp), num(r.bpp), r.m_star, r.status);
    return out;
}

std::string sweep_aggregate_csv(const std::vector<SweepRow>& rows) {
    struct Acc {
        double total = 0.0, wtp = 0.0, bpp = 0.0, m = 0.0;
        int count = 0;
        int rows = 0;
    };
    std::map<std::pair<int, int>, Acc> acc;
    for (const SweepRow& r : rows) {
        Acc& a = acc[{r.axis, static_cast<int>(r.algorithm)}];
        ++a.rows;
        if (r.status != "optimal") continue;
        a.total += r.total;
        a.wtp += r.wtp;
        a.bpp += r.bpp;
        a.m += r.m_star;
        ++a.count;
    }
    std::string out = "axis,algo,mean_total,mean_wtp,mean_bpp,mean_m_star,optimal,rows\n";
    for (const auto& [key, a] : acc) {
        const double c = a.count > 0 ? a.count : std::numeric_limits<double>::quiet_NaN();
        out += fmt::format("{},{},{},{},{},{},{},{}\n", key.first, to_string(static_cast<Algorithm>(key.second)),
                           num(a.total / c), num(a.wtp / c), num(a.bpp / c), num(a.m / c), a.count, a.rows);
    }
    return out;
}

bool all_terminal(const std::vector<SweepRow>& rows) {
    return std::all_of(rows.begin(), rows.end(),
                       [](const SweepRow& r) { return r.status == "optimal" || r.status == "infeasible"; });
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write {}", path.string()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(fmt::format("cannot write {}", path.string()));
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot read {}", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace cranopt
