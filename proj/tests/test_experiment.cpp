#include "cranopt/experiment.hpp"

#include "support.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <sstream>

using namespace cranopt;

namespace {

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("algorithm names") {
    for (Algorithm a : {Algorithm::joint, Algorithm::esa, Algorithm::tpoa}) CHECK(parse_algorithm(to_string(a)) == a);
    CHECK_THROWS_AS(parse_algorithm("simplex"), ValidationError);
}

TEST_CASE("presets") {
    CHECK(preset("trace").scenario.n_rrh == 6);
    CHECK(preset("trace").scenario.demand_bps == 1e6);
    CHECK(preset("sweep-rrh").axis_sweep.values.front() == 3);
    CHECK(preset("sweep-rrh").axis_sweep.values.back() == 9);
    CHECK(preset("sweep-users").scenario.n_rrh == 9);
    CHECK(preset("sweep-users").scenario.demand_bps == 500e3);
    CHECK(preset("solve").scenario == ScenarioConfig{});
    CHECK_THROWS_AS(preset("nope"), ValidationError);
}

TEST_CASE("config overlay with units") {
    const ExperimentConfig c = merge_experiment_config(preset("solve"), R"({
        "scenario": {"n_rrh": 4, "layout": "line"},
        "power": {"p_max": {"value": 40, "unit": "dbm"}, "p0": 0, "delta_p": 0},
        "solver": {"eps_outer": 1e-3, "p_step_rule": "paper_literal"},
        "esa": {"grid_points": 12, "spacing": "linear_watt"},
        "sweep": {"points": 9, "fixed_power": {"value": 30, "unit": "dbm"}, "algorithms": ["tpoa"]},
        "trace": {"m": 2}
    })");
    CHECK(c.scenario.n_rrh == 4);
    CHECK(c.scenario.layout == Layout::line);
    CHECK(c.power.p_max == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(c.power.p0 == 0.0);
    CHECK(c.solver.eps_outer == 1e-3);
    CHECK(c.solver.p_step_rule == PStepRule::paper_literal);
    CHECK(c.esa.grid_points == 12);
    CHECK(c.esa.spacing == GridSpacing::linear_watt);
    CHECK(c.load_sweep.points == 9);
    REQUIRE(c.load_sweep.fixed_power_w.has_value());
    CHECK(*c.load_sweep.fixed_power_w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.axis_sweep.algorithms == std::vector<Algorithm>{Algorithm::tpoa});
    CHECK(c.trace_m == 2);
}

TEST_CASE("config overlay rejects bad input") {
    CHECK_THROWS_AS(merge_experiment_config(preset("solve"), "[1]"), ValidationError);
    CHECK_THROWS_AS(merge_experiment_config(preset("solve"), R"({"solvr": {}})"), ValidationError);
    CHECK_THROWS_AS(merge_experiment_config(preset("solve"), R"({"power": {"p_max": {"value": 1, "unit": "hp"}}})"),
                    ValidationError);
    CHECK_THROWS_AS(merge_experiment_config(preset("solve"), R"({"solver": {"max_outer": "ten"}})"), ValidationError);
    CHECK_THROWS_AS(merge_experiment_config(preset("solve"), "{"), ValidationError);
}

TEST_CASE("result documents validate and are reproducible") {
    const ExperimentConfig c = preset("solve");
    const Scenario sc = support::small_random(3, 3, 4, 1e6);
    for (Algorithm a : {Algorithm::joint, Algorithm::tpoa}) {
        const SolveResult r = run_algorithm(sc, c, a);
        const std::string doc = result_document(sc, c.power, r);
        CHECK_NOTHROW(validate_result_document(doc));
        CHECK(doc == result_document(sc, c.power, run_algorithm(sc, c, a)));
        const auto j = nlohmann::json::parse(doc);
        CHECK(j["algorithm"] == to_string(a));
        CHECK(j["p_star_w"].size() == 3);
        CHECK(j["feasibility"]["nlce"] == true);
    }
    const Scenario heavy = support::small_random(4, 3, 6, 2e7);
    const SolveResult none = run_algorithm(heavy, c, Algorithm::joint);
    CHECK_NOTHROW(validate_result_document(result_document(heavy, c.power, none)));
}

TEST_CASE("result validation catches layout errors") {
    const ExperimentConfig c = preset("solve");
    const Scenario sc = support::small_random(3, 2, 2, 1e6);
    auto j = nlohmann::json::parse(result_document(sc, c.power, run_algorithm(sc, c, Algorithm::tpoa)));
    auto missing = j;
    missing.erase("breakdown");
    CHECK_THROWS_AS(validate_result_document(missing.dump()), ValidationError);
    auto bad_status = j;
    bad_status["status"] = "great";
    CHECK_THROWS_AS(validate_result_document(bad_status.dump()), ValidationError);
    auto ragged = j;
    ragged["x_star"].push_back(0.5);
    CHECK_THROWS_AS(validate_result_document(ragged.dump()), ValidationError);
    auto no_audit = j;
    no_audit["feasibility"] = nullptr;
    CHECK_THROWS_AS(validate_result_document(no_audit.dump()), ValidationError);
    CHECK_THROWS_AS(validate_result_document("not json"), ValidationError);
}

TEST_CASE("trace CSV has one row per outer iteration") {
    const ExperimentConfig c = preset("trace");
    ScenarioConfig sc = c.scenario;
    sc.seed = 3;
    const Scenario s = generate(sc);
    const SolveResult r = to_solve_result(solve_fixed_m(s, c.power, 3, c.solver));
    const auto rows = lines(trace_csv(r));
    REQUIRE(!rows.empty());
    CHECK(rows.front() == "iteration,p_total,dp2,dual,max_violation,step_fraction");
    CHECK(rows.size() == r.trace.size() + 1);
    CHECK(trace_csv(r) == trace_csv(to_solve_result(solve_fixed_m(s, c.power, 3, c.solver))));
}

TEST_CASE("load sweep keeps infeasible points and orders the baseband column") {
    const ExperimentConfig c = preset("sweep-load");
    const Scenario s = generate(c.scenario);
    LoadSweepConfig lc = c.load_sweep;
    lc.points = 41;
    const auto rows = run_load_sweep(s, c.power, lc);
    REQUIRE(rows.size() == 41);
    int feasible = 0;
    for (const auto& r : rows) {
        if (!r.feasible) continue;
        ++feasible;
        CHECK(r.total == doctest::Approx(r.wtp + r.bpp + c.power.p_rf).epsilon(1e-14));
        CHECK(r.net_total >= r.total);
    }
    CHECK(feasible > 2);
    CHECK(feasible < 41);
    // Baseband power rises with load.
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows.size(); ++k)
            if (rows[i].feasible && rows[k].feasible && rows[i].x <= rows[k].x) CHECK(rows[i].bpp <= rows[k].bpp);
    const auto csv = lines(load_sweep_csv(rows));
    CHECK(csv.size() == 42);
    CHECK(csv.front() == "p_w,p_dbm,x,wtp,bpp,total,net_wtp,net_bpp,net_total,feasible");

    lc.varied_rrh = 9;
    CHECK_THROWS_AS(run_load_sweep(s, c.power, lc), DomainError);
}

TEST_CASE("axis sweep output does not depend on the worker count") {
    ExperimentConfig c = preset("sweep-rrh");
    c.axis_sweep.values = {2, 3};
    c.axis_sweep.seeds = {1, 2, 3};
    c.scenario.users_per_rrh = 4;
    c.axis_sweep.jobs = 1;
    const auto serial = run_axis_sweep(c, SweepAxis::rrh);
    c.axis_sweep.jobs = 4;
    const auto parallel = run_axis_sweep(c, SweepAxis::rrh);
    CHECK(sweep_csv(serial) == sweep_csv(parallel));
    CHECK(sweep_aggregate_csv(serial) == sweep_aggregate_csv(parallel));
    CHECK(serial.size() == 12);
    CHECK(serial[0].axis == 2);
    CHECK(serial[0].algorithm == Algorithm::joint);
    CHECK(serial[1].algorithm == Algorithm::tpoa);
    CHECK(all_terminal(serial));

    const auto agg = lines(sweep_aggregate_csv(serial));
    CHECK(agg.front() == "axis,algo,mean_total,mean_wtp,mean_bpp,mean_m_star,optimal,rows");
    CHECK(agg.size() == 5);
}

TEST_CASE("axis sweep turns generation failures into error rows") {
    ExperimentConfig c = preset("sweep-users");
    c.scenario.min_distance_m = 249.0;
    c.scenario.max_sampling_attempts = 1;
    c.axis_sweep.values = {6};
    c.axis_sweep.seeds = {1};
    const auto rows = run_axis_sweep(c, SweepAxis::users);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == "error");
    CHECK_FALSE(all_terminal(rows));
}
