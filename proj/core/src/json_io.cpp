#include "json_io.hpp"

#include <fmt/format.h>

namespace cranopt::detail {

namespace {

template <class T>
void take(const json& j, const char* key, T& field) {
    if (!j.contains(key)) return;
    try {
        field = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("field '{}': {}", key, e.what()));
    }
}

void take_power(const json& j, const char* key, double& field) {
    if (j.contains(key)) field = power_from_json(j.at(key), key);
}

json watts(double v) { return json{{"value", v}, {"unit", "w"}}; }

void require_object(const json& j, const char* what) {
    if (!j.is_object()) throw ValidationError(fmt::format("{} must be an object", what));
}

}  // namespace

std::string layout_name(Layout layout) { return layout == Layout::hexagonal ? "hexagonal" : "line"; }

Layout parse_layout(const std::string& name) {
    if (name == "hexagonal") return Layout::hexagonal;
    if (name == "line") return Layout::line;
    throw ValidationError(fmt::format("unknown layout '{}'", name));
}

json to_json(const ScenarioConfig& c) {
    return json{{"n_rrh", c.n_rrh},
                {"users_per_rrh", c.users_per_rrh},
                {"inter_site_distance_m", c.inter_site_distance_m},
                {"min_distance_m", c.min_distance_m},
                {"pathloss", {{"intercept_db", c.pathloss.intercept_db}, {"slope_db", c.pathloss.slope_db}}},
                {"shadowing_sigma_db", c.shadowing_sigma_db},
                {"noise_density_dbm_hz", c.noise_density_dbm_hz},
                {"bandwidth_hz", c.bandwidth_hz},
                {"demand_bps", c.demand_bps},
                {"seed", c.seed},
                {"layout", layout_name(c.layout)},
                {"rb_bandwidth_hz", c.rb_bandwidth_hz},
                {"rb_duration_s", c.rb_duration_s},
                {"max_sampling_attempts", c.max_sampling_attempts}};
}

void merge_json(const json& j, ScenarioConfig& c) {
    require_object(j, "scenario config");
    take(j, "n_rrh", c.n_rrh);
    take(j, "users_per_rrh", c.users_per_rrh);
    take(j, "inter_site_distance_m", c.inter_site_distance_m);
    take(j, "min_distance_m", c.min_distance_m);
    if (j.contains("pathloss")) {
        const json& pl = j.at("pathloss");
        require_object(pl, "pathloss");
        take(pl, "intercept_db", c.pathloss.intercept_db);
        take(pl, "slope_db", c.pathloss.slope_db);
    }
    take(j, "shadowing_sigma_db", c.shadowing_sigma_db);
    take(j, "noise_density_dbm_hz", c.noise_density_dbm_hz);
    take(j, "bandwidth_hz", c.bandwidth_hz);
    take(j, "demand_bps", c.demand_bps);
    take(j, "seed", c.seed);
    if (j.contains("layout")) {
        std::string name;
        take(j, "layout", name);
        c.layout = parse_layout(name);
    }
    take(j, "rb_bandwidth_hz", c.rb_bandwidth_hz);
    take(j, "rb_duration_s", c.rb_duration_s);
    take(j, "max_sampling_attempts", c.max_sampling_attempts);
}

json to_json(const PowerParams& p) {
    return json{{"eta", p.eta},           {"p_rf", watts(p.p_rf)},   {"p0", watts(p.p0)},
                {"pmax_bbu", watts(p.pmax_bbu)}, {"delta_p", p.delta_p}, {"x_cap", p.x_cap},
                {"kappa", p.kappa},       {"p_min", watts(p.p_min)}, {"p_max", watts(p.p_max)},
                {"m_max", p.m_max}};
}

void merge_json(const json& j, PowerParams& p) {
    require_object(j, "power config");
    take(j, "eta", p.eta);
    take_power(j, "p_rf", p.p_rf);
    take_power(j, "p0", p.p0);
    take_power(j, "pmax_bbu", p.pmax_bbu);
    take(j, "delta_p", p.delta_p);
    take(j, "x_cap", p.x_cap);
    take(j, "kappa", p.kappa);
    take_power(j, "p_min", p.p_min);
    take_power(j, "p_max", p.p_max);
    take(j, "m_max", p.m_max);
}

json to_json(const SolverConfig& c) {
    return json{{"eps_outer", c.eps_outer},
                {"eps_s", c.eps_s},
                {"eps_p", c.eps_p},
                {"xi", c.xi},
                {"max_s_iter", c.max_s_iter},
                {"max_multiplier_iter", c.max_multiplier_iter},
                {"max_outer", c.max_outer},
                {"dual_update_direction",
                 c.dual_update_direction == DualUpdateDirection::ascent ? "ascent" : "paper_literal"},
                {"p_step_rule", c.p_step_rule == PStepRule::priced ? "priced" : "paper_literal"},
                {"feasibility_tol", c.feasibility_tol},
                {"max_backtracks", c.max_backtracks},
                {"max_expansions", c.max_expansions},
                {"scan_points", c.scan_points}};
}

void merge_json(const json& j, SolverConfig& c) {
    require_object(j, "solver config");
    take(j, "eps_outer", c.eps_outer);
    take(j, "eps_s", c.eps_s);
    take(j, "eps_p", c.eps_p);
    take(j, "xi", c.xi);
    take(j, "max_s_iter", c.max_s_iter);
    take(j, "max_multiplier_iter", c.max_multiplier_iter);
    take(j, "max_outer", c.max_outer);
    if (j.contains("dual_update_direction")) {
        std::string v;
        take(j, "dual_update_direction", v);
        if (v == "ascent")
            c.dual_update_direction = DualUpdateDirection::ascent;
        else if (v == "paper_literal")
            c.dual_update_direction = DualUpdateDirection::paper_literal;
        else
            throw ValidationError(fmt::format("unknown dual_update_direction '{}'", v));
    }
    if (j.contains("p_step_rule")) {
        std::string v;
        take(j, "p_step_rule", v);
        if (v == "priced")
            c.p_step_rule = PStepRule::priced;
        else if (v == "paper_literal")
            c.p_step_rule = PStepRule::paper_literal;
        else
            throw ValidationError(fmt::format("unknown p_step_rule '{}'", v));
    }
    take(j, "feasibility_tol", c.feasibility_tol);
    take(j, "max_backtracks", c.max_backtracks);
    take(j, "max_expansions", c.max_expansions);
    take(j, "scan_points", c.scan_points);
}

json to_json(const EsaConfig& c) {
    return json{{"grid_points", c.grid_points},
                {"spacing", c.spacing == GridSpacing::log_dbm ? "log_dbm" : "linear_watt"},
                {"threads", c.threads},
                {"max_evaluations", c.max_evaluations},
                {"fixed_point_tol", c.fixed_point.tol},
                {"fixed_point_max_iter", c.fixed_point.max_iter}};
}

void merge_json(const json& j, EsaConfig& c) {
    require_object(j, "esa config");
    take(j, "grid_points", c.grid_points);
    if (j.contains("spacing")) {
        std::string v;
        take(j, "spacing", v);
        if (v == "log_dbm")
            c.spacing = GridSpacing::log_dbm;
        else if (v == "linear_watt")
            c.spacing = GridSpacing::linear_watt;
        else
            throw ValidationError(fmt::format("unknown grid spacing '{}'", v));
    }
    take(j, "threads", c.threads);
    take(j, "max_evaluations", c.max_evaluations);
    take(j, "fixed_point_tol", c.fixed_point.tol);
    take(j, "fixed_point_max_iter", c.fixed_point.max_iter);
}

void merge_json(const json& j, TpoaConfig& c) {
    require_object(j, "tpoa config");
    take(j, "rel_tol", c.rel_tol);
    take(j, "max_sweeps", c.max_sweeps);
}

double power_from_json(const json& v, const char* key) {
    if (v.is_number()) return v.get<double>();
    if (!v.is_object() || !v.contains("value") || !v.at("value").is_number())
        throw ValidationError(fmt::format("field '{}' must be a number or {{\"value\", \"unit\"}}", key));
    const double value = v.at("value").get<double>();
    const json unit = v.value("unit", json("w"));
    if (unit == "w") return value;
    if (unit == "dbm") return dbm_to_watts(value);
    throw ValidationError(fmt::format("field '{}' has unknown unit {}", key, unit.dump()));
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ValidationError("expected an array of numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

const json& require(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) throw ValidationError(fmt::format("{} is missing '{}'", what, key));
    return j.at(key);
}

}  // namespace cranopt::detail
