// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "cranopt/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

using namespace cranopt;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    if (!pass) ++failures;
    fmt::print("{} criterion {}: {} [{}]\n", pass ? "PASS" : "FAIL", id, what, detail);
    std::fflush(stdout);
}

std::vector<std::uint64_t> seeds_1_to_10() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

int workers() { return static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency()))); }

Scenario two_cell(std::uint64_t seed) {
    ScenarioConfig c;
    c.n_rrh = 2;
    c.users_per_rrh = 2;
    c.demand_bps = 4e6;
    c.seed = seed;
    return generate(c);
}

void criterion_1() {
    const PowerParams params;
    EsaConfig ec;
    ec.grid_points = 64;
    ec.spacing = GridSpacing::log_dbm;
    double worst_gap = 0.0;
    double slowest = 0.0;
    bool ok = true;
    for (std::uint64_t seed : seeds_1_to_10()) {
        const Scenario sc = two_cell(seed);
        const auto start = std::chrono::steady_clock::now();
        const SolveResult joint = solve(sc, params);
        const SolveResult oracle = esa(sc, params, ec);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        slowest = std::max(slowest, secs);
        if (joint.status != SolveStatus::optimal || oracle.status != SolveStatus::optimal) {
            ok = false;
            continue;
        }
        const double gap = std::abs(joint.breakdown.total - oracle.breakdown.total) / oracle.breakdown.total;
        worst_gap = std::max(worst_gap, gap);
        ok = ok && gap <= 0.02 && secs < 60.0;
    }
    report(1, ok, "joint total within 2% of ESA (G = 64) on 10 two-cell scenarios, each under 60 s",
           fmt::format("worst gap {:.3f}%, slowest {:.2f} s", 100.0 * worst_gap, slowest));
}

void criterion_2() {
    const ExperimentConfig c = preset("sweep-load");
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        ScenarioConfig sc = c.scenario;
        sc.seed = seed;
        const auto rows = run_load_sweep(generate(sc), c.power, c.load_sweep);
        std::vector<LoadSweepRow> feasible;
        for (const auto& r : rows)
            if (r.feasible) feasible.push_back(r);
        if (feasible.size() < 3) {
            ok = false;
            detail += fmt::format("seed {}: {} feasible points; ", seed, feasible.size());
            continue;
        }
        std::sort(feasible.begin(), feasible.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
        const auto best = std::min_element(feasible.begin(), feasible.end(),
                                           [](const auto& a, const auto& b) { return a.total < b.total; });
        const bool interior = best != feasible.begin() && best != feasible.end() - 1;
        bool bpp_monotone = true;
        for (std::size_t k = 1; k < feasible.size(); ++k) bpp_monotone = bpp_monotone && feasible[k].bpp >= feasible[k - 1].bpp;
        const bool wtp_order = feasible.back().wtp < feasible.front().wtp;
        ok = ok && interior && bpp_monotone && wtp_order;
        detail += fmt::format("seed {}: min at x={:.3f} in [{:.3f}, {:.3f}], wtp {:.3g} < {:.3g}; ", seed, best->x,
                              feasible.front().x, feasible.back().x, feasible.back().wtp, feasible.front().wtp);
    }
    report(2, ok, "load-sweep total has an interior minimum, baseband column nondecreasing, WTP falls with load",
           detail);
}

// Demand scale at which full-load operation puts the weakest cell at 10 p_min, so that
// every cell can reach full load inside the power range.
std::optional<Scenario> calibrated(const Scenario& base, const PowerParams& params) {
    double lo = std::log(1e-3), hi = std::log(1e3);
    const double target = 10.0 * params.p_min;
    const auto min_power = [&](double log_scale) -> double {
        const SolveResult r = tpoa(base.with_scaled_demands(std::exp(log_scale)), params);
        if (r.status != SolveStatus::optimal) return std::numeric_limits<double>::infinity();
        return r.clamped.empty() ? r.p_star.minCoeff() : 0.0;
    };
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (min_power(mid) < target ? lo : hi) = mid;
    }
    Scenario sc = base.with_scaled_demands(std::exp(lo));
    const SolveResult check = tpoa(sc, params);
    if (check.status != SolveStatus::optimal || !check.clamped.empty() || check.p_star.maxCoeff() >= params.p_max)
        return std::nullopt;
    return sc;
}

void criterion_3() {
    PowerParams params;
    params.p0 = 0.0;
    params.delta_p = 0.0;
    EsaConfig ec;
    ec.grid_points = 512;
    ec.threads = workers();
    double lowest = 1.0;
    bool ok = true;
    for (std::uint64_t seed : seeds_1_to_10()) {
        const auto sc = calibrated(two_cell(seed), params);
        if (!sc) {
            ok = false;
            continue;
        }
        const SolveResult r = esa(*sc, params, ec);
        if (r.status != SolveStatus::optimal) {
            ok = false;
            continue;
        }
        lowest = std::min(lowest, r.x_star.minCoeff());
    }
    ok = ok && lowest >= 0.99;
    report(3, ok, "with P0 = 0 and b = 0, ESA optima on 10 two-cell scenarios run at full load",
           fmt::format("lowest optimal load {:.4f} (G = 512)", lowest));
}

void criterion_4() {
    const PowerParams params;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int instances = 0;
    int draws = 0;
    double worst_drop = 0.0;
    double worst_excess = -std::numeric_limits<double>::infinity();
    while (instances < 100 && draws < 1000) {
        ++draws;
        ScenarioConfig c;
        c.n_rrh = 2 + static_cast<int>(rng() % 4);
        c.users_per_rrh = 1 + static_cast<int>(rng() % 6);
        c.demand_bps = 2e5 + 1.8e6 * unit(rng);
        c.layout = rng() % 2 ? Layout::line : Layout::hexagonal;
        c.seed = rng();
        const Scenario sc = generate(c);
        Vector p(c.n_rrh);
        for (int i = 0; i < c.n_rrh; ++i) p[i] = params.p_min * std::pow(params.p_max / params.p_min, unit(rng));
        const FixedPointResult fp = nlce_fixed_point(sc, p, {1e-13, 1000000});
        if (!fp.feasible()) continue;
        ++instances;
        const Vector bound = p.cwiseProduct(fp.x);
        const SStepResult st = s_step(sc, params, p, params.m_max, {}, true);
        for (std::size_t l = 0; l < st.iterates.size(); ++l) {
            const Vector& it = st.iterates[l];
            if (l > 0) worst_drop = std::max(worst_drop, ((st.iterates[l - 1] - it).cwiseQuotient(p)).maxCoeff());
            worst_excess = std::max(worst_excess, ((it - bound).cwiseQuotient(p)).maxCoeff());
        }
    }
    const bool ok = instances == 100 && worst_drop <= 1e-8 && worst_excess <= 1e-8;
    report(4, ok, "s iterates nondecreasing and bounded by p * x* on 100 random instances",
           fmt::format("{} instances, largest decrease {:.2e}, largest excess over bound {:.2e} (relative to p)",
                       instances, worst_drop, worst_excess));
}

void criterion_5() {
    const ExperimentConfig c = preset("trace");
    int within = 0;
    bool improved = true;
    std::string iters;
    for (std::uint64_t seed : seeds_1_to_10()) {
        ScenarioConfig sc = c.scenario;
        sc.seed = seed;
        const FixedMResult r = solve_fixed_m(generate(sc), c.power, 3, c.solver);
        const bool converged = r.status == SolveStatus::optimal;
        if (converged && r.outer_iterations <= 20) ++within;
        improved = improved && converged && r.breakdown.total <= r.initial_total;
        iters += fmt::format("{}{}", iters.empty() ? "" : ",", r.outer_iterations);
    }
    report(5, within >= 9 && improved,
           "6 RRHs, 3 BBUs, 1 Mbps: at most 20 outer iterations on 9 of 10 seeds, final total below the start",
           fmt::format("iterations per seed {}; {}/10 within bound", iters, within));
}

void criterion_6() {
    const PowerParams params;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto random_scenario = [&](int n) {
        ScenarioConfig c;
        c.n_rrh = n;
        c.users_per_rrh = 1 + static_cast<int>(rng() % 4);
        c.demand_bps = 3e5 + 1.7e6 * unit(rng);
        c.layout = Layout::line;
        c.seed = rng();
        return generate(c);
    };
    const auto random_power = [&](int n) {
        Vector p(n);
        for (int i = 0; i < n; ++i) p[i] = params.p_min * std::pow(params.p_max / params.p_min, unit(rng));
        return p;
    };

    double fd_worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Scenario sc = random_scenario(3);
        const Vector p = random_power(3);
        const Vector s = p.cwiseProduct(Vector::NullaryExpr(3, [&] { return unit(rng); }));
        const std::size_t i = static_cast<std::size_t>(trial % 3);
        const auto ii = static_cast<Eigen::Index>(i);
        Vector up = p, down = p;
        up[ii] *= 1.0 + 1e-6;
        down[ii] *= 1.0 - 1e-6;
        const double fd = (s_map(sc, s, up)[ii] - s_map(sc, s, down)[ii]) / (up[ii] - down[ii]);
        const double d = s_map_derivative(sc, s, p, i);
        fd_worst = std::max(fd_worst, std::abs(d - fd) / std::abs(fd));
    }

    double kkt_worst = 0.0;
    int interior = 0;
    double dual_worst = 0.0;
    SolverConfig ascent;
    ascent.xi = 1e-6;
    for (int trial = 0; trial < 50; ++trial) {
        const Scenario sc = random_scenario(3);
        const Vector p0 = random_power(3);
        const Vector s = p0.cwiseProduct(Vector::NullaryExpr(3, [&] { return 0.1 + 0.8 * unit(rng); }));
        Multipliers mult = Multipliers::zeros(3);
        for (Eigen::Index k = 0; k < 3; ++k) {
            mult.lambda[k] = params.b() * unit(rng);
            mult.mu[k] = 40.0 * params.a() * unit(rng);
        }
        mult.nu = 0.02 * unit(rng);
        Vector p(3);
        for (std::size_t k = 0; k < 3; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            p[kk] = kkt_power(sc, params, s, mult, k, ascent);
            if (p[kk] <= params.p_min || p[kk] >= params.p_max) continue;
            ++interior;
            const CellResponse cell(sc, s, k);
            const double res = kkt_residual(cell, s[kk], mult.lambda[kk], mult.mu[kk], mult.nu, params, p[kk]);
            const double scale = kkt_scale(cell, s[kk], mult.lambda[kk], mult.mu[kk], mult.nu, params, p[kk]);
            kkt_worst = std::max(kkt_worst, std::abs(res) / scale);
        }
        const int m = 1 + trial % 3;
        const double before = dual_value(sc, params, s, mult, m, ascent);
        const double after = dual_value(sc, params, s, update_multipliers(sc, params, p, s, mult, m, ascent), m, ascent);
        dual_worst = std::max(dual_worst, (before - after) / std::abs(before));
    }
    const bool ok = fd_worst <= 1e-5 && kkt_worst <= 1e-8 && interior > 0 && dual_worst <= 1e-12;
    report(6, ok, "derivative vs central differences, interior KKT residuals, dual ascent monotone",
           fmt::format("fd rel err {:.2e} (100 points), KKT rel residual {:.2e} ({} interior roots), "
                       "largest relative dual decrease {:.2e} (50 instances, xi = 1e-6)",
                       fd_worst, kkt_worst, interior, std::max(0.0, dual_worst)));
}

void criterion_7() {
    bool means_ok = true;
    bool m_ok = true;
    std::string detail;
    for (const auto& [mode, axis] : {std::pair{"sweep-rrh", SweepAxis::rrh}, std::pair{"sweep-users", SweepAxis::users}}) {
        ExperimentConfig c = preset(mode);
        c.axis_sweep.algorithms = {Algorithm::joint, Algorithm::tpoa};
        c.axis_sweep.jobs = workers();
        const auto rows = run_axis_sweep(c, axis);
        std::map<std::pair<int, std::uint64_t>, std::pair<const SweepRow*, const SweepRow*>> pairs;
        for (const SweepRow& r : rows) {
            auto& slot = pairs[{r.axis, r.seed}];
            (r.algorithm == Algorithm::joint ? slot.first : slot.second) = &r;
        }
        std::map<int, std::array<double, 3>> sums;  // joint total, tpoa total, count
        int violations = 0;
        for (const auto& [key, pr] : pairs) {
            if (!pr.first || !pr.second || pr.first->status != "optimal" || pr.second->status != "optimal") continue;
            auto& s = sums[key.first];
            s[0] += pr.first->total;
            s[1] += pr.second->total;
            s[2] += 1.0;
            if (pr.first->m_star > pr.second->m_star) ++violations;
        }
        m_ok = m_ok && violations == 0;
        for (const auto& [v, s] : sums) {
            means_ok = means_ok && s[0] <= s[1];
            detail += fmt::format("{}={}: {:.1f} <= {:.1f} W (n={}); ", axis == SweepAxis::rrh ? "N" : "U", v,
                                  s[0] / s[2], s[1] / s[2], static_cast<int>(s[2]));
        }
        means_ok = means_ok && sums.size() == c.axis_sweep.values.size();
    }

    // Full-load check on the RRH sweep scenarios.
    const ExperimentConfig c = preset("sweep-rrh");
    double worst = 0.0;
    for (int n : c.axis_sweep.values) {
        for (std::uint64_t seed : c.axis_sweep.seeds) {
            ScenarioConfig sc = c.scenario;
            sc.n_rrh = n;
            sc.seed = seed;
            const Scenario s = generate(sc);
            const SolveResult r = tpoa(s, c.power, c.tpoa);
            if (r.status != SolveStatus::optimal) continue;
            const Vector f = load_map(s, r.p_star, r.x_star);
            for (Eigen::Index i = 0; i < f.size(); ++i) {
                if (std::find(r.clamped.begin(), r.clamped.end(), static_cast<std::size_t>(i)) != r.clamped.end()) continue;
                worst = std::max({worst, std::abs(f[i] - 1.0), std::abs(r.x_star[i] - 1.0)});
            }
        }
    }
    report(7, means_ok && m_ok && worst <= 1e-6,
           "joint mean total <= TPOA mean at every sweep point, joint m* <= TPOA m*, TPOA loads equal 1",
           detail + fmt::format("m* violations: {}; TPOA load error {:.2e}", m_ok ? "none" : "some", worst));
}

void criterion_8() {
    const PowerParams params;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    bool least = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 10;
        Vector p(n), x(n);
        for (int i = 0; i < n; ++i) {
            p[i] = params.p_min * std::pow(params.p_max / params.p_min, unit(rng));
            x[i] = trial % 7 == 0 ? 1.0 : unit(rng);
        }
        const int m = required_bbus(x, params);
        const double demand = params.kappa * x.sum();
        least = least && demand <= m * params.x_cap && (m == 0 || demand > (m - 1) * params.x_cap);
        const int active = std::max(1, m) + trial % 2;
        double sum = baseband_power(x, active, params);
        for (int i = 0; i < n; ++i) sum += rrh_power(p[i], x[i], params);
        worst = std::max(worst, std::abs(total_power(p, x, active, params).total - sum) / sum);
    }
    const int example = required_bbus(Vector::Ones(3), params);
    report(8, worst <= 1e-9 && least && example == 2,
           "total = sum of RRH terms + baseband, least-integer BBU count, three full cells need 2 BBUs",
           fmt::format("worst relative gap {:.2e} over 1000 states; example m = {}", worst, example));
}

void criterion_9() {
    ScenarioConfig sc;
    sc.seed = 9;
    const Scenario a = generate(sc);
    const Scenario b = generate(sc);
    const bool scenario_same = save(a) == save(b);
    const bool round_trip = load(save(a)) == a && save(load(save(a))) == save(a);

    const ExperimentConfig trace = preset("trace");
    ScenarioConfig tc = trace.scenario;
    tc.seed = 9;
    const std::string t1 = trace_csv(to_solve_result(solve_fixed_m(generate(tc), trace.power, 3, trace.solver)));
    const std::string t2 = trace_csv(to_solve_result(solve_fixed_m(generate(tc), trace.power, 3, trace.solver)));

    const ExperimentConfig load_cfg = preset("sweep-load");
    const std::string l1 = load_sweep_csv(run_load_sweep(generate(sc), load_cfg.power, load_cfg.load_sweep));
    const std::string l2 = load_sweep_csv(run_load_sweep(generate(sc), load_cfg.power, load_cfg.load_sweep));

    ExperimentConfig sw = preset("sweep-rrh");
    sw.axis_sweep.values = {3, 4};
    sw.axis_sweep.seeds = {1, 2};
    sw.axis_sweep.jobs = 1;
    const std::string s1 = sweep_csv(run_axis_sweep(sw, SweepAxis::rrh));
    sw.axis_sweep.jobs = workers();
    const std::string s2 = sweep_csv(run_axis_sweep(sw, SweepAxis::rrh));

    const bool ok = scenario_same && round_trip && t1 == t2 && l1 == l2 && s1 == s2;
    report(9, ok, "byte-identical scenario files, traces and CSVs for equal inputs; exact save/load round trip",
           fmt::format("scenario {}, round trip {}, trace {}, load sweep {}, axis sweep {}", scenario_same, round_trip,
                       t1 == t2, l1 == l2, s1 == s2));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    fmt::print("{} of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
