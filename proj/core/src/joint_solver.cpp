#include "cranopt/joint_solver.hpp"

#include "cranopt/load_coupling.hpp"

#include <algorithm>
#include <optional>

namespace cranopt {

SolveResult solve(const Scenario& scenario, const PowerParams& params, const SolverConfig& config) {
    params.validate();
    config.validate();
    SolveResult out;
    out.algorithm = "joint";

    std::optional<FixedMResult> best;
    for (int m = params.m_max; m >= 1; --m) {
        FixedMResult r = solve_fixed_m(scenario, params, m, config);
        PerMResult summary{m, r.status == SolveStatus::infeasible ? 0.0 : r.breakdown.total, r.status,
                           r.outer_iterations};
        out.per_m.push_back(summary);
        if (r.status == SolveStatus::infeasible) break;
        if (r.status != SolveStatus::optimal) continue;
        // Ties go to the later, smaller m.
        if (!best || r.breakdown.total <= best->breakdown.total) best = std::move(r);
    }

    if (!best) {
        const bool any_unfinished = std::any_of(out.per_m.begin(), out.per_m.end(), [](const PerMResult& r) {
            return r.status == SolveStatus::non_converged;
        });
        out.status = any_unfinished ? SolveStatus::non_converged : SolveStatus::infeasible;
        out.message = any_unfinished ? "no m converged" : "no feasible BBU count";
        return out;
    }
    out.status = SolveStatus::optimal;
    out.p_star = best->p;
    out.x_star = best->x;
    out.m_star = best->m;
    out.breakdown = best->breakdown;
    out.trace = std::move(best->trace);
    out.initial_total = best->initial_total;
    return out;
}

FeasibilityReport check_p0_feasibility(const Scenario& scenario, const PowerParams& params, const Vector& p,
                                       const Vector& x, int m, double tol) {
    if (p.size() != x.size() || static_cast<std::size_t>(p.size()) != scenario.num_rrh())
        throw DimensionError("p and x must have one entry per RRH");
    FeasibilityReport report;
    report.residual = (x - load_map(scenario, p, x)).cwiseAbs().maxCoeff();
    report.nlce = report.residual <= tol;
    report.bbu = required_bbus(x, params) <= m;
    report.load_bounds = x.minCoeff() >= 0.0 && x.maxCoeff() <= 1.0 + tol;
    report.power_bounds = p.minCoeff() >= params.p_min && p.maxCoeff() <= params.p_max;
    return report;
}

}  // namespace cranopt
