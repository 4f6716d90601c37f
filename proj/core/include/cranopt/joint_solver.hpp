#ifndef CRANOPT_JOINT_SOLVER_HPP
#define CRANOPT_JOINT_SOLVER_HPP

#include "cranopt/alternating_solver.hpp"
#include "cranopt/power_model.hpp"
#include "cranopt/scenario.hpp"

#include <string>
#include <vector>

namespace cranopt {

struct PerMResult {
    int m = 0;
    double total = 0.0;
    SolveStatus status = SolveStatus::infeasible;
    int outer_iterations = 0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    std::string algorithm;
    Vector p_star;
    Vector x_star;
    int m_star = 0;
    PowerBreakdown breakdown;
    std::vector<PerMResult> per_m;
    /// Outer-iteration trace of the winning m (joint solver only).
    std::vector<OuterRecord> trace;
    double initial_total = 0.0;
    /// RRHs held at p_min with load below 1 (TPOA only).
    std::vector<std::size_t> clamped;
    std::string message;
};

/// Solves the fixed-m problem for m = m_max, m_max - 1, ... and stops at the first m
/// without a feasible solution. Returns the smallest total power, ties to smaller m.
SolveResult solve(const Scenario& scenario, const PowerParams& params, const SolverConfig& config = {});

struct FeasibilityReport {
    bool nlce = false;
    bool bbu = false;
    bool load_bounds = false;
    bool power_bounds = false;
    /// ||x - f(r, x, p)||_inf.
    double residual = 0.0;

    bool all() const { return nlce && bbu && load_bounds && power_bounds; }
};

/// Constraint audit of a candidate (p, x, m). Power bounds are checked exactly.
FeasibilityReport check_p0_feasibility(const Scenario& scenario, const PowerParams& params, const Vector& p,
                                       const Vector& x, int m, double tol = 1e-6);

}  // namespace cranopt

#endif  // CRANOPT_JOINT_SOLVER_HPP
