#ifndef CRANOPT_ALTERNATING_SOLVER_HPP
#define CRANOPT_ALTERNATING_SOLVER_HPP

#include "cranopt/common.hpp"
#include "cranopt/load_coupling.hpp"
#include "cranopt/power_model.hpp"
#include "cranopt/scenario.hpp"

#include <string>
#include <vector>

namespace cranopt {

enum class SolveStatus { optimal, infeasible, non_converged };

std::string to_string(SolveStatus status);

/// Dual variables: lambda for s_i <= p_i, mu for t_i(s, p) <= s_i, nu for BBU capacity.
struct Multipliers {
    Vector lambda;
    Vector mu;
    double nu = 0.0;

    static Multipliers zeros(std::size_t n);
};

enum class DualUpdateDirection { ascent, paper_literal };

/// How the power update of one outer iteration is computed.
///   priced:        each RRH minimises its own power with its load tied to its power,
///                  paying the interference it causes at adjoint prices.
///   paper_literal: dual ascent on the power subproblem with s frozen.
enum class PStepRule { priced, paper_literal };

struct SolverConfig {
    double eps_outer = 1e-2;
    double eps_s = 1e-24;
    double eps_p = 1e-12;
    double xi = 1e-3;
    int max_s_iter = 10000;
    int max_multiplier_iter = 50000;
    int max_outer = 200;
    DualUpdateDirection dual_update_direction = DualUpdateDirection::ascent;
    PStepRule p_step_rule = PStepRule::priced;
    /// Relative slack on constraint checks.
    double feasibility_tol = 1e-9;
    /// Halvings of the log-power step before an outer iteration gives up.
    int max_backtracks = 8;
    /// Doublings tried after an improving full step.
    int max_expansions = 3;
    /// Sign-change scan resolution for the univariate power searches.
    int scan_points = 64;

    void validate() const;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

enum class SStepStatus { converged, infeasible, non_converged };

struct SStepResult {
    SStepStatus status = SStepStatus::non_converged;
    Vector s;
    int iterations = 0;
    /// Squared norm of the last update.
    double step2 = 0.0;
    std::string reason;
    /// Every iterate, starting with s = 0, when requested.
    std::vector<Vector> iterates;

    bool feasible() const { return status == SStepStatus::converged; }
};

/// Spectral radius of s_coupling_matrix. A value >= 1 rules out every power vector.
double coupling_spectral_radius(const Scenario& scenario);

/// Gauss-Seidel iteration s <- (I - H)^{-1} (t(s, p) - H s) from s = 0, H = s_coupling_matrix.
///
/// Iterates increase monotonically towards p * x*, so the first iterate that breaks
/// s <= p or the m-BBU capacity proves the fixed power vector infeasible.
/// Throws MatrixError when I - H is singular.
SStepResult s_step(const Scenario& scenario, const PowerParams& params, const Vector& p, int m,
                   const SolverConfig& config = {}, bool record_iterates = false);

/// Per-RRH Lagrangian of the frozen-s power subproblem, without its p-independent part:
///   (b + nu kappa) s_i / p - lambda_i p + mu_i t_i(p).
double rrh_lagrangian(const CellResponse& cell, double s_i, double lambda_i, double mu_i, double nu,
                      const PowerParams& params, double p);

/// Derivative of rrh_lagrangian in p.
double kkt_residual(const CellResponse& cell, double s_i, double lambda_i, double mu_i, double nu,
                    const PowerParams& params, double p);

/// Largest magnitude among the terms summed by kkt_residual.
double kkt_scale(const CellResponse& cell, double s_i, double lambda_i, double mu_i, double nu,
                 const PowerParams& params, double p);

/// Minimiser of rrh_lagrangian over [p_min, p_max]: roots of kkt_residual found by
/// bisection inside every sign change of a log-spaced scan, compared with both bounds.
double kkt_power(const Scenario& scenario, const PowerParams& params, const Vector& s,
                 const Multipliers& multipliers, std::size_t i, const SolverConfig& config = {});

/// Dual function of the frozen-s power subproblem at the given multipliers.
double dual_value(const Scenario& scenario, const PowerParams& params, const Vector& s,
                  const Multipliers& multipliers, int m, const SolverConfig& config = {});

/// One projected subgradient step at the inner minimiser p. Residuals are normalised by
/// p_max (lambda, mu) and m * x_cap (nu) before scaling by xi.
Multipliers update_multipliers(const Scenario& scenario, const PowerParams& params, const Vector& p,
                               const Vector& s, const Multipliers& multipliers, int m,
                               const SolverConfig& config = {});

struct PStepResult {
    Vector p;
    Multipliers multipliers;
    int iterations = 0;
    bool converged = false;
};

/// Power update for fixed s. `p_current` is the power at which s was computed and
/// `warm` carries the multipliers of the previous outer iteration.
PStepResult p_step(const Scenario& scenario, const PowerParams& params, const Vector& s,
                   const Vector& p_current, int m, const SolverConfig& config = {},
                   const Multipliers* warm = nullptr);

struct OuterRecord {
    int iteration = 0;
    Vector p;
    Vector s;
    double objective = 0.0;
    double dual = 0.0;
    double dp2 = 0.0;
    double max_violation = 0.0;
    double step_fraction = 0.0;
};

struct FixedMResult {
    SolveStatus status = SolveStatus::infeasible;
    int m = 0;
    Vector p;
    Vector x;
    Vector s;
    PowerBreakdown breakdown;
    /// Total power at the full-power starting point.
    double initial_total = 0.0;
    int outer_iterations = 0;
    std::vector<OuterRecord> trace;
    std::string message;
};

/// Alternates s_step and p_step from p = p_max until the squared power change is at
/// most eps_outer. Each power update is shortened geometrically in log-power until
/// the new point is feasible and does not raise the total power; an improving full
/// step is lengthened while the total keeps falling. When uniform p_max overloads a
/// cell, the start is the full-load power pattern scaled so its largest entry is p_max.
FixedMResult solve_fixed_m(const Scenario& scenario, const PowerParams& params, int m,
                           const SolverConfig& config = {});

}  // namespace cranopt

#endif  // CRANOPT_ALTERNATING_SOLVER_HPP
