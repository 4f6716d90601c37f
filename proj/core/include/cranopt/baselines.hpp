#ifndef CRANOPT_BASELINES_HPP
#define CRANOPT_BASELINES_HPP

#include "cranopt/joint_solver.hpp"
#include "cranopt/load_coupling.hpp"

#include <cstdint>
#include <vector>

namespace cranopt {

enum class GridSpacing { log_dbm, linear_watt };

struct EsaConfig {
    int grid_points = 64;
    GridSpacing spacing = GridSpacing::log_dbm;
    /// Worker threads; the result does not depend on this.
    int threads = 1;
    double max_evaluations = 1e7;
    FixedPointOptions fixed_point{};

    void validate() const;

    friend bool operator==(const EsaConfig& a, const EsaConfig& b) {
        return a.grid_points == b.grid_points && a.spacing == b.spacing && a.threads == b.threads &&
               a.max_evaluations == b.max_evaluations && a.fixed_point.tol == b.fixed_point.tol &&
               a.fixed_point.max_iter == b.fixed_point.max_iter;
    }
};

/// Per-RRH power levels, ascending, endpoints exactly p_min and p_max.
std::vector<double> esa_grid(const PowerParams& params, const EsaConfig& config);

/// Exhaustive search over esa_grid^N. Each point takes the least BBU count its loads need
/// (at least 1); points needing more than m_max are infeasible. Ties keep the
/// lexicographically smallest power vector. Throws GuardError above max_evaluations.
SolveResult esa(const Scenario& scenario, const PowerParams& params, const EsaConfig& config = {});

struct TpoaConfig {
    /// Sweeps stop once no power moves by more than rel_tol relative.
    double rel_tol = 1e-12;
    int max_sweeps = 10000;

    void validate() const;

    friend bool operator==(const TpoaConfig&, const TpoaConfig&) = default;
};

/// Full-load power control: cyclic per-RRH bisection for load exactly 1, starting from
/// p_min. An RRH whose load is below 1 even at p_min stays there and is listed in
/// `clamped`; one that overloads at p_max makes the instance infeasible.
SolveResult tpoa(const Scenario& scenario, const PowerParams& params, const TpoaConfig& config = {});

}  // namespace cranopt

#endif  // CRANOPT_BASELINES_HPP
