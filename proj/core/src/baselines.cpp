#include "cranopt/baselines.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <thread>

namespace cranopt {

namespace {

using Index = Eigen::Index;

struct Candidate {
    double total = std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;
    Vector x;
    int m = 0;
    bool found = false;
};

Vector point_at(std::uint64_t index, const std::vector<double>& grid, std::size_t n) {
    Vector p(static_cast<Index>(n));
    const std::uint64_t g = grid.size();
    for (std::size_t k = n; k-- > 0;) {
        p[static_cast<Index>(k)] = grid[index % g];
        index /= g;
    }
    return p;
}

// Scans [begin, end) in index order, which is lexicographic in p because the grid ascends.
Candidate scan_range(const Scenario& scenario, const PowerParams& params, const EsaConfig& config,
                     const std::vector<double>& grid, std::uint64_t begin, std::uint64_t end) {
    Candidate best;
    const std::size_t n = scenario.num_rrh();
    for (std::uint64_t index = begin; index < end; ++index) {
        const Vector p = point_at(index, grid, n);
        const FixedPointResult fp = nlce_fixed_point(scenario, p, config.fixed_point);
        if (!fp.feasible() || fp.x.maxCoeff() > 1.0) continue;
        const int m = std::max(1, required_bbus(fp.x, params));
        if (m > params.m_max) continue;
        const double total = total_power(p, fp.x, m, params).total;
        if (total < best.total) best = {total, index, fp.x, m, true};
    }
    return best;
}

}  // namespace

void EsaConfig::validate() const {
    if (grid_points < 2) throw ValidationError("ESA needs at least 2 grid points per RRH");
    if (threads < 1) throw ValidationError("ESA needs at least one thread");
    if (!(fixed_point.tol > 0.0) || fixed_point.max_iter < 1)
        throw ValidationError("invalid fixed-point options");
}

void TpoaConfig::validate() const {
    if (!(rel_tol > 0.0)) throw ValidationError("TPOA tolerance must be positive");
    if (max_sweeps < 1) throw ValidationError("TPOA needs at least one sweep");
}

std::vector<double> esa_grid(const PowerParams& params, const EsaConfig& config) {
    config.validate();
    const int g = config.grid_points;
    std::vector<double> grid(static_cast<std::size_t>(g));
    const double lo_dbm = watts_to_dbm(params.p_min);
    const double hi_dbm = watts_to_dbm(params.p_max);
    for (int k = 0; k < g; ++k) {
        // The fraction is formed first so that nested grids share exact values.
        const double frac = static_cast<double>(k) / static_cast<double>(g - 1);
        grid[static_cast<std::size_t>(k)] = config.spacing == GridSpacing::log_dbm
                                                ? dbm_to_watts(lo_dbm + (hi_dbm - lo_dbm) * frac)
                                                : params.p_min + (params.p_max - params.p_min) * frac;
    }
    grid.front() = params.p_min;
    grid.back() = params.p_max;
    return grid;
}

SolveResult esa(const Scenario& scenario, const PowerParams& params, const EsaConfig& config) {
    params.validate();
    config.validate();
    const std::size_t n = scenario.num_rrh();
    const double evaluations = std::pow(static_cast<double>(config.grid_points), static_cast<double>(n));
    if (evaluations > config.max_evaluations)
        throw GuardError(fmt::format("ESA would evaluate {:.3g} grid points (limit {:.3g})", evaluations,
                                     config.max_evaluations));

    const std::vector<double> grid = esa_grid(params, config);
    const auto total_points = static_cast<std::uint64_t>(evaluations + 0.5);
    const auto workers = static_cast<std::uint64_t>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(config.threads), total_points));

    std::vector<Candidate> partial(workers);
    const auto bounds = [&](std::uint64_t w) { return total_points * w / workers; };
    if (workers == 1) {
        partial[0] = scan_range(scenario, params, config, grid, 0, total_points);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] { partial[w] = scan_range(scenario, params, config, grid, bounds(w), bounds(w + 1)); });
    }

    // Chunks are ordered by index, so strict < keeps the earliest tie.
    Candidate best;
    for (Candidate& c : partial)
        if (c.found && c.total < best.total) best = std::move(c);

    SolveResult out;
    out.algorithm = "esa";
    if (!best.found) {
        out.status = SolveStatus::infeasible;
        out.message = "no grid point is feasible";
        return out;
    }
    out.status = SolveStatus::optimal;
    out.p_star = point_at(best.index, grid, n);
    out.x_star = std::move(best.x);
    out.m_star = best.m;
    out.breakdown = total_power(out.p_star, out.x_star, out.m_star, params);
    return out;
}

SolveResult tpoa(const Scenario& scenario, const PowerParams& params, const TpoaConfig& config) {
    params.validate();
    config.validate();
    const std::size_t n = scenario.num_rrh();
    const Index nn = static_cast<Index>(n);
    SolveResult out;
    out.algorithm = "tpoa";

    Vector p = Vector::Constant(nn, params.p_min);
    Vector x = Vector::Ones(nn);
    std::vector<bool> clamped(n, false);
    bool converged = false;
    for (int sweep = 1; sweep <= config.max_sweeps && !converged; ++sweep) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Index ii = static_cast<Index>(i);
            const CellResponse cell(scenario, p.cwiseProduct(x), i);
            double next_p;
            double next_x;
            if (cell.load(params.p_min) <= 1.0) {
                next_p = params.p_min;
                next_x = cell.load(params.p_min);
                clamped[i] = true;
            } else if (cell.load(params.p_max) > 1.0) {
                out.status = SolveStatus::infeasible;
                out.message = fmt::format("RRH {} cannot carry its users at p_max", i);
                return out;
            } else {
                next_p = cell.full_load_power(params.p_min, params.p_max);
                next_x = 1.0;
                clamped[i] = false;
            }
            change = std::max({change, std::abs(next_p - p[ii]) / p[ii], std::abs(next_x - x[ii])});
            p[ii] = next_p;
            x[ii] = next_x;
        }
        converged = change <= config.rel_tol;
    }

    for (std::size_t i = 0; i < n; ++i)
        if (clamped[i]) out.clamped.push_back(i);
    const int m = std::max(1, required_bbus(x, params));
    if (m > params.m_max) {
        out.status = SolveStatus::infeasible;
        out.message = fmt::format("full-load operation needs {} BBUs", m);
        return out;
    }
    out.status = converged ? SolveStatus::optimal : SolveStatus::non_converged;
    if (!converged) out.message = "sweep cap reached";
    out.p_star = p;
    out.x_star = x;
    out.m_star = m;
    out.breakdown = total_power(p, x, m, params);
    return out;
}

}  // namespace cranopt
