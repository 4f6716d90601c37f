#include "cranopt/alternating_solver.hpp"

#include "cranopt/baselines.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <optional>

namespace cranopt {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// Root of an increasing-through-zero derivative inside [a, b], d(a) < 0 <= d(b), in log p.
template <class D>
double bisect_log(double a, double b, const D& deriv) {
    double da = deriv(a);
    double db = deriv(b);
    for (int it = 0; it < 200 && b / a - 1.0 > 4e-16; ++it) {
        const double mid = std::sqrt(a * b);
        if (mid <= a || mid >= b) break;
        const double dm = deriv(mid);
        if (dm < 0.0) {
            a = mid;
            da = dm;
        } else {
            b = mid;
            db = dm;
        }
    }
    return std::abs(da) <= std::abs(db) ? a : b;
}

// Global minimiser of a smooth univariate function on [lo, hi]: both bounds plus every
// interior local minimum bracketed by a log-spaced scan of the derivative.
template <class F, class D>
double minimize_on(double lo, double hi, int scan, const F& value, const D& deriv) {
    if (!(hi > lo)) return lo;
    std::vector<double> grid(static_cast<std::size_t>(std::max(scan, 2)));
    const double ratio = std::log(hi / lo);
    for (std::size_t k = 0; k < grid.size(); ++k)
        grid[k] = lo * std::exp(ratio * static_cast<double>(k) / static_cast<double>(grid.size() - 1));
    grid.front() = lo;
    grid.back() = hi;

    double best = lo;
    double best_value = value(lo);
    const auto consider = [&](double p) {
        const double v = value(p);
        if (v < best_value) {
            best = p;
            best_value = v;
        }
    };
    double prev = deriv(grid[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double cur = deriv(grid[k]);
        if (prev < 0.0 && cur >= 0.0) consider(bisect_log(grid[k - 1], grid[k], deriv));
        prev = cur;
    }
    consider(hi);
    return best;
}

double objective_at(const PowerParams& params, const Vector& p, const Vector& s, int m) {
    return m * params.p0 + (params.a() * s + params.b() * s.cwiseQuotient(p)).sum() +
           static_cast<double>(p.size()) * params.p_rf;
}

Vector clamp_power(Vector p, const PowerParams& params) {
    for (Index i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], params.p_min, params.p_max);
    return p;
}

PStepResult literal_p_step(const Scenario& scenario, const PowerParams& params, const Vector& s,
                           const Vector& p_current, int m, const SolverConfig& config, const Multipliers* warm) {
    const std::size_t n = scenario.num_rrh();
    PStepResult out;
    out.multipliers = warm ? *warm : Multipliers::zeros(n);
    std::vector<CellResponse> cells;
    cells.reserve(n);
    for (std::size_t i = 0; i < n; ++i) cells.emplace_back(scenario, s, i);

    Vector p = p_current;
    for (int l = 1; l <= config.max_multiplier_iter; ++l) {
        Vector next(idx(n));
        const Multipliers& mu = out.multipliers;
        for (std::size_t i = 0; i < n; ++i) {
            const double si = s[idx(i)];
            const double lam = mu.lambda[idx(i)];
            const double mui = mu.mu[idx(i)];
            next[idx(i)] = minimize_on(
                params.p_min, params.p_max, config.scan_points,
                [&](double q) { return rrh_lagrangian(cells[i], si, lam, mui, mu.nu, params, q); },
                [&](double q) { return kkt_residual(cells[i], si, lam, mui, mu.nu, params, q); });
        }
        out.multipliers = update_multipliers(scenario, params, next, s, out.multipliers, m, config);
        const double d = (next - p).squaredNorm();
        p = std::move(next);
        out.iterations = l;
        if (d <= config.eps_p) {
            out.converged = true;
            break;
        }
    }
    out.p = clamp_power(std::move(p), params);
    return out;
}

// Each RRH i minimises (a + pi_i) t_i(p) + (b + nu kappa) f_i(p) over the powers that
// keep its own load at most 1, with its neighbours' products frozen. pi = J^T mu prices
// the interference s_i imposes on the other cells, mu solving the s-stationarity
// (I - J^T) mu = a + b / p + lambda + nu kappa / p of the fixed-m problem.
PStepResult priced_p_step(const Scenario& scenario, const PowerParams& params, const Vector& s,
                          const Vector& p_current, int m, const SolverConfig& config, const Multipliers* warm) {
    const std::size_t n = scenario.num_rrh();
    const Index nn = idx(n);
    const Multipliers prior = warm ? *warm : Multipliers::zeros(n);
    const double a = params.a();
    const double b = params.b();

    const Matrix jac = s_map_jacobian(scenario, s, p_current);
    const Vector rhs = (Vector::Constant(nn, a) + (b + prior.nu * params.kappa) * p_current.cwiseInverse() +
                        prior.lambda)
                           .eval();
    const Matrix system = Matrix::Identity(nn, nn) - jac.transpose();
    Vector mu = system.fullPivLu().solve(rhs);
    Vector price = mu - rhs;
    // A negative or non-finite price means the linearisation is outside its stable
    // region; fall back to the unpriced response for that cell.
    for (Index i = 0; i < nn; ++i)
        if (!std::isfinite(price[i]) || price[i] < 0.0) price[i] = 0.0;

    std::vector<CellResponse> cells;
    std::vector<double> lower(n);
    cells.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        cells.emplace_back(scenario, s, i);
        lower[i] = std::max(params.p_min, cells[i].full_load_power(params.p_min, params.p_max));
    }

    const auto respond = [&](double nu) {
        Vector p(nn);
        const double load_weight = b + nu * params.kappa;
        for (std::size_t i = 0; i < n; ++i) {
            const CellResponse& cell = cells[i];
            const double own = a + price[idx(i)];
            p[idx(i)] = minimize_on(
                lower[i], params.p_max, config.scan_points,
                [&](double q) { return own * cell.s_value(q) + load_weight * cell.load(q); },
                [&](double q) { return own * cell.s_derivative(q) + load_weight * cell.load_derivative(q); });
        }
        return p;
    };
    const auto demand = [&](const Vector& p) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += params.kappa * cells[i].load(p[idx(i)]);
        return total;
    };

    const double limit = m * params.x_cap * (1.0 + config.feasibility_tol);
    double nu = 0.0;
    Vector p = respond(0.0);
    if (demand(p) > limit) {
        double lo = 0.0;
        double hi = std::max(b, 1.0);
        Vector p_hi = respond(hi);
        for (int it = 0; it < 64 && demand(p_hi) > limit; ++it) {
            lo = hi;
            hi *= 2.0;
            p_hi = respond(hi);
        }
        for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            Vector p_mid = respond(mid);
            if (demand(p_mid) > limit) {
                lo = mid;
            } else {
                hi = mid;
                p_hi = std::move(p_mid);
            }
        }
        nu = hi;
        p = std::move(p_hi);
    }

    Vector lambda = Vector::Zero(nn);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lower[i] > params.p_min) || p[idx(i)] > lower[i]) continue;
        const CellResponse& cell = cells[i];
        const double q = p[idx(i)];
        const double slope = (a + price[idx(i)]) * cell.s_derivative(q) + (b + nu * params.kappa) * cell.load_derivative(q);
        lambda[idx(i)] = std::max(0.0, slope / (q * std::abs(cell.load_derivative(q))));
    }

    PStepResult out;
    out.p = clamp_power(std::move(p), params);
    out.multipliers = {std::move(lambda), std::move(mu), nu};
    out.iterations = 1;
    out.converged = true;
    return out;
}

double max_violation(const Scenario& scenario, const PowerParams& params, const Vector& p, const Vector& s,
                     int m) {
    const Vector x = s.cwiseQuotient(p);
    double worst = std::max(0.0, x.maxCoeff() - 1.0);
    worst = std::max(worst, -x.minCoeff());
    worst = std::max(worst, (processing_demand(x, params) - m * params.x_cap) / (m * params.x_cap));
    worst = std::max(worst, (s_map(scenario, s, p) - s).cwiseAbs().maxCoeff() / params.p_max);
    return worst;
}

}  // namespace

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::non_converged: return "non_converged";
    }
    return "unknown";
}

Multipliers Multipliers::zeros(std::size_t n) {
    return {Vector::Zero(idx(n)), Vector::Zero(idx(n)), 0.0};
}

void SolverConfig::validate() const {
    if (!(eps_outer > 0.0) || !(eps_s > 0.0) || !(eps_p > 0.0))
        throw ValidationError("solver tolerances must be positive");
    if (!(xi > 0.0)) throw ValidationError("multiplier step size must be positive");
    if (max_s_iter < 1 || max_multiplier_iter < 1 || max_outer < 1)
        throw ValidationError("iteration caps must be at least 1");
    if (!(feasibility_tol >= 0.0)) throw ValidationError("feasibility_tol must be non-negative");
    if (max_backtracks < 0 || max_expansions < 0) throw ValidationError("line-search limits must be non-negative");
    if (scan_points < 2) throw ValidationError("scan_points must be at least 2");
}

double coupling_spectral_radius(const Scenario& scenario) {
    const Matrix h = s_coupling_matrix(scenario);
    if (h.rows() == 1) return 0.0;
    return Eigen::EigenSolver<Matrix>(h, false).eigenvalues().cwiseAbs().maxCoeff();
}

SStepResult s_step(const Scenario& scenario, const PowerParams& params, const Vector& p, int m,
                   const SolverConfig& config, bool record_iterates) {
    const Index n = idx(scenario.num_rrh());
    if (p.size() != n) throw DimensionError("p has the wrong length");
    if (m < 1) throw DomainError("s_step needs at least one active BBU");
    const Matrix h = s_coupling_matrix(scenario);
    const Eigen::FullPivLU<Matrix> lu(Matrix::Identity(n, n) - h);
    if (!lu.isInvertible()) throw MatrixError("I - H is singular");

    const double tol = config.feasibility_tol;
    const double capacity = m * params.x_cap;
    SStepResult out;
    Vector s = Vector::Zero(n);
    if (record_iterates) out.iterates.push_back(s);
    for (int l = 1; l <= config.max_s_iter; ++l) {
        Vector next = lu.solve(s_map(scenario, s, p) - h * s);
        out.iterations = l;
        out.step2 = (next - s).squaredNorm();
        s = std::move(next);
        if (record_iterates) out.iterates.push_back(s);
        for (Index i = 0; i < n; ++i) {
            if (s[i] > p[i] * (1.0 + tol)) {
                out.status = SStepStatus::infeasible;
                out.reason = fmt::format("RRH {} needs load above 1", i);
            } else if (s[i] < -tol * p[i]) {
                out.status = SStepStatus::infeasible;
                out.reason = fmt::format("RRH {} has negative load", i);
            }
            if (out.status == SStepStatus::infeasible) {
                out.s = std::move(s);
                return out;
            }
        }
        if (params.kappa * s.cwiseQuotient(p).sum() > capacity * (1.0 + tol)) {
            out.status = SStepStatus::infeasible;
            out.reason = fmt::format("load exceeds the capacity of {} BBUs", m);
            out.s = std::move(s);
            return out;
        }
        if (out.step2 <= config.eps_s) {
            out.status = SStepStatus::converged;
            out.s = std::move(s);
            return out;
        }
    }
    out.status = SStepStatus::non_converged;
    out.reason = "iteration cap reached";
    out.s = std::move(s);
    return out;
}

double rrh_lagrangian(const CellResponse& cell, double s_i, double lambda_i, double mu_i, double nu,
                      const PowerParams& params, double p) {
    return (params.b() + nu * params.kappa) * s_i / p - lambda_i * p + mu_i * cell.s_value(p);
}

double kkt_residual(const CellResponse& cell, double s_i, double lambda_i, double mu_i, double nu,
                    const PowerParams& params, double p) {
    return -(params.b() + nu * params.kappa) * s_i / (p * p) - lambda_i + mu_i * cell.s_derivative(p);
}

double kkt_scale(const CellResponse& cell, double s_i, double lambda_i, double mu_i, double nu,
                 const PowerParams& params, double p) {
    return std::max({(params.b() + nu * params.kappa) * s_i / (p * p), lambda_i, mu_i * cell.s_derivative(p)});
}

double kkt_power(const Scenario& scenario, const PowerParams& params, const Vector& s,
                 const Multipliers& multipliers, std::size_t i, const SolverConfig& config) {
    if (i >= scenario.num_rrh()) throw DomainError(fmt::format("RRH {} is out of range", i));
    const CellResponse cell(scenario, s, i);
    const double si = s[idx(i)];
    const double lam = multipliers.lambda[idx(i)];
    const double mu = multipliers.mu[idx(i)];
    const double nu = multipliers.nu;
    return minimize_on(
        params.p_min, params.p_max, config.scan_points,
        [&](double q) { return rrh_lagrangian(cell, si, lam, mu, nu, params, q); },
        [&](double q) { return kkt_residual(cell, si, lam, mu, nu, params, q); });
}

double dual_value(const Scenario& scenario, const PowerParams& params, const Vector& s,
                  const Multipliers& multipliers, int m, const SolverConfig& config) {
    double h = -multipliers.nu * m * params.x_cap;
    for (std::size_t i = 0; i < scenario.num_rrh(); ++i) {
        const CellResponse cell(scenario, s, i);
        const double si = s[idx(i)];
        const double lam = multipliers.lambda[idx(i)];
        const double mu = multipliers.mu[idx(i)];
        const double p = kkt_power(scenario, params, s, multipliers, i, config);
        h += (params.a() + lam - mu) * si + rrh_lagrangian(cell, si, lam, mu, multipliers.nu, params, p);
    }
    return h;
}

Multipliers update_multipliers(const Scenario& scenario, const PowerParams& params, const Vector& p,
                               const Vector& s, const Multipliers& multipliers, int m,
                               const SolverConfig& config) {
    const double sign = config.dual_update_direction == DualUpdateDirection::ascent ? 1.0 : -1.0;
    const double step = sign * config.xi;
    const double capacity = m * params.x_cap;
    const Vector t = s_map(scenario, s, p);
    Multipliers out;
    out.lambda = (multipliers.lambda + step * (s - p) / params.p_max).cwiseMax(0.0);
    out.mu = (multipliers.mu + step * (t - s) / params.p_max).cwiseMax(0.0);
    const double excess = (params.kappa * s.cwiseQuotient(p).sum() - capacity) / capacity;
    out.nu = std::max(0.0, multipliers.nu + step * excess);
    return out;
}

PStepResult p_step(const Scenario& scenario, const PowerParams& params, const Vector& s,
                   const Vector& p_current, int m, const SolverConfig& config, const Multipliers* warm) {
    const Index n = idx(scenario.num_rrh());
    if (s.size() != n || p_current.size() != n) throw DimensionError("s and p must have one entry per RRH");
    if (config.p_step_rule == PStepRule::paper_literal)
        return literal_p_step(scenario, params, s, p_current, m, config, warm);
    return priced_p_step(scenario, params, s, p_current, m, config, warm);
}

FixedMResult solve_fixed_m(const Scenario& scenario, const PowerParams& params, int m,
                           const SolverConfig& config) {
    params.validate();
    config.validate();
    if (m < 1 || m > params.m_max)
        throw DomainError(fmt::format("m = {} is outside [1, {}]", m, params.m_max));

    const std::size_t n = scenario.num_rrh();
    FixedMResult out;
    out.m = m;
    if (coupling_spectral_radius(scenario) >= 1.0) {
        out.message = "interference coupling admits no feasible power vector";
        return out;
    }

    Vector p = Vector::Constant(idx(n), params.p_max);
    SStepResult first;
    try {
        first = s_step(scenario, params, p, m, config);
    } catch (const MatrixError& e) {
        out.message = e.what();
        return out;
    }
    if (first.status == SStepStatus::infeasible) {
        // Uniform full power maximises interference and can overload a cell that a
        // lower-power pattern serves. Retry along the full-load power ray, scaled up to p_max.
        const SolveResult ray = tpoa(scenario, params);
        if (ray.status == SolveStatus::optimal) {
            p = clamp_power(ray.p_star * (params.p_max / ray.p_star.maxCoeff()), params);
            first = s_step(scenario, params, p, m, config);
        }
    }
    if (!first.feasible()) {
        out.status =
            first.status == SStepStatus::infeasible ? SolveStatus::infeasible : SolveStatus::non_converged;
        out.message = "starting point: " + first.reason;
        return out;
    }
    Vector s = std::move(first.s);
    double objective = objective_at(params, p, s, m);
    out.initial_total = objective;

    Multipliers multipliers = Multipliers::zeros(n);
    bool converged = false;
    for (int k = 1; k <= config.max_outer; ++k) {
        PStepResult step = p_step(scenario, params, s, p, m, config, &multipliers);
        multipliers = step.multipliers;

        OuterRecord record;
        record.iteration = k;
        record.dual = dual_value(scenario, params, s, multipliers, m, config);

        const Vector log_from = p.array().log().matrix();
        const Vector log_to = step.p.array().log().matrix();
        struct Trial {
            double fraction;
            Vector p;
            Vector s;
            double value;
        };
        const auto attempt = [&](double fraction) -> std::optional<Trial> {
            Vector candidate =
                fraction == 1.0
                    ? step.p
                    : clamp_power((log_from + fraction * (log_to - log_from)).array().exp().matrix(), params);
            SStepResult trial = s_step(scenario, params, candidate, m, config);
            if (!trial.feasible()) return std::nullopt;
            const double value = objective_at(params, candidate, trial.s, m);
            return Trial{fraction, std::move(candidate), std::move(trial.s), value};
        };

        std::optional<Trial> best;
        double fraction = 1.0;
        for (int bt = 0; bt <= config.max_backtracks && !best; ++bt, fraction *= 0.5) {
            std::optional<Trial> t = attempt(fraction);
            if (t && t->value <= objective + 1e-12 * std::abs(objective)) best = std::move(t);
        }
        // A full step that helped is stretched while the total keeps falling.
        if (best && best->fraction == 1.0) {
            double stretch = 2.0;
            for (int e = 0; e < config.max_expansions; ++e, stretch *= 2.0) {
                std::optional<Trial> t = attempt(stretch);
                if (!t || !(t->value < best->value)) break;
                best = std::move(t);
            }
        }

        const bool accepted = best.has_value();
        if (accepted) {
            record.dp2 = (best->p - p).squaredNorm();
            record.step_fraction = best->fraction;
            p = std::move(best->p);
            s = std::move(best->s);
            objective = best->value;
        }
        record.p = p;
        record.s = s;
        record.objective = objective;
        record.max_violation = max_violation(scenario, params, p, s, m);
        out.trace.push_back(std::move(record));
        out.outer_iterations = k;
        if (!accepted || out.trace.back().dp2 <= config.eps_outer) {
            converged = true;
            break;
        }
    }

    out.status = converged ? SolveStatus::optimal : SolveStatus::non_converged;
    if (!converged) out.message = "outer iteration cap reached";
    out.p = p;
    out.s = s;
    out.x = s.cwiseQuotient(p);
    out.breakdown = total_power(p, out.x, m, params);
    return out;
}

}  // namespace cranopt
