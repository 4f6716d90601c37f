#include "cranopt/load_coupling.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace cranopt {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_sizes(const Scenario& scenario, const Vector& a, const char* name) {
    if (static_cast<std::size_t>(a.size()) != scenario.num_rrh())
        throw DimensionError(fmt::format("{} has length {} but the scenario has {} RRHs", name, a.size(),
                                         scenario.num_rrh()));
}

// Interference-plus-noise seen by user j when served by RRH i; `emitted` holds p_k x_k or s_k.
double interference_plus_noise(const Scenario& scenario, const Vector& emitted, std::size_t i, std::size_t j) {
    double total = scenario.noise_w();
    for (std::size_t k = 0; k < scenario.num_rrh(); ++k)
        if (k != i) total += emitted[idx(k)] * scenario.gain(k, j);
    return total;
}

// 1 / log2(1 + gamma), with the zero-SINR case rejected.
double inverse_rate(double gamma, std::size_t i, std::size_t j) {
    const double bits = log2_1p(gamma);
    if (!(bits > 0.0) || !std::isfinite(bits))
        throw DivergentLoadError(fmt::format("user {} of RRH {} has zero SINR", j, i));
    return 1.0 / bits;
}

// ln(1 + z) - z / (1 + z), series for small z where the difference cancels.
double log_gap(double z) {
    if (z < 1e-4) return z * z * (0.5 - z * (2.0 / 3.0 - 0.75 * z));
    return std::log1p(z) - z / (1.0 + z);
}

}  // namespace

NetworkState NetworkState::from_power_load(Vector p, Vector x) {
    if (p.size() != x.size()) throw DimensionError("p and x must have equal length");
    Vector s = p.cwiseProduct(x);
    return {std::move(p), std::move(x), std::move(s)};
}

NetworkState NetworkState::from_power_product(Vector p, Vector s) {
    if (p.size() != s.size()) throw DimensionError("p and s must have equal length");
    Vector x = s.cwiseQuotient(p);
    return {std::move(p), std::move(x), std::move(s)};
}

bool NetworkState::consistent(double rel_tol) const {
    if (p.size() != x.size() || p.size() != s.size()) return false;
    for (Index i = 0; i < p.size(); ++i) {
        const double expected = p[i] * x[i];
        if (std::abs(s[i] - expected) > rel_tol * std::max(std::abs(expected), std::abs(s[i]))) return false;
    }
    return true;
}

double sinr(const Scenario& scenario, const Vector& p, const Vector& x, std::size_t i, std::size_t j) {
    check_sizes(scenario, p, "p");
    check_sizes(scenario, x, "x");
    if (i >= scenario.num_rrh() || j >= scenario.num_users())
        throw DomainError(fmt::format("link ({}, {}) is out of range", i, j));
    const Vector emitted = p.cwiseProduct(x);
    return p[idx(i)] * scenario.gain(i, j) / interference_plus_noise(scenario, emitted, i, j);
}

Vector load_map(const Scenario& scenario, const Vector& p, const Vector& x) {
    check_sizes(scenario, p, "p");
    check_sizes(scenario, x, "x");
    const Vector emitted = p.cwiseProduct(x);
    const double w = scenario.bandwidth_hz();
    Vector out = Vector::Zero(p.size());
    for (std::size_t j = 0; j < scenario.num_users(); ++j) {
        const auto& u = scenario.user(j);
        const std::size_t i = u.serving_rrh;
        const double gamma = p[idx(i)] * scenario.gain(i, j) / interference_plus_noise(scenario, emitted, i, j);
        out[idx(i)] += u.demand_bps / w * inverse_rate(gamma, i, j);
    }
    return out;
}

FixedPointResult nlce_fixed_point(const Scenario& scenario, const Vector& p, const FixedPointOptions& options) {
    check_sizes(scenario, p, "p");
    if (!(options.tol > 0.0)) throw DomainError("fixed-point tolerance must be positive");
    FixedPointResult result;
    Vector x = Vector::Zero(p.size());
    bool increasing = true;
    for (int it = 1; it <= options.max_iter; ++it) {
        Vector next = load_map(scenario, p, x);
        result.iterations = it;
        const double step = (next - x).cwiseAbs().maxCoeff();
        increasing = ((next - x).minCoeff() >= 0.0);
        x = std::move(next);
        if (x.maxCoeff() > 1.0 + options.tol) {
            result.status = FixedPointStatus::infeasible;
            result.x = x;
            result.residual = step;
            return result;
        }
        if (step <= options.tol) {
            result.status = FixedPointStatus::converged;
            result.residual = (load_map(scenario, p, x) - x).cwiseAbs().maxCoeff();
            result.x = std::move(x);
            return result;
        }
    }
    result.status = increasing ? FixedPointStatus::infeasible : FixedPointStatus::non_converged;
    result.residual = (load_map(scenario, p, x) - x).cwiseAbs().maxCoeff();
    result.x = std::move(x);
    return result;
}

Vector s_map(const Scenario& scenario, const Vector& s, const Vector& p) {
    check_sizes(scenario, s, "s");
    check_sizes(scenario, p, "p");
    const double w = scenario.bandwidth_hz();
    Vector out = Vector::Zero(p.size());
    for (std::size_t j = 0; j < scenario.num_users(); ++j) {
        const auto& u = scenario.user(j);
        const std::size_t i = u.serving_rrh;
        const double gamma = p[idx(i)] * scenario.gain(i, j) / interference_plus_noise(scenario, s, i, j);
        out[idx(i)] += u.demand_bps * p[idx(i)] / w * inverse_rate(gamma, i, j);
    }
    return out;
}

double s_map_derivative(const Scenario& scenario, const Vector& s, const Vector& p, std::size_t i) {
    check_sizes(scenario, p, "p");
    if (i >= scenario.num_rrh()) throw DomainError(fmt::format("RRH {} is out of range", i));
    if (!(p[idx(i)] > 0.0)) throw DomainError("s_map_derivative needs p_i > 0");
    return CellResponse(scenario, s, i).s_derivative(p[idx(i)]);
}

Matrix s_map_jacobian(const Scenario& scenario, const Vector& s, const Vector& p) {
    check_sizes(scenario, s, "s");
    check_sizes(scenario, p, "p");
    const Index n = p.size();
    const double w = scenario.bandwidth_hz();
    Matrix jac = Matrix::Zero(n, n);
    for (std::size_t j = 0; j < scenario.num_users(); ++j) {
        const auto& u = scenario.user(j);
        const std::size_t i = u.serving_rrh;
        const double d = interference_plus_noise(scenario, s, i, j);
        const double gamma = p[idx(i)] * scenario.gain(i, j) / d;
        const double ln_rate = std::log1p(gamma);
        if (!(ln_rate > 0.0)) throw DivergentLoadError(fmt::format("user {} of RRH {} has zero SINR", j, i));
        const double coef =
            u.demand_bps / w * p[idx(i)] * kLn2 * gamma / (d * (1.0 + gamma) * ln_rate * ln_rate);
        for (std::size_t k = 0; k < scenario.num_rrh(); ++k)
            if (k != i) jac(idx(i), idx(k)) += coef * scenario.gain(k, j);
    }
    return jac;
}

CouplingMatrix coupling_matrix(const Scenario& scenario, const Vector& p) {
    check_sizes(scenario, p, "p");
    CouplingMatrix h = s_coupling_matrix(scenario);
    return h * p.asDiagonal();
}

CouplingMatrix s_coupling_matrix(const Scenario& scenario) {
    const Index n = static_cast<Index>(scenario.num_rrh());
    const double w = scenario.bandwidth_hz();
    CouplingMatrix h = CouplingMatrix::Zero(n, n);
    for (std::size_t j = 0; j < scenario.num_users(); ++j) {
        const auto& u = scenario.user(j);
        const std::size_t i = u.serving_rrh;
        const double own = scenario.gain(i, j);
        if (!(own > 0.0)) throw DomainError(fmt::format("serving gain of user {} is zero", j));
        for (std::size_t k = 0; k < scenario.num_rrh(); ++k)
            if (k != i) h(idx(i), idx(k)) += kLn2 * u.demand_bps * scenario.gain(k, j) / (w * own);
    }
    return h;
}

CellResponse::CellResponse(const Scenario& scenario, const Vector& s, std::size_t i) : rrh_(i) {
    check_sizes(scenario, s, "s");
    const auto served = scenario.users_of(i);
    rate_ratio_.reserve(served.size());
    gain_to_noise_.reserve(served.size());
    for (std::size_t j : served) {
        rate_ratio_.push_back(scenario.user(j).demand_bps / scenario.bandwidth_hz());
        gain_to_noise_.push_back(scenario.gain(i, j) / interference_plus_noise(scenario, s, i, j));
    }
}

double CellResponse::load(double p) const {
    double total = 0.0;
    for (std::size_t n = 0; n < rate_ratio_.size(); ++n)
        total += rate_ratio_[n] * inverse_rate(gain_to_noise_[n] * p, rrh_, n);
    return total;
}

double CellResponse::load_derivative(double p) const {
    double total = 0.0;
    for (std::size_t n = 0; n < rate_ratio_.size(); ++n) {
        const double c = gain_to_noise_[n];
        const double ln_rate = std::log1p(c * p);
        total -= rate_ratio_[n] * kLn2 * c / ((1.0 + c * p) * ln_rate * ln_rate);
    }
    return total;
}

double CellResponse::s_value(double p) const { return p * load(p); }

double CellResponse::s_derivative(double p) const {
    double total = 0.0;
    for (std::size_t n = 0; n < rate_ratio_.size(); ++n) {
        const double z = gain_to_noise_[n] * p;
        const double ln_rate = std::log1p(z);
        if (!(ln_rate > 0.0)) throw DivergentLoadError(fmt::format("user {} of RRH {} has zero SINR", n, rrh_));
        total += rate_ratio_[n] * kLn2 * log_gap(z) / (ln_rate * ln_rate);
    }
    return total;
}

double CellResponse::full_load_power(double lo, double hi) const {
    if (load(lo) <= 1.0) return lo;
    if (load(hi) > 1.0) return hi;
    for (int it = 0; it < 200 && hi / lo - 1.0 > 1e-15; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (load(mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace cranopt
