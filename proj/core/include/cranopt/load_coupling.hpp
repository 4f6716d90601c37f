#ifndef CRANOPT_LOAD_COUPLING_HPP
#define CRANOPT_LOAD_COUPLING_HPP

#include "cranopt/common.hpp"
#include "cranopt/scenario.hpp"

#include <vector>

namespace cranopt {

/// Transmit powers p (W), loads x and the products s = p * x (W).
struct NetworkState {
    Vector p;
    Vector x;
    Vector s;

    static NetworkState from_power_load(Vector p, Vector x);
    static NetworkState from_power_product(Vector p, Vector s);

    /// s_i == p_i x_i to within rel_tol relative.
    bool consistent(double rel_tol = 1e-12) const;
};

/// Dense N x N non-negative matrix with zero diagonal.
using CouplingMatrix = Matrix;

/// SINR of user j when served by RRH i; every k != i interferes with power p_k x_k.
double sinr(const Scenario& scenario, const Vector& p, const Vector& x, std::size_t i, std::size_t j);

/// f(r, x, p): load each RRH needs to serve its users' demands. Entries may exceed 1.
Vector load_map(const Scenario& scenario, const Vector& p, const Vector& x);

enum class FixedPointStatus { converged, infeasible, non_converged };

struct FixedPointOptions {
    double tol = 1e-8;
    int max_iter = 10000;
};

struct FixedPointResult {
    FixedPointStatus status = FixedPointStatus::non_converged;
    Vector x;
    int iterations = 0;
    /// ||x - f(r, x, p)||_inf at the returned x.
    double residual = 0.0;

    bool feasible() const { return status == FixedPointStatus::converged; }
};

/// Least solution of x = f(r, x, p), by monotone iteration from x = 0.
///
/// Iterates never decrease and stay below the least fixed point, so the first
/// iterate with a component above 1 + tol proves infeasibility. A run that
/// reaches max_iter while still increasing is reported infeasible as well;
/// any other exhaustion is non_converged.
FixedPointResult nlce_fixed_point(const Scenario& scenario, const Vector& p,
                                  const FixedPointOptions& options = {});

/// t(s, p): the load map rewritten in s = p * x.
Vector s_map(const Scenario& scenario, const Vector& s, const Vector& p);

/// d t_i / d p_i at fixed s.
double s_map_derivative(const Scenario& scenario, const Vector& s, const Vector& p, std::size_t i);

/// Jacobian d t / d s at (s, p). Zero diagonal, non-negative.
Matrix s_map_jacobian(const Scenario& scenario, const Vector& s, const Vector& p);

/// Load-space linearisation coefficients
///   h_ik = ln2 * sum_{j in J_i} r_j p_k h_kj / (W h_ij),  i != k.
/// Row i gives the low-SINR lower bound of t_i as a linear function of the
/// neighbours' loads x_k.
CouplingMatrix coupling_matrix(const Scenario& scenario, const Vector& p);

/// The same bound expressed in s: coupling_matrix(p) * diag(1/p). Independent of p.
CouplingMatrix s_coupling_matrix(const Scenario& scenario);

/// Own-cell response of RRH i with the neighbours' products s_k (k != i) frozen.
///
/// Precomputes c_j = h_ij / (sum_{k != i} s_k h_kj + sigma^2) for j in J_i, so
/// that the load, t_i and their derivatives are cheap univariate functions of p_i.
class CellResponse {
public:
    CellResponse(const Scenario& scenario, const Vector& s, std::size_t i);

    std::size_t rrh() const { return rrh_; }

    /// f_i(p) = sum_j q_j / log2(1 + c_j p).
    double load(double p) const;
    double load_derivative(double p) const;
    /// t_i(p) = p * f_i(p).
    double s_value(double p) const;
    double s_derivative(double p) const;

    /// Smallest p in [lo, hi] with load(p) <= 1, or hi when even hi overloads.
    double full_load_power(double lo, double hi) const;

private:
    std::size_t rrh_;
    std::vector<double> rate_ratio_;  // q_j = r_j / W
    std::vector<double> gain_to_noise_;  // c_j
};

}  // namespace cranopt

#endif  // CRANOPT_LOAD_COUPLING_HPP
