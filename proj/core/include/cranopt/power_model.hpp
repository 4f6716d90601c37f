#ifndef CRANOPT_POWER_MODEL_HPP
#define CRANOPT_POWER_MODEL_HPP

#include "cranopt/common.hpp"

namespace cranopt {

/// Power-model constants, all in linear SI units.
struct PowerParams {
    double eta = 0.1364;
    double p_rf = dbm_to_watts(12.8);
    double p0 = 10.0;
    double pmax_bbu = 100.0;
    double delta_p = 0.44;
    double x_cap = 314.0;
    double kappa = 104.89;
    double p_min = dbm_to_watts(12.0);
    double p_max = dbm_to_watts(42.0);
    int m_max = 5;

    /// Amplifier coefficient 1 / eta.
    double a() const { return 1.0 / eta; }
    /// Baseband cost per unit load, delta_p * pmax_bbu * kappa / x_cap.
    double b() const { return delta_p * pmax_bbu * kappa / x_cap; }

    void validate() const;

    friend bool operator==(const PowerParams&, const PowerParams&) = default;
};

struct PowerBreakdown {
    double total = 0.0;
    double wireless = 0.0;
    double circuit = 0.0;
    double baseband = 0.0;
    int m = 0;
    double y = 0.0;
};

/// sum_i kappa * x_i, the processing units the loads require.
double processing_demand(const Vector& x, const PowerParams& params);

/// Least m with processing_demand(x) <= m * x_cap; 0 for an idle network.
int required_bbus(const Vector& x, const PowerParams& params);

/// Average utilisation of m active BBUs. 0 for m = 0 with idle loads.
double bbu_utilization(const Vector& x, int m, const PowerParams& params);

double baseband_power(const Vector& x, int m, const PowerParams& params);

double rrh_power(double p, double x, const PowerParams& params);

/// m * p0 + sum_i (a p_i x_i + b x_i + p_rf). Throws CapacityError if m < required_bbus(x).
PowerBreakdown total_power(const Vector& p, const Vector& x, int m, const PowerParams& params);

}  // namespace cranopt

#endif  // CRANOPT_POWER_MODEL_HPP
