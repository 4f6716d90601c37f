#include "cranopt/power_model.hpp"

#include <fmt/format.h>

namespace cranopt {

void PowerParams::validate() const {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(fmt::format("{} must be positive", name));
    };
    positive(eta, "eta");
    if (eta > 1.0) throw ValidationError("eta must not exceed 1");
    const auto non_negative = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(fmt::format("{} must be non-negative", name));
    };
    positive(p_rf, "p_rf");
    // Zero idle and dynamic BBU power are allowed so that the baseband term can be switched off.
    non_negative(p0, "p0");
    non_negative(pmax_bbu, "pmax_bbu");
    non_negative(delta_p, "delta_p");
    positive(x_cap, "x_cap");
    positive(kappa, "kappa");
    positive(p_min, "p_min");
    positive(p_max, "p_max");
    if (!(p_min < p_max)) throw ValidationError("p_min must be below p_max");
    if (m_max < 1) throw ValidationError("m_max must be at least 1");
}

double processing_demand(const Vector& x, const PowerParams& params) { return params.kappa * x.sum(); }

int required_bbus(const Vector& x, const PowerParams& params) {
    const double demand = processing_demand(x, params);
    if (!(demand > 0.0)) return 0;
    int m = static_cast<int>(std::ceil(demand / params.x_cap));
    // The division can round across an integer; settle on the exact characterisation.
    while (m > 1 && demand <= (m - 1) * params.x_cap) --m;
    while (demand > m * params.x_cap) ++m;
    return m;
}

double bbu_utilization(const Vector& x, int m, const PowerParams& params) {
    const int needed = required_bbus(x, params);
    if (m < needed)
        throw CapacityError(fmt::format("{} active BBUs cannot carry a load that needs {}", m, needed));
    if (m == 0) return 0.0;
    return processing_demand(x, params) / (m * params.x_cap);
}

double baseband_power(const Vector& x, int m, const PowerParams& params) {
    const double y = bbu_utilization(x, m, params);
    return m * (params.p0 + params.delta_p * params.pmax_bbu * y);
}

double rrh_power(double p, double x, const PowerParams& params) { return x * p / params.eta + params.p_rf; }

PowerBreakdown total_power(const Vector& p, const Vector& x, int m, const PowerParams& params) {
    if (p.size() != x.size()) throw DimensionError("p and x must have equal length");
    PowerBreakdown out;
    out.m = m;
    out.y = bbu_utilization(x, m, params);
    out.wireless = params.a() * p.dot(x);
    out.circuit = static_cast<double>(p.size()) * params.p_rf;
    out.baseband = m * params.p0 + params.b() * x.sum();
    out.total = out.wireless + out.circuit + out.baseband;
    return out;
}

}  // namespace cranopt
