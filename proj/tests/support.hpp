#ifndef CRANOPT_TESTS_SUPPORT_HPP
#define CRANOPT_TESTS_SUPPORT_HPP

// Independent scalar re-implementations used as oracles. They work on plain
// std::vector data and share no code with the library beyond the Scenario accessors.

#include "cranopt/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace support {

using Vec = std::vector<double>;

inline Vec to_vec(const cranopt::Vector& v) { return Vec(v.data(), v.data() + v.size()); }

inline cranopt::Vector to_eigen(const Vec& v) {
    cranopt::Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Scenario from explicit gains gains[i][j], one serving RRH and demand per user.
inline cranopt::Scenario hand_scenario(const std::vector<Vec>& gains, const std::vector<std::size_t>& serving,
                                       const Vec& demand_bps, double noise_w, double bandwidth_hz = 10e6) {
    const std::size_t n = gains.size();
    const std::size_t users = serving.size();
    std::vector<cranopt::Point> rrh(n);
    for (std::size_t i = 0; i < n; ++i) rrh[i] = {500.0 * static_cast<double>(i), 0.0};
    std::vector<cranopt::User> us(users);
    cranopt::Matrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(users));
    for (std::size_t j = 0; j < users; ++j) {
        us[j] = {{500.0 * static_cast<double>(serving[j]) + 100.0, 0.0}, demand_bps[j], serving[j]};
        for (std::size_t i = 0; i < n; ++i) g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gains[i][j];
    }
    return cranopt::Scenario(std::move(rrh), std::move(us), std::move(g), noise_w, bandwidth_hz);
}

// Small random scenario on a line layout; tight enough to be interference coupled.
inline cranopt::Scenario small_random(std::uint64_t seed, int n_rrh, int users_per_rrh, double demand_bps) {
    cranopt::ScenarioConfig c;
    c.n_rrh = n_rrh;
    c.users_per_rrh = users_per_rrh;
    c.demand_bps = demand_bps;
    c.layout = cranopt::Layout::line;
    c.seed = seed;
    return cranopt::generate(c);
}

namespace oracle {

inline double pathloss_db(double d_km) { return 128.1 + 37.6 * std::log10(d_km); }

inline double sinr(const cranopt::Scenario& sc, const Vec& p, const Vec& x, std::size_t i, std::size_t j) {
    double interference = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (k != i) interference += p[k] * x[k] * sc.gain(k, j);
    return p[i] * sc.gain(i, j) / (interference + sc.noise_w());
}

inline Vec load(const cranopt::Scenario& sc, const Vec& p, const Vec& x) {
    Vec f(p.size(), 0.0);
    for (std::size_t j = 0; j < sc.num_users(); ++j) {
        const std::size_t i = sc.user(j).serving_rrh;
        const double rate_per_hz = std::log(1.0 + sinr(sc, p, x, i, j)) / std::log(2.0);
        f[i] += sc.user(j).demand_bps / (sc.bandwidth_hz() * rate_per_hz);
    }
    return f;
}

// t_i(s, p) = p_i * f_i(p, s / p).
inline Vec t_map(const cranopt::Scenario& sc, const Vec& s, const Vec& p) {
    Vec t(p.size(), 0.0);
    for (std::size_t j = 0; j < sc.num_users(); ++j) {
        const std::size_t i = sc.user(j).serving_rrh;
        double interference = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k)
            if (k != i) interference += s[k] * sc.gain(k, j);
        const double gamma = p[i] * sc.gain(i, j) / (interference + sc.noise_w());
        t[i] += sc.user(j).demand_bps * p[i] / (sc.bandwidth_hz() * std::log2(1.0 + gamma));
    }
    return t;
}

// Power model term by term, as one would lay it out in a spreadsheet.
struct PowerTerms {
    double eta = 0.1364;
    double p_rf_w = 0.019054607179632473;  // 12.8 dBm
    double p0 = 10.0;
    double pmax = 100.0;
    double delta = 0.44;
    double x_cap = 314.0;
    double kappa = 104.89;
};

inline double total_power(const PowerTerms& c, const Vec& p, const Vec& x, int m) {
    double rrh = 0.0;
    double demand = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        rrh += p[i] * x[i] / c.eta + c.p_rf_w;
        demand += c.kappa * x[i];
    }
    const double y = m == 0 ? 0.0 : demand / (m * c.x_cap);
    return rrh + m * (c.p0 + c.delta * c.pmax * y);
}

}  // namespace oracle

}  // namespace support

#endif  // CRANOPT_TESTS_SUPPORT_HPP
