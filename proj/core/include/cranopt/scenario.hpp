#ifndef CRANOPT_SCENARIO_HPP
#define CRANOPT_SCENARIO_HPP

#include "cranopt/common.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cranopt {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

enum class Layout { hexagonal, line };

/// Distance-dependent attenuation, intercept + slope * log10(d_km).
struct PathlossModel {
    double intercept_db = 128.1;
    double slope_db = 37.6;

    friend bool operator==(const PathlossModel&, const PathlossModel&) = default;
};

/// Generator settings. Defaults follow the standard 3GPP-style macro setup.
struct ScenarioConfig {
    int n_rrh = 3;
    int users_per_rrh = 21;
    double inter_site_distance_m = 500.0;
    double min_distance_m = 35.0;
    PathlossModel pathloss{};
    double shadowing_sigma_db = 4.0;
    double noise_density_dbm_hz = -174.0;
    double bandwidth_hz = 10e6;
    double demand_bps = 750e3;
    std::uint64_t seed = 1;
    Layout layout = Layout::hexagonal;
    // Resource-block granularity. Recorded for provenance; the load model is continuous.
    double rb_bandwidth_hz = 180e3;
    double rb_duration_s = 0.5e-3;
    int max_sampling_attempts = 10000;

    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct User {
    Point position;
    double demand_bps = 0.0;
    std::size_t serving_rrh = 0;

    friend bool operator==(const User&, const User&) = default;
};

/// Immutable network instance. Gains are linear, row = RRH, column = user.
class Scenario {
public:
    Scenario(std::vector<Point> rrh_positions, std::vector<User> users, Matrix gains,
             double noise_w, double bandwidth_hz, std::uint64_t seed = 0,
             std::optional<ScenarioConfig> config = std::nullopt);

    std::size_t num_rrh() const { return rrh_positions_.size(); }
    std::size_t num_users() const { return users_.size(); }

    const std::vector<Point>& rrh_positions() const { return rrh_positions_; }
    const std::vector<User>& users() const { return users_; }
    const User& user(std::size_t j) const { return users_[j]; }
    const Matrix& gains() const { return gains_; }
    double gain(std::size_t i, std::size_t j) const { return gains_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
    double noise_w() const { return noise_w_; }
    double bandwidth_hz() const { return bandwidth_hz_; }
    std::uint64_t seed() const { return seed_; }
    const std::optional<ScenarioConfig>& config() const { return config_; }

    /// Users associated with RRH i, in increasing index order.
    std::span<const std::size_t> users_of(std::size_t i) const { return served_[i]; }

    /// Copy with every demand multiplied by factor.
    Scenario with_scaled_demands(double factor) const;

    friend bool operator==(const Scenario& a, const Scenario& b);

private:
    void validate() const;

    std::vector<Point> rrh_positions_;
    std::vector<User> users_;
    Matrix gains_;
    double noise_w_;
    double bandwidth_hz_;
    std::uint64_t seed_;
    std::optional<ScenarioConfig> config_;
    std::vector<std::vector<std::size_t>> served_;
};

/// Attenuation in dB at distance d_km (kilometres). Throws DomainError for d_km <= 0.
double pathloss_db(double d_km, const PathlossModel& model = {});

/// Linear gain 10^(-(pathloss + shadow)/10).
double channel_gain(double d_km, double shadow_db, const PathlossModel& model = {});

/// Noise power in watts for a density in dBm/Hz integrated over bandwidth_hz.
double noise_power_w(double density_dbm_hz, double bandwidth_hz);

/// RRH coordinates for the configured layout, centred on the origin.
std::vector<Point> rrh_layout(int n_rrh, double inter_site_distance_m, Layout layout);

/// Deterministic for a fixed config (seed included).
Scenario generate(const ScenarioConfig& config);

std::string save(const Scenario& scenario);
Scenario load(std::string_view document);

void save_file(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_file(const std::filesystem::path& path);

}  // namespace cranopt

#endif  // CRANOPT_SCENARIO_HPP
