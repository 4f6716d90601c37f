#include "cranopt/scenario.hpp"

#include "json_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>

namespace cranopt {

namespace {

// Portable draws on top of mt19937_64, whose output sequence is fixed by the
// standard; the <random> distributions are not, so they are avoided here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void ScenarioConfig::validate() const {
    if (n_rrh < 1) throw ValidationError("n_rrh must be at least 1");
    if (users_per_rrh < 0) throw ValidationError("users_per_rrh must be non-negative");
    if (!positive_finite(inter_site_distance_m)) throw ValidationError("inter_site_distance_m must be positive");
    if (!positive_finite(min_distance_m)) throw ValidationError("min_distance_m must be positive");
    if (min_distance_m >= inter_site_distance_m / 2.0)
        throw ValidationError("min_distance_m must be below the coverage radius inter_site_distance_m / 2");
    if (!std::isfinite(pathloss.intercept_db) || !positive_finite(pathloss.slope_db))
        throw ValidationError("pathloss slope must be positive");
    if (!(shadowing_sigma_db >= 0.0)) throw ValidationError("shadowing_sigma_db must be non-negative");
    if (!std::isfinite(noise_density_dbm_hz)) throw ValidationError("noise_density_dbm_hz must be finite");
    if (!positive_finite(bandwidth_hz)) throw ValidationError("bandwidth_hz must be positive");
    if (!positive_finite(demand_bps)) throw ValidationError("demand_bps must be positive");
    if (!positive_finite(rb_bandwidth_hz) || !positive_finite(rb_duration_s))
        throw ValidationError("resource block size must be positive");
    if (max_sampling_attempts < 1) throw ValidationError("max_sampling_attempts must be at least 1");
}

Scenario::Scenario(std::vector<Point> rrh_positions, std::vector<User> users, Matrix gains,
                   double noise_w, double bandwidth_hz, std::uint64_t seed,
                   std::optional<ScenarioConfig> config)
    : rrh_positions_(std::move(rrh_positions)),
      users_(std::move(users)),
      gains_(std::move(gains)),
      noise_w_(noise_w),
      bandwidth_hz_(bandwidth_hz),
      seed_(seed),
      config_(std::move(config)) {
    validate();
    served_.resize(rrh_positions_.size());
    for (std::size_t j = 0; j < users_.size(); ++j) served_[users_[j].serving_rrh].push_back(j);
}

void Scenario::validate() const {
    if (rrh_positions_.empty()) throw ValidationError("scenario needs at least one RRH");
    if (static_cast<std::size_t>(gains_.rows()) != rrh_positions_.size())
        throw DimensionError(fmt::format("gains has {} rows but there are {} RRHs", gains_.rows(),
                                         rrh_positions_.size()));
    if (static_cast<std::size_t>(gains_.cols()) != users_.size())
        throw DimensionError(fmt::format("gains has {} columns but there are {} users", gains_.cols(),
                                         users_.size()));
    if (!positive_finite(noise_w_)) throw ValidationError("noise power must be positive");
    if (!positive_finite(bandwidth_hz_)) throw ValidationError("bandwidth must be positive");
    for (std::size_t j = 0; j < users_.size(); ++j) {
        if (!positive_finite(users_[j].demand_bps))
            throw ValidationError(fmt::format("user {} has non-positive demand", j));
        if (users_[j].serving_rrh >= rrh_positions_.size())
            throw ValidationError(fmt::format("user {} is served by unknown RRH {}", j, users_[j].serving_rrh));
    }
    for (Eigen::Index i = 0; i < gains_.rows(); ++i)
        for (Eigen::Index j = 0; j < gains_.cols(); ++j)
            if (!positive_finite(gains_(i, j)))
                throw ValidationError(fmt::format("gain ({}, {}) must be positive", i, j));
}

Scenario Scenario::with_scaled_demands(double factor) const {
    if (!positive_finite(factor)) throw DomainError("demand scale factor must be positive");
    std::vector<User> scaled = users_;
    for (auto& u : scaled) u.demand_bps *= factor;
    std::optional<ScenarioConfig> config = config_;
    if (config) config->demand_bps *= factor;
    return Scenario(rrh_positions_, std::move(scaled), gains_, noise_w_, bandwidth_hz_, seed_, config);
}

bool operator==(const Scenario& a, const Scenario& b) {
    return a.rrh_positions_ == b.rrh_positions_ && a.users_ == b.users_ &&
           a.gains_.rows() == b.gains_.rows() && a.gains_.cols() == b.gains_.cols() &&
           a.gains_ == b.gains_ && a.noise_w_ == b.noise_w_ && a.bandwidth_hz_ == b.bandwidth_hz_ &&
           a.seed_ == b.seed_ && a.config_ == b.config_;
}

double pathloss_db(double d_km, const PathlossModel& model) {
    if (!(d_km > 0.0) || !std::isfinite(d_km))
        throw DomainError(fmt::format("pathloss distance must be positive, got {} km", d_km));
    return model.intercept_db + model.slope_db * std::log10(d_km);
}

double channel_gain(double d_km, double shadow_db, const PathlossModel& model) {
    return std::pow(10.0, -(pathloss_db(d_km, model) + shadow_db) / 10.0);
}

double noise_power_w(double density_dbm_hz, double bandwidth_hz) {
    if (!positive_finite(bandwidth_hz)) throw DomainError("bandwidth must be positive");
    return dbm_to_watts(density_dbm_hz + 10.0 * std::log10(bandwidth_hz));
}

std::vector<Point> rrh_layout(int n_rrh, double isd, Layout layout) {
    if (n_rrh < 1) throw ValidationError("n_rrh must be at least 1");
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(n_rrh));
    if (layout == Layout::line) {
        for (int i = 0; i < n_rrh; ++i) out.push_back({isd * i, 0.0});
        return out;
    }
    // Hexagonal lattice in axial coordinates; take the n sites nearest the origin,
    // ordered by ring then counter-clockwise angle from the +x axis.
    int rings = 0;
    while (1 + 3 * rings * (rings + 1) < n_rrh) ++rings;
    struct Site {
        int norm;
        double angle;
        Point pos;
    };
    std::vector<Site> sites;
    for (int q = -rings; q <= rings; ++q) {
        for (int r = -rings; r <= rings; ++r) {
            const int norm = q * q + q * r + r * r;
            const Point pos{isd * (q + 0.5 * r), isd * (std::sqrt(3.0) / 2.0) * r};
            double angle = (norm == 0) ? 0.0 : std::atan2(pos.y, pos.x);
            if (angle < 0.0) angle += 2.0 * std::numbers::pi;
            sites.push_back({norm, angle, pos});
        }
    }
    std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
        return std::tie(a.norm, a.angle) < std::tie(b.norm, b.angle);
    });
    for (int i = 0; i < n_rrh; ++i) out.push_back(sites[static_cast<std::size_t>(i)].pos);
    return out;
}

Scenario generate(const ScenarioConfig& config) {
    config.validate();
    Rng rng(config.seed);
    std::vector<Point> rrhs = rrh_layout(config.n_rrh, config.inter_site_distance_m, config.layout);
    const double radius = config.inter_site_distance_m / 2.0;

    std::vector<User> users;
    users.reserve(static_cast<std::size_t>(config.n_rrh * config.users_per_rrh));
    for (std::size_t i = 0; i < rrhs.size(); ++i) {
        for (int u = 0; u < config.users_per_rrh; ++u) {
            int attempts = 0;
            for (;;) {
                if (++attempts > config.max_sampling_attempts)
                    throw GenerationError(fmt::format("could not place a user of RRH {} after {} attempts", i,
                                                      config.max_sampling_attempts));
                const double rho = radius * std::sqrt(rng.uniform());
                const double theta = 2.0 * std::numbers::pi * rng.uniform();
                if (rho < config.min_distance_m) continue;
                users.push_back({{rrhs[i].x + rho * std::cos(theta), rrhs[i].y + rho * std::sin(theta)},
                                 config.demand_bps,
                                 i});
                break;
            }
        }
    }

    Matrix gains(static_cast<Eigen::Index>(rrhs.size()), static_cast<Eigen::Index>(users.size()));
    for (std::size_t i = 0; i < rrhs.size(); ++i) {
        for (std::size_t j = 0; j < users.size(); ++j) {
            const double shadow = config.shadowing_sigma_db * rng.normal();
            const double d_km = distance(rrhs[i], users[j].position) / 1000.0;
            gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                channel_gain(d_km, shadow, config.pathloss);
        }
    }
    return Scenario(std::move(rrhs), std::move(users), std::move(gains),
                    noise_power_w(config.noise_density_dbm_hz, config.bandwidth_hz), config.bandwidth_hz,
                    config.seed, config);
}

namespace {
constexpr const char* kGainsPlaceholder = "@@GAINS@@";
}

std::string save(const Scenario& scenario) {
    using detail::json;
    json doc;
    json meta;
    meta["seed"] = scenario.seed();
    meta["config"] = scenario.config() ? detail::to_json(*scenario.config()) : json(nullptr);
    doc["meta"] = std::move(meta);
    json rrhs = json::array();
    for (const auto& p : scenario.rrh_positions()) rrhs.push_back({p.x, p.y});
    doc["rrhs"] = std::move(rrhs);
    json users = json::array();
    for (const auto& u : scenario.users())
        users.push_back({{"x", u.position.x}, {"y", u.position.y}, {"demand", u.demand_bps}, {"serving", u.serving_rrh}});
    doc["users"] = std::move(users);
    doc["noise_w"] = scenario.noise_w();
    doc["bandwidth_hz"] = scenario.bandwidth_hz();
    doc["gains"] = kGainsPlaceholder;

    // Gains are written by hand: scientific notation, 17 significant digits, one row per line.
    std::string gains_text = "[";
    const Matrix& g = scenario.gains();
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        gains_text += (i == 0) ? "\n    [" : ",\n    [";
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            if (j > 0) gains_text += ", ";
            gains_text += fmt::format("{:.16e}", g(i, j));
        }
        gains_text += "]";
    }
    gains_text += "\n  ]";

    std::string text = doc.dump(2);
    const std::string quoted = fmt::format("\"{}\"", kGainsPlaceholder);
    text.replace(text.find(quoted), quoted.size(), gains_text);
    text += "\n";
    return text;
}

Scenario load(std::string_view document) {
    using detail::json;
    using detail::require;
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ValidationError(fmt::format("malformed scenario document: {}", e.what()));
    }
    try {
        const json& meta = require(doc, "meta", "scenario");
        const auto seed = require(meta, "seed", "meta").get<std::uint64_t>();
        std::optional<ScenarioConfig> config;
        if (meta.contains("config") && !meta["config"].is_null()) {
            ScenarioConfig c;
            detail::merge_json(meta["config"], c);
            config = c;
        }

        std::vector<Point> rrhs;
        for (const auto& r : require(doc, "rrhs", "scenario")) {
            if (!r.is_array() || r.size() != 2) throw ValidationError("each RRH position must be [x, y]");
            rrhs.push_back({r[0].get<double>(), r[1].get<double>()});
        }
        std::vector<User> users;
        for (const auto& u : require(doc, "users", "scenario")) {
            const auto serving = require(u, "serving", "user").get<std::int64_t>();
            if (serving < 0) throw ValidationError("user serving index must be non-negative");
            users.push_back({{require(u, "x", "user").get<double>(), require(u, "y", "user").get<double>()},
                             require(u, "demand", "user").get<double>(),
                             static_cast<std::size_t>(serving)});
        }
        const json& g = require(doc, "gains", "scenario");
        if (!g.is_array()) throw ValidationError("gains must be an array of rows");
        if (g.size() != rrhs.size())
            throw DimensionError(fmt::format("gains has {} rows but there are {} RRHs", g.size(), rrhs.size()));
        Matrix gains(static_cast<Eigen::Index>(rrhs.size()), static_cast<Eigen::Index>(users.size()));
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!g[i].is_array() || g[i].size() != users.size())
                throw DimensionError(fmt::format("gains row {} must have {} entries", i, users.size()));
            for (std::size_t j = 0; j < users.size(); ++j)
                gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[i][j].get<double>();
        }
        return Scenario(std::move(rrhs), std::move(users), std::move(gains),
                        require(doc, "noise_w", "scenario").get<double>(),
                        require(doc, "bandwidth_hz", "scenario").get<double>(), seed, config);
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("malformed scenario document: {}", e.what()));
    }
}

void save_file(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write {}", path.string()));
    out << save(scenario);
    if (!out) throw Error(fmt::format("failed writing {}", path.string()));
}

Scenario load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot read {}", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load(buffer.str());
}

}  // namespace cranopt
