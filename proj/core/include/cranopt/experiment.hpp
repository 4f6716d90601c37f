#ifndef CRANOPT_EXPERIMENT_HPP
#define CRANOPT_EXPERIMENT_HPP

#include "cranopt/alternating_solver.hpp"
#include "cranopt/baselines.hpp"
#include "cranopt/joint_solver.hpp"
#include "cranopt/power_model.hpp"
#include "cranopt/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cranopt {

enum class Algorithm { joint, esa, tpoa };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

/// Power of one RRH swept while the others stay fixed.
struct LoadSweepConfig {
    std::size_t varied_rrh = 0;
    double lo_dbm = 12.0;
    double hi_dbm = 42.0;
    int points = 121;
    /// Power of every other RRH; p_max when unset.
    std::optional<double> fixed_power_w;
    int m = 1;
};

struct AxisSweepConfig {
    std::vector<int> values;
    std::vector<std::uint64_t> seeds;
    std::vector<Algorithm> algorithms{Algorithm::joint, Algorithm::tpoa};
    int jobs = 1;
};

struct ExperimentConfig {
    ScenarioConfig scenario;
    PowerParams power;
    SolverConfig solver;
    EsaConfig esa;
    TpoaConfig tpoa;
    LoadSweepConfig load_sweep;
    AxisSweepConfig axis_sweep;
    /// BBU count for single fixed-m traces.
    int trace_m = 3;
};

enum class SweepAxis { rrh, users };

/// Built-in settings for each CLI mode before a config file is applied:
/// "solve", "trace", "sweep-load", "sweep-rrh", "sweep-users", "baseline", "generate".
ExperimentConfig preset(std::string_view mode);

/// Overlays a JSON document with optional sections scenario, power, solver, esa,
/// tpoa, sweep and trace on `base`.
ExperimentConfig merge_experiment_config(ExperimentConfig base, std::string_view document);

SolveResult run_algorithm(const Scenario& scenario, const ExperimentConfig& config, Algorithm algorithm);

/// Fixed-m result in the SolveResult shape used by the writers below.
SolveResult to_solve_result(const FixedMResult& fixed);

/// JSON result document. Keys are sorted, so equal inputs give equal bytes.
std::string result_document(const Scenario& scenario, const PowerParams& params, const SolveResult& result);

/// Throws ValidationError unless `document` has the layout written by result_document.
void validate_result_document(std::string_view document);

/// One row per outer iteration: iteration, p_total, dp2, dual, max_violation, step_fraction.
std::string trace_csv(const SolveResult& result);

struct LoadSweepRow {
    double p_w = 0.0;
    double x = 0.0;
    /// The varied RRH's own amplifier, baseband and total terms.
    double wtp = 0.0;
    double bpp = 0.0;
    double total = 0.0;
    /// The same terms summed over the network, with m * p0 in net_bpp and net_total.
    double net_wtp = 0.0;
    double net_bpp = 0.0;
    double net_total = 0.0;
    bool feasible = false;
};

std::vector<LoadSweepRow> run_load_sweep(const Scenario& scenario, const PowerParams& params,
                                         const LoadSweepConfig& config);
std::string load_sweep_csv(const std::vector<LoadSweepRow>& rows);

struct SweepRow {
    int axis = 0;
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::joint;
    /// optimal, infeasible, non_converged or error.
    std::string status;
    double total = 0.0;
    double wtp = 0.0;
    double bpp = 0.0;
    int m_star = 0;
    std::string message;
};

/// Rows ordered by axis value, then seed, then algorithm, whatever `jobs` is.
std::vector<SweepRow> run_axis_sweep(const ExperimentConfig& config, SweepAxis axis);

std::string sweep_csv(const std::vector<SweepRow>& rows);
/// Mean over the optimal rows of each (axis, algorithm), with row counts.
std::string sweep_aggregate_csv(const std::vector<SweepRow>& rows);

/// True when every row is optimal or infeasible.
bool all_terminal(const std::vector<SweepRow>& rows);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace cranopt

#endif  // CRANOPT_EXPERIMENT_HPP
