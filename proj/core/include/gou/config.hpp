#ifndef GOU_CONFIG_HPP
#define GOU_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gou/models.hpp"

namespace gou {

struct SimulationConfig {
    std::uint64_t seed = 0;
    double h = 1.0 / 256.0;
    double theta = 30.0;
    double t_max = 200.0;
    std::uint64_t n_paths = 10000;
    double horizon = 10.0;
    bool has_v0 = false;
    double v0 = 0.0;
    std::uint64_t path_id = 0;
    int blocks = 20;

    bool operator==(const SimulationConfig&) const = default;
};

struct AnalysisConfig {
    std::vector<double> z_grid;
    std::vector<double> x_grid;
    std::vector<double> alpha_grid;
    double ldp_z = 0.0;  // 0: use the largest z of the grid
    std::uint64_t laplace_n = 100000;

    bool operator==(const AnalysisConfig&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    bool dump_paths = false;
    bool plots = true;

    bool operator==(const OutputConfig&) const = default;
};

/// verify-command gates; the defaults are the desk-scale acceptance values.
struct VerifyThresholds {
    double slope_rel_tol = 0.2;
    double plateau_ratio_max = 1.5;
    double constant_factor = 2.0;

    bool operator==(const VerifyThresholds&) const = default;
};

struct RunConfig {
    ModelSpec model;
    SimulationConfig sim;
    AnalysisConfig analysis;
    OutputConfig output;
    VerifyThresholds verify;
    bool model_forced = false;  // Condition A override was applied at parse

    /// Execution knob set from the command line (--workers), deliberately
    /// not part of the config text or its digest: results are identical for
    /// any worker count, so it carries no run semantics.
    int workers = 0;

    bool operator==(const RunConfig&) const;
};

/// Parses the sectioned key-value run configuration. Every key must be
/// known, the seed is mandatory, grids must be strictly ascending, and the
/// model parameters are validated (ConditionAViolation may be bypassed with
/// force_condition_a, in which case model_forced is set).
RunConfig parse_config(const std::string& text, bool force_condition_a = false);

RunConfig parse_config_file(const std::string& path,
                            bool force_condition_a = false);

/// Canonical text form; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

} // namespace gou

#endif
