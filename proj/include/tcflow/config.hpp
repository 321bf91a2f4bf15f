/// @file config.hpp
/// @brief RunConfig: the strict JSON description of one run, with every field
/// overridable from the command line.
///
/// Layout (all sections and keys optional, unknown keys rejected):
///   { "annulus": {"r_inner", "r_outer"},
///     "flow": {"viscosity", "omega_inner", "omega_outer", "axial_gradient", "pressure_offset"},
///     "grid": {"n_r", "n_z", "z_period", "n_theta"},
///     "solver": {"newton_tol", "max_newton", "ptc_initial_dt", "stokes_mode", "exec"},
///     "sweep": {"omega_pairs": [[w1, w2], ...], "amplitudes": [...], "seeds": [...]},
///     "perturbation": {"amplitude", "seed"},
///     "output_dir": "..." }
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tcflow/annulus.hpp"
#include "tcflow/grid.hpp"
#include "tcflow/lab.hpp"
#include "tcflow/solver.hpp"

namespace tcflow {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "TCFLOW_OUTPUT_DIR";

struct RunConfig {
    // Geometry and viscosity have no defaults: each run must state them.
    std::optional<double> r_inner;
    std::optional<double> r_outer;
    std::optional<double> viscosity;
    double omega_inner = 0.0;
    double omega_outer = 0.0;
    double axial_gradient = 0.0;
    double pressure_offset = 0.0;

    int n_r = 32;
    int n_z = 32;
    /// Defaults to 2 (R2 - R1).
    std::optional<double> z_period;
    std::optional<int> n_theta;

    double newton_tol = 1e-10;
    int max_newton = 50;
    std::optional<double> ptc_initial_dt;
    bool stokes_mode = false;
    Exec exec = Exec::parallel;

    std::vector<std::pair<double, double>> omega_pairs;
    std::vector<double> amplitudes;
    std::vector<std::uint64_t> seeds;

    double amplitude = 0.0;
    std::uint64_t seed = 0;

    std::optional<std::string> output_dir;

    /// Throws ValidationError naming the first missing or invalid field. The
    /// viscosity may be left unset for geometry-only commands.
    void validate(bool need_viscosity = true) const;

    Annulus annulus() const;
    FlowConfig flow() const;
    double resolved_z_period() const;
    Grid grid() const;
    SolveOptions solve_options() const;
    SweepConfig sweep_config() const;
};

/// Strict parse; unknown keys, wrong types and out-of-range integers throw
/// ValidationError with the offending key path.
RunConfig parse_run_config(const nlohmann::json& doc);
/// Reads and parses a config file; unreadable files throw IoError, malformed
/// JSON throws ValidationError.
RunConfig load_run_config(const std::filesystem::path& path);
/// Complete echo of the config; parse_run_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& config);

/// Output directory precedence: flag, config, environment, "tcflow_out".
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                         const RunConfig& config);

}  // namespace tcflow
