/// @file lab.hpp
/// @brief Liouville experiments: the cutoff phi_L, the energy functionals Y(L)
/// and Y'(L), projection onto the generalized Taylor-Couette family, and
/// Reynolds sweeps below and above the uniqueness thresholds.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcflow/annulus.hpp"
#include "tcflow/exact_flows.hpp"
#include "tcflow/grid.hpp"
#include "tcflow/solver.hpp"

namespace tcflow {

struct CutoffSpec {
    double l_cut = 2.0;
    void validate() const;
};

double phi_l(double z, const CutoffSpec& spec);
/// L-1 <= |z| <= L, where phi_L has nonzero slope.
bool in_strip(double z, const CutoffSpec& spec);

/// L ladder {1.25, 1.5, ..., z_period / 2}; empty when z_period < 2.5.
std::vector<double> l_ladder(double z_period);

enum class EnergyVariant { axial, azimuthal };

std::string to_string(EnergyVariant v);
EnergyVariant parse_energy_variant(const std::string& name);

struct EnergyTerm {
    std::string name;
    double y = 0.0;
    double y_prime = 0.0;
};

struct EnergyReport {
    double l_cut = 0.0;
    double y_value = 0.0;
    double y_prime = 0.0;
    std::vector<EnergyTerm> terms;
};

/// Y(L) against phi_L and Y'(L) over the strip, by r-weighted midpoint sums of
/// the squared derivative terms at their staggered locations. The axial variant
/// uses z-derivatives; the azimuthal one uses theta-derivatives and needs a
/// theta-resolved grid. Requires L <= z_period / 2.
EnergyReport y_functional(const Field& field, double nu, const CutoffSpec& spec,
                          EnergyVariant variant);

/// Y on every rung of the L ladder of the field's grid.
std::vector<EnergyReport> y_ladder(const Field& field, double nu, EnergyVariant variant);

/// nu U^2 |Omega_L| / (R2 - R1)^2, the natural size of Y for velocity scale U.
double energy_scale(const Annulus& annulus, double nu, double velocity_scale, double l_cut);

struct ManifoldFit {
    GeneralizedTC fitted;
    double distance_linf = 0.0;
    double distance_l2 = 0.0;
};

/// Projects an axisymmetric state onto the generalized Taylor-Couette family.
/// (A, B) come from r-weighted least squares of the z-averaged v_theta against
/// {r, 1/r}; a is `imposed_a` when given, otherwise fitted the same way against
/// the unit annular Poiseuille profile; b absorbs the pressure gauge.
ManifoldFit fit_tc_manifold(const Field& field, const PressureField& pressure,
                            std::optional<double> imposed_a, double nu);

/// Velocity-only L-infinity and r-weighted L2 distances between two fields.
std::pair<double, double> field_distance(const Field& a, const Field& b);

struct SweepConfig {
    Annulus annulus{1.0, 2.0};
    double viscosity = 1.0;
    std::vector<std::pair<double, double>> omega_pairs;
    std::vector<double> amplitudes;
    std::vector<std::uint64_t> seeds;
    int n_r = 32;
    int n_z = 32;
    double z_period = 4.0;
    SolveOptions solver;

    void validate() const;
    Grid grid() const;
};

struct ExperimentRecord {
    double omega_inner = 0.0;
    double omega_outer = 0.0;
    double reynolds_inner = 0.0;
    double reynolds_outer = 0.0;
    double amplitude = 0.0;
    std::uint64_t seed = 0;
    bool converged = false;
    std::string status;
    int newton_iterations = 0;
    double final_residual = 0.0;
    double velocity_linf = 0.0;
    Thresholds thresholds;
    /// max(R1|w1|, R2|w2|) < C1
    bool wall_hypothesis = false;
    /// max Reynolds < re_bound
    bool reynolds_hypothesis = false;
    /// Both hypotheses and velocity_linf < C_*.
    bool in_hypothesis = false;
    double fitted_a_coef = 0.0;
    double fitted_b_coef = 0.0;
    double fitted_axial_gradient = 0.0;
    double manifold_distance = 0.0;
    double manifold_distance_l2 = 0.0;
    double distance_tolerance = 0.0;
    bool on_manifold = false;
    double y_max = 0.0;
    double y_prime_max = 0.0;
    double y_scale = 0.0;
};

/// One record per (omega pair, amplitude, seed), in that nesting order. Runs are
/// independent and execute in parallel; the output order is fixed.
std::vector<ExperimentRecord> sweep_reynolds(const SweepConfig& config);

/// Runs a single sweep point.
ExperimentRecord run_experiment(const SweepConfig& config, double omega_inner, double omega_outer,
                                double amplitude, std::uint64_t seed);

struct SweepSummary {
    int runs = 0;
    int converged = 0;
    int on_manifold = 0;
    int out_of_hypothesis = 0;
    /// Converged, within the hypotheses, yet off the manifold.
    int counterexamples = 0;
};

SweepSummary summarize_sweep(const std::vector<ExperimentRecord>& records);

}  // namespace tcflow
