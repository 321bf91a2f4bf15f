/// @file operators.hpp
/// @brief Discrete cylindrical operators, residual evaluation and the weighted
/// radial Poincare check.
///
/// Every kernel runs either as an OpenMP loop over (theta, r) rows or as the
/// plain serial reference. Reductions are formed per row and then summed in row
/// order, so the parallel result does not depend on the number of threads.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <span>
#include <vector>

#include "tcflow/grid.hpp"

namespace tcflow {

enum class Exec { serial, parallel };

struct EquationNorms {
    double linf = 0.0;
    double l2 = 0.0;
};

struct ResidualReport {
    EquationNorms radial;
    EquationNorms azimuthal;
    EquationNorms axial;
    EquationNorms continuity;
    double h_r = 0.0;
    double h_z = 0.0;

    double momentum_linf() const;
    /// Largest L-infinity norm over the four equations.
    double max_linf() const;
};

/// Pointwise residuals. `radial` is laid out like Field::v_r (wall faces hold
/// zero); the other three like the cell-centred arrays.
struct ResidualFields {
    std::vector<double> radial;
    std::vector<double> azimuthal;
    std::vector<double> axial;
    std::vector<double> continuity;
};

/// Cell-centred (1/r) d(r v_r)/dr + (1/r) d v_theta/dtheta + d v_z/dz.
std::vector<double> divergence(const Field& field, Exec exec = Exec::parallel);

/// Sum over cells of r * divergence * h_r h_z (the discrete Gauss identity
/// makes this vanish for wall-compatible periodic fields).
double weighted_divergence_sum(const Field& field);

ResidualFields residual_fields_axisym(const Field& field, const PressureField& pressure,
                                      double axial_gradient, double nu, bool advect = true,
                                      Exec exec = Exec::parallel);

/// Residual norms of the axisymmetric system (ns).
ResidualReport momentum_residual_axisym(const Field& field, const PressureField& pressure,
                                        double axial_gradient, double nu,
                                        Exec exec = Exec::parallel);

ResidualFields residual_fields_general(const Field& field, const PressureField& pressure,
                                       double nu, Exec exec = Exec::parallel);

/// Residual norms of the theta-resolved system (ns2); the imposed axial gradient
/// is read from the pressure field.
ResidualReport momentum_residual_general(const Field& field, const PressureField& pressure,
                                         double nu, Exec exec = Exec::parallel);

/// r-weighted midpoint norms of pointwise residuals.
ResidualReport summarize(const Grid& grid, const ResidualFields& fields,
                         Exec exec = Exec::parallel);

/// (1/r) d/dr (r du/dr) + d^2u/dz^2 for a cell-centred scalar on an
/// axisymmetric grid, reaching the walls through the quartic ghost values.
std::vector<double> scalar_laplacian(const Grid& grid, std::span<const double> cell_values,
                                     double wall_inner, double wall_outer);

/// L-infinity norm of the centred theta-difference of all three components.
double theta_asymmetry(const Field& field);

/// Samples f(r, z) at radial nodes (the n_r + 1 faces, walls included) and
/// axial cell centres; layout index i * n_z + j.
std::vector<double> sample_profile(const Grid& grid, const std::function<double(double, double)>& f);

/// Cutoff phi_L(z): 1 for |z| < L-1, L-|z| on the ramp, 0 beyond |z| > L.
double phi_l(double z, double l_cut);

struct PoincareReport {
    double norm_f_omega = 0.0;
    double norm_df_omega = 0.0;
    double ratio_omega = 0.0;
    double norm_f_strip = 0.0;
    double norm_df_strip = 0.0;
    double ratio_strip = 0.0;
    double sqrt_cp = 0.0;
    /// sqrt(C_P) (1 + 5 h_r)
    double bound = 0.0;
    bool degenerate_omega = false;
    bool degenerate_strip = false;
    /// Both non-degenerate ratios lie within the bound.
    bool holds = false;
};

/// Weighted radial Poincare check of a wall-vanishing profile sampled by
/// sample_profile, over the periodic cell and over the strip L-1 <= |z| <= L.
PoincareReport poincare_check(std::span<const double> profile, const Grid& grid, double l_cut);

struct PoincareCase {
    std::string name;
    PoincareReport report;
};

/// The fundamental mode sin(pi (r - R1)/(R2 - R1)) followed by `count` random
/// wall-vanishing profiles: mixes of the first three radial sine modes times a
/// positive axial modulation periodic in z_period. Deterministic in `seed`.
std::vector<PoincareCase> poincare_suite(const Grid& grid, double l_cut, int count,
                                         std::uint64_t seed);

}  // namespace tcflow
