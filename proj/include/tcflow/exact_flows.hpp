/// @file exact_flows.hpp
/// @brief Closed-form canonical and generalized Taylor-Couette flows.
///
/// The generalized flow is
///   v_r = 0,  v_theta = A r + B / r,
///   v_z = (a / 4 nu) [ (r^2 - R1^2) - (R2^2 - R1^2) log(r / R1) / log(R2 / R1) ],
///   p   = a z + b + (A^2/2) r^2 + 2 A B log r - (B^2/2) / r^2.
/// Each quantity is available in two algebraic forms (radii and angular
/// velocities, or the ratios mu and eta) so the forms can be checked against
/// one another.
#pragma once

#include <utility>

#include "tcflow/annulus.hpp"
#include "tcflow/grid.hpp"

namespace tcflow {

struct TCCoefficients {
    double a_coef = 0.0;  // A, angular velocity
    double b_coef = 0.0;  // B, length^2 * angular velocity
    Annulus annulus;
};

struct GeneralizedTC {
    TCCoefficients coeffs;
    double axial_gradient = 0.0;   // a
    double pressure_offset = 0.0;  // b
    double viscosity = 1.0;

    const Annulus& annulus() const { return coeffs.annulus; }
};

/// A and B from the two wall conditions, written with R_j and omega_j.
TCCoefficients tc_coefficients(const Annulus& annulus, const FlowConfig& config);

/// A and B written with mu = omega2/omega1 and eta = R1/R2 (or the omega1 = 0 branch).
TCCoefficients tc_coefficients_mu_eta(const Annulus& annulus, const FlowConfig& config);

GeneralizedTC make_generalized_tc(const Annulus& annulus, const FlowConfig& config,
                                  double axial_gradient = 0.0, double pressure_offset = 0.0);

double eval_vtheta(const TCCoefficients& coeffs, double r);

/// Annular Poiseuille profile, (R, omega) form with the constant D made explicit.
double eval_vz(const GeneralizedTC& gtc, double r);

/// Same profile in the eta form R1^2 [(r/R1)^2 - 1 + (1 - eta^2)/(eta^2 log eta) log(r/R1)].
double eval_vz_eta_form(const GeneralizedTC& gtc, double r);

/// Axial profile per unit pressure gradient: eval_vz with a = 1.
double poiseuille_shape(const Annulus& annulus, double nu, double r);

/// Total pressure a z + b + h(r).
double eval_pressure(const GeneralizedTC& gtc, double r, double z);

/// z-independent part b + h(r).
double eval_pressure_radial(const GeneralizedTC& gtc, double r);

/// h(r) written out in R_j, omega_j, exactly as obtained by integrating the
/// radial balance; used to cross-check eval_pressure_radial.
double eval_pressure_radial_expanded(const Annulus& annulus, const FlowConfig& config,
                                     double pressure_offset, double r);

/// Samples the flow at the staggered locations of `grid` (every theta slice
/// when the grid is theta-resolved). The pressure field stores b + h(r) and
/// carries `a` as its axial gradient.
std::pair<Field, PressureField> sample_on_grid(const GeneralizedTC& gtc, const Grid& grid);

}  // namespace tcflow
