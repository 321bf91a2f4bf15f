#include "tcflow/exact_flows.hpp"

#include <cmath>
#include <sstream>

#include "tcflow/errors.hpp"

namespace tcflow {
namespace {

void require_in_annulus(const Annulus& annulus, double r) {
    if (!annulus.contains(r)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "radius " << r << " outside annulus [" << annulus.r_inner() << ", "
            << annulus.r_outer() << "]";
        throw ValidationError(msg.str());
    }
}

}  // namespace

TCCoefficients tc_coefficients(const Annulus& annulus, const FlowConfig& config) {
    const double r1s = annulus.r_inner() * annulus.r_inner();
    const double r2s = annulus.r_outer() * annulus.r_outer();
    const double den = r2s - r1s;
    TCCoefficients c{0.0, 0.0, annulus};
    c.a_coef = (r2s * config.omega_outer - r1s * config.omega_inner) / den;
    c.b_coef = r1s * r2s * (config.omega_inner - config.omega_outer) / den;
    return c;
}

TCCoefficients tc_coefficients_mu_eta(const Annulus& annulus, const FlowConfig& config) {
    const NonDimensional nd = non_dimensional(annulus, config);
    const double eta2 = nd.eta * nd.eta;
    const double r1s = annulus.r_inner() * annulus.r_inner();
    TCCoefficients c{0.0, 0.0, annulus};
    if (nd.mu) {
        const double mu = *nd.mu;
        c.a_coef = (mu - eta2) / (1.0 - eta2) * config.omega_inner;
        c.b_coef = (1.0 - mu) / (1.0 - eta2) * config.omega_inner * r1s;
    } else {
        c.a_coef = config.omega_outer / (1.0 - eta2);
        c.b_coef = -config.omega_outer * r1s / (1.0 - eta2);
    }
    return c;
}

GeneralizedTC make_generalized_tc(const Annulus& annulus, const FlowConfig& config,
                                  double axial_gradient, double pressure_offset) {
    config.validate();
    require(std::isfinite(axial_gradient) && std::isfinite(pressure_offset),
            "axial gradient and pressure offset must be finite");
    return GeneralizedTC{tc_coefficients(annulus, config), axial_gradient, pressure_offset,
                         config.viscosity};
}

double eval_vtheta(const TCCoefficients& coeffs, double r) {
    require_in_annulus(coeffs.annulus, r);
    return coeffs.a_coef * r + coeffs.b_coef / r;
}

double poiseuille_shape(const Annulus& annulus, double nu, double r) {
    require_in_annulus(annulus, r);
    const double r1 = annulus.r_inner();
    const double r2 = annulus.r_outer();
    const double d = -(r2 * r2 - r1 * r1) / std::log(r2 / r1);
    return ((r * r - r1 * r1) + d * std::log(r / r1)) / (4.0 * nu);
}

double eval_vz(const GeneralizedTC& gtc, double r) {
    return gtc.axial_gradient * poiseuille_shape(gtc.annulus(), gtc.viscosity, r);
}

double eval_vz_eta_form(const GeneralizedTC& gtc, double r) {
    const Annulus& an = gtc.annulus();
    require_in_annulus(an, r);
    const double r1 = an.r_inner();
    const double eta = r1 / an.r_outer();
    const double eta2 = eta * eta;
    const double x = r / r1;
    const double bracket = x * x - 1.0 + (1.0 - eta2) / (eta2 * std::log(eta)) * std::log(x);
    return gtc.axial_gradient / (4.0 * gtc.viscosity) * r1 * r1 * bracket;
}

double eval_pressure_radial(const GeneralizedTC& gtc, double r) {
    require_in_annulus(gtc.annulus(), r);
    const double a = gtc.coeffs.a_coef;
    const double b = gtc.coeffs.b_coef;
    return gtc.pressure_offset + 0.5 * a * a * r * r + 2.0 * a * b * std::log(r) -
           0.5 * b * b / (r * r);
}

double eval_pressure(const GeneralizedTC& gtc, double r, double z) {
    return gtc.axial_gradient * z + eval_pressure_radial(gtc, r);
}

double eval_pressure_radial_expanded(const Annulus& annulus, const FlowConfig& config,
                                     double pressure_offset, double r) {
    require_in_annulus(annulus, r);
    const double r1s = annulus.r_inner() * annulus.r_inner();
    const double r2s = annulus.r_outer() * annulus.r_outer();
    const double w1 = config.omega_inner;
    const double w2 = config.omega_outer;
    const double den = r2s - r1s;
    const double lin = (r2s * w2 - r1s * w1) / den;
    const double inv = r1s * r2s * (-w2 + w1) / den;
    return pressure_offset + 0.5 * lin * lin * r * r +
           2.0 * r1s * r2s * (-w2 + w1) * (r2s * w2 - r1s * w1) / (den * den) * std::log(r) -
           0.5 * inv * inv / (r * r);
}

std::pair<Field, PressureField> sample_on_grid(const GeneralizedTC& gtc, const Grid& grid) {
    require(grid.annulus() == gtc.annulus(), "grid annulus does not match the flow annulus");
    Field field(grid);
    PressureField pressure(grid);
    field.wall_vtheta_inner = eval_vtheta(gtc.coeffs, grid.annulus().r_inner());
    field.wall_vtheta_outer = eval_vtheta(gtc.coeffs, grid.annulus().r_outer());
    pressure.axial_gradient = gtc.axial_gradient;

    for (int i = 0; i < grid.n_r(); ++i) {
        const double r = grid.r_center(i);
        const double vt = eval_vtheta(gtc.coeffs, r);
        const double vz = eval_vz(gtc, r);
        const double p = eval_pressure_radial(gtc, r);
        for (int k = 0; k < grid.n_theta(); ++k)
            for (int j = 0; j < grid.n_z(); ++j) {
                field.v_theta(k, i, j) = vt;
                field.v_z(k, i, j) = vz;
                pressure(k, i, j) = p;
            }
    }
    return {std::move(field), std::move(pressure)};
}

}  // namespace tcflow
