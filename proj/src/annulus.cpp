#include "tcflow/annulus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tcflow/errors.hpp"

namespace tcflow {

Annulus::Annulus(double r_inner, double r_outer) : r_inner_(r_inner), r_outer_(r_outer) {
    require(std::isfinite(r_inner) && std::isfinite(r_outer),
            "annulus radii must be finite");
    require(r_inner > 0.0 && r_inner < r_outer,
            "annulus requires 0 < r_inner < r_outer, got r_inner=" + std::to_string(r_inner) +
                " r_outer=" + std::to_string(r_outer));
}

void FlowConfig::validate() const {
    require(std::isfinite(viscosity) && viscosity > 0.0, "viscosity must be positive");
    require(std::isfinite(omega_inner) && std::isfinite(omega_outer),
            "angular velocities must be finite");
}

NonDimensional non_dimensional(const Annulus& annulus, const FlowConfig& config) {
    NonDimensional out{annulus.r_inner() / annulus.r_outer(), std::nullopt};
    if (config.omega_inner != 0.0) out.mu = config.omega_outer / config.omega_inner;
    return out;
}

double poincare_constant(const Annulus& annulus) {
    const double r1 = annulus.r_inner();
    const double r2 = annulus.r_outer();
    const double gap = r2 - r1;
    return r2 * gap * gap / (r1 * std::numbers::pi * std::numbers::pi);
}

double threshold_c1(double nu, const Annulus& annulus) {
    require(nu > 0.0, "viscosity must be positive");
    return nu / (2.0 * std::sqrt(poincare_constant(annulus)));
}

double threshold_c2(double nu, const Annulus& annulus) {
    require(nu > 0.0, "viscosity must be positive");
    const double cp = poincare_constant(annulus);
    const double r1 = annulus.r_inner();
    const double bracket = std::sqrt(cp) * (2.0 + cp / (r1 * r1)) + 3.0 * cp / (2.0 * r1);
    return nu / bracket;
}

double reynolds(double nu, const Annulus& annulus, double omega, Wall which) {
    require(nu > 0.0, "viscosity must be positive");
    const double radius = which == Wall::inner ? annulus.r_inner() : annulus.r_outer();
    return radius * omega * annulus.gap() / nu;
}

double reynolds_bound(const Annulus& annulus) {
    return std::numbers::pi * std::sqrt(annulus.r_inner()) / (2.0 * std::sqrt(annulus.r_outer()));
}

Thresholds thresholds(double nu, const Annulus& annulus) {
    Thresholds t{};
    t.c_p = poincare_constant(annulus);
    t.c1 = threshold_c1(nu, annulus);
    t.c2 = threshold_c2(nu, annulus);
    t.c_star = std::min(t.c1, t.c2);
    t.re_bound = reynolds_bound(annulus);
    return t;
}

double wall_speed(const Annulus& annulus, const FlowConfig& config) {
    return std::max(annulus.r_inner() * std::abs(config.omega_inner),
                    annulus.r_outer() * std::abs(config.omega_outer));
}

}  // namespace tcflow
