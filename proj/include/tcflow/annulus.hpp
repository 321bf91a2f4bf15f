/// @file annulus.hpp
/// @brief Annular geometry, flow parameters and the explicit smallness thresholds.
///
/// Thresholds for the rigidity results on the rotating annulus:
///   C_P   = R2 (R2 - R1)^2 / (R1 pi^2)        weighted radial Poincare constant
///   C_1   = nu / (2 sqrt(C_P))                axisymmetric uniqueness threshold
///   C_2   = nu / (sqrt(C_P)(2 + C_P/R1^2) + 3 C_P/(2 R1))   axisymmetry threshold
///   C_*   = min(C_1, C_2)
///   Re_j  = R_j omega_j (R2 - R1) / nu,  bound  pi sqrt(R1) / (2 sqrt(R2))
#pragma once

#include <optional>

namespace tcflow {

/// Region R1 < r < R2 between two concentric cylinders.
class Annulus {
public:
    Annulus(double r_inner, double r_outer);

    double r_inner() const { return r_inner_; }
    double r_outer() const { return r_outer_; }
    double gap() const { return r_outer_ - r_inner_; }
    bool contains(double r) const { return r >= r_inner_ && r <= r_outer_; }

    friend bool operator==(const Annulus&, const Annulus&) = default;

private:
    double r_inner_;
    double r_outer_;
};

/// Kinematic viscosity and wall angular velocities.
struct FlowConfig {
    double viscosity = 1.0;
    double omega_inner = 0.0;
    double omega_outer = 0.0;

    /// Throws ValidationError unless viscosity > 0 and both rates are finite.
    void validate() const;
};

struct NonDimensional {
    double eta;                 // R1 / R2
    std::optional<double> mu;   // omega2 / omega1, absent when omega1 == 0
};

struct Thresholds {
    double c_p;
    double c1;
    double c2;
    double c_star;
    double re_bound;
};

enum class Wall { inner, outer };

NonDimensional non_dimensional(const Annulus& annulus, const FlowConfig& config);

double poincare_constant(const Annulus& annulus);
double threshold_c1(double nu, const Annulus& annulus);
double threshold_c2(double nu, const Annulus& annulus);

/// R_j omega_j (R2 - R1) / nu for the selected wall.
double reynolds(double nu, const Annulus& annulus, double omega, Wall which);

/// Dimensionless bound on max(Re_1, Re_2); independent of nu.
double reynolds_bound(const Annulus& annulus);

Thresholds thresholds(double nu, const Annulus& annulus);

/// max(R1 |omega1|, R2 |omega2|), the wall speed entering both hypotheses.
double wall_speed(const Annulus& annulus, const FlowConfig& config);

}  // namespace tcflow
