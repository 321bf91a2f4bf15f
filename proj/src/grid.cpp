#include "tcflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tcflow/errors.hpp"

namespace tcflow {

Grid::Grid(const Annulus& annulus, int n_r, int n_z, double z_period, std::optional<int> n_theta)
    : annulus_(annulus),
      n_r_(n_r),
      n_z_(n_z),
      n_theta_(n_theta.value_or(1)),
      axisymmetric_(!n_theta.has_value()),
      z_period_(z_period) {
    require(n_r >= 4, "n_r must be at least 4");
    require(n_z >= 4, "n_z must be at least 4");
    require(std::isfinite(z_period) && z_period > 0.0, "z_period must be positive");
    if (n_theta) require(*n_theta >= 4, "n_theta must be at least 4");

    h_r_ = annulus.gap() / n_r;
    h_z_ = z_period / n_z;
    r_faces_.resize(static_cast<std::size_t>(n_r) + 1);
    r_centers_.resize(static_cast<std::size_t>(n_r));
    z_faces_.resize(static_cast<std::size_t>(n_z));
    z_centers_.resize(static_cast<std::size_t>(n_z));
    for (int i = 0; i <= n_r; ++i) r_faces_[i] = annulus.r_inner() + i * h_r_;
    r_faces_.back() = annulus.r_outer();
    for (int i = 0; i < n_r; ++i) r_centers_[i] = annulus.r_inner() + (i + 0.5) * h_r_;
    const double z0 = -0.5 * z_period;
    for (int j = 0; j < n_z; ++j) {
        z_faces_[j] = z0 + j * h_z_;
        z_centers_[j] = z0 + (j + 0.5) * h_z_;
    }
}

double Grid::h_theta() const { return 2.0 * std::numbers::pi / n_theta_; }

double Grid::theta(int k) const { return k * h_theta(); }

bool Grid::same_layout(const Grid& other) const {
    return annulus_ == other.annulus_ && n_r_ == other.n_r_ && n_z_ == other.n_z_ &&
           n_theta_ == other.n_theta_ && axisymmetric_ == other.axisymmetric_ &&
           z_period_ == other.z_period_;
}

Grid Grid::with_theta(int n_theta) const { return Grid(annulus_, n_r_, n_z_, z_period_, n_theta); }

Grid Grid::without_theta() const { return Grid(annulus_, n_r_, n_z_, z_period_); }

Grid build_grid(const Annulus& annulus, int n_r, int n_z, double z_period,
                std::optional<int> n_theta) {
    return Grid(annulus, n_r, n_z, z_period, n_theta);
}

double default_z_period(const Annulus& annulus) { return 2.0 * annulus.gap(); }

Field::Field(Grid grid)
    : grid_(std::move(grid)),
      v_r_(grid_.radial_face_count(), 0.0),
      v_theta_(grid_.cell_count(), 0.0),
      v_z_(grid_.cell_count(), 0.0) {}

void Field::attach_walls(const FlowConfig& config) {
    wall_vtheta_inner = grid_.annulus().r_inner() * config.omega_inner;
    wall_vtheta_outer = grid_.annulus().r_outer() * config.omega_outer;
}

void Field::enforce_walls() {
    for (int k = 0; k < grid_.n_theta(); ++k)
        for (int j = 0; j < grid_.n_z(); ++j) {
            v_r(k, 0, j) = 0.0;
            v_r(k, grid_.n_r(), j) = 0.0;
        }
}

double Field::max_abs() const {
    double m = std::max(std::abs(wall_vtheta_inner), std::abs(wall_vtheta_outer));
    for (double v : v_r_) m = std::max(m, std::abs(v));
    for (double v : v_theta_) m = std::max(m, std::abs(v));
    for (double v : v_z_) m = std::max(m, std::abs(v));
    return m;
}

bool operator==(const Field& a, const Field& b) {
    return a.grid_.same_layout(b.grid_) && a.v_r_ == b.v_r_ && a.v_theta_ == b.v_theta_ &&
           a.v_z_ == b.v_z_ && a.wall_vtheta_inner == b.wall_vtheta_inner &&
           a.wall_vtheta_outer == b.wall_vtheta_outer;
}

PressureField::PressureField(Grid grid)
    : grid_(std::move(grid)), values_(grid_.cell_count(), 0.0) {}

double PressureField::weighted_mean() const {
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k < grid_.n_theta(); ++k)
        for (int i = 0; i < grid_.n_r(); ++i) {
            const double r = grid_.r_center(i);
            double row = 0.0;
            for (int j = 0; j < grid_.n_z(); ++j) row += (*this)(k, i, j);
            num += r * row;
            den += r * grid_.n_z();
        }
    return num / den;
}

void PressureField::regauge() {
    const double mean = weighted_mean();
    for (double& v : values_) v -= mean;
}

bool operator==(const PressureField& a, const PressureField& b) {
    return a.grid_.same_layout(b.grid_) && a.values_ == b.values_ &&
           a.axial_gradient == b.axial_gradient;
}

Field extend_in_theta(const Field& field, int n_theta) {
    const Grid& g = field.grid();
    require(g.axisymmetric(), "extend_in_theta expects an axisymmetric field");
    Field out(g.with_theta(n_theta));
    out.wall_vtheta_inner = field.wall_vtheta_inner;
    out.wall_vtheta_outer = field.wall_vtheta_outer;
    for (int k = 0; k < n_theta; ++k)
        for (int i = 0; i <= g.n_r(); ++i)
            for (int j = 0; j < g.n_z(); ++j) {
                out.v_r(k, i, j) = field.v_r(0, i, j);
                if (i < g.n_r()) {
                    out.v_theta(k, i, j) = field.v_theta(0, i, j);
                    out.v_z(k, i, j) = field.v_z(0, i, j);
                }
            }
    return out;
}

PressureField extend_in_theta(const PressureField& pressure, int n_theta) {
    const Grid& g = pressure.grid();
    require(g.axisymmetric(), "extend_in_theta expects an axisymmetric pressure");
    PressureField out(g.with_theta(n_theta));
    out.axial_gradient = pressure.axial_gradient;
    for (int k = 0; k < n_theta; ++k)
        for (int i = 0; i < g.n_r(); ++i)
            for (int j = 0; j < g.n_z(); ++j) out(k, i, j) = pressure(0, i, j);
    return out;
}

}  // namespace tcflow
