/// @file grid.hpp
/// @brief Staggered (MAC) grid on the z-periodic annulus and the discrete fields living on it.
///
/// Layout in the (r, z) plane, i = radial cell, j = axial cell:
///
///       z_face(j+1) ----- v_z(i, j+1) -----
///            |                            |
///     v_r(i, j)    v_theta(i, j), p(i, j)    v_r(i+1, j)
///            |                            |
///       z_face(j)   ----- v_z(i, j)   -----
///          r_face(i)                  r_face(i+1)
///
/// Radial faces run i = 0..n_r with i = 0 and i = n_r on the walls. The axial
/// direction is periodic with n_z cells spanning [-L_z/2, L_z/2). When the grid
/// is theta-resolved, every component is collocated at theta_k = 2 pi k / n_theta.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tcflow/annulus.hpp"

namespace tcflow {

/// Periodic index wrap into [0, n).
inline int wrap(int j, int n) {
    const int m = j % n;
    return m < 0 ? m + n : m;
}

class Grid {
public:
    Grid(const Annulus& annulus, int n_r, int n_z, double z_period,
         std::optional<int> n_theta = std::nullopt);

    const Annulus& annulus() const { return annulus_; }
    int n_r() const { return n_r_; }
    int n_z() const { return n_z_; }
    /// 1 for axisymmetric grids.
    int n_theta() const { return n_theta_; }
    bool axisymmetric() const { return axisymmetric_; }
    double z_period() const { return z_period_; }
    double h_r() const { return h_r_; }
    double h_z() const { return h_z_; }
    double h_theta() const;

    double r_face(int i) const { return r_faces_[static_cast<std::size_t>(i)]; }
    double r_center(int i) const { return r_centers_[static_cast<std::size_t>(i)]; }
    double z_face(int j) const { return z_faces_[static_cast<std::size_t>(j)]; }
    double z_center(int j) const { return z_centers_[static_cast<std::size_t>(j)]; }
    double theta(int k) const;

    const std::vector<double>& r_faces() const { return r_faces_; }
    const std::vector<double>& r_centers() const { return r_centers_; }
    const std::vector<double>& z_faces() const { return z_faces_; }
    const std::vector<double>& z_centers() const { return z_centers_; }

    std::size_t cell_count() const {
        return static_cast<std::size_t>(n_theta_) * n_r_ * n_z_;
    }
    std::size_t radial_face_count() const {
        return static_cast<std::size_t>(n_theta_) * (n_r_ + 1) * n_z_;
    }

    /// Same annulus, counts, period and theta mode.
    bool same_layout(const Grid& other) const;

    /// Copy of this grid with n_theta slices added (or replaced).
    Grid with_theta(int n_theta) const;
    /// Axisymmetric copy of this grid.
    Grid without_theta() const;

private:
    Annulus annulus_;
    int n_r_;
    int n_z_;
    int n_theta_;
    bool axisymmetric_;
    double z_period_;
    double h_r_;
    double h_z_;
    std::vector<double> r_faces_;
    std::vector<double> r_centers_;
    std::vector<double> z_faces_;
    std::vector<double> z_centers_;
};

Grid build_grid(const Annulus& annulus, int n_r, int n_z, double z_period,
                std::optional<int> n_theta = std::nullopt);

/// Default axial period 2 (R2 - R1).
double default_z_period(const Annulus& annulus);

/// Velocity on the staggered grid. Wall values of v_r are stored (and must be
/// zero); v_theta and v_z wall values are carried as scalars since both
/// components live half a cell away from the walls.
class Field {
public:
    explicit Field(Grid grid);

    const Grid& grid() const { return grid_; }

    double& v_r(int k, int i, int j) { return v_r_[r_index(k, i, j)]; }
    double v_r(int k, int i, int j) const { return v_r_[r_index(k, i, j)]; }
    double& v_theta(int k, int i, int j) { return v_theta_[c_index(k, i, j)]; }
    double v_theta(int k, int i, int j) const { return v_theta_[c_index(k, i, j)]; }
    double& v_z(int k, int i, int j) { return v_z_[c_index(k, i, j)]; }
    double v_z(int k, int i, int j) const { return v_z_[c_index(k, i, j)]; }

    std::vector<double>& v_r_data() { return v_r_; }
    const std::vector<double>& v_r_data() const { return v_r_; }
    std::vector<double>& v_theta_data() { return v_theta_; }
    const std::vector<double>& v_theta_data() const { return v_theta_; }
    std::vector<double>& v_z_data() { return v_z_; }
    const std::vector<double>& v_z_data() const { return v_z_; }

    double wall_vtheta_inner = 0.0;
    double wall_vtheta_outer = 0.0;

    /// Sets the azimuthal wall values R_j omega_j.
    void attach_walls(const FlowConfig& config);
    /// Zeroes v_r on both walls.
    void enforce_walls();
    /// Largest |component| over all stored values and the azimuthal wall data.
    double max_abs() const;

    std::size_t r_index(int k, int i, int j) const {
        return (static_cast<std::size_t>(k) * (grid_.n_r() + 1) + i) * grid_.n_z() + j;
    }
    std::size_t c_index(int k, int i, int j) const {
        return (static_cast<std::size_t>(k) * grid_.n_r() + i) * grid_.n_z() + j;
    }

    friend bool operator==(const Field& a, const Field& b);

private:
    Grid grid_;
    std::vector<double> v_r_;
    std::vector<double> v_theta_;
    std::vector<double> v_z_;
};

/// Cell-centred pressure. The total pressure is axial_gradient * z + values.
class PressureField {
public:
    explicit PressureField(Grid grid);

    const Grid& grid() const { return grid_; }
    double& operator()(int k, int i, int j) { return values_[index(k, i, j)]; }
    double operator()(int k, int i, int j) const { return values_[index(k, i, j)]; }
    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    double axial_gradient = 0.0;

    /// Mean of the periodic part under the r dr dtheta dz measure.
    double weighted_mean() const;
    /// Shifts the periodic part to zero weighted mean.
    void regauge();

    std::size_t index(int k, int i, int j) const {
        return (static_cast<std::size_t>(k) * grid_.n_r() + i) * grid_.n_z() + j;
    }

    friend bool operator==(const PressureField& a, const PressureField& b);

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Copies an axisymmetric field onto every slice of a theta-resolved grid.
Field extend_in_theta(const Field& field, int n_theta);
PressureField extend_in_theta(const PressureField& pressure, int n_theta);

}  // namespace tcflow
