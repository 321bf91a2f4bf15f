/// @file stencils.hpp
/// @brief Pointwise discrete equations of the axisymmetric stationary system.
///
/// Every function is templated on the scalar (double, or SparseDual for Jacobian
/// rows) and on a source that exposes the staggered unknowns of one theta slice:
///
///   T ur(i, j)  radial faces i = 0..n_r (walls included), any j (wrapped)
///   T vt(i, j)  cell centres i = 0..n_r-1
///   T vz(i, j)  cell-centre radius, lower axial face j
///   T p(i, j)   cell centres
///   double wall_in(), wall_out()   azimuthal wall velocities R_j omega_j
///
/// Radial second derivatives are in flux form: (1/r) d/dr (r d/dr) for v_z and
/// d/dr ((1/r) d(r .)/dr) for v_r and v_theta, the latter absorbing the -u/r^2
/// term. Cell-centred quantities reach the walls through a quartic ghost value
/// u_g = 128/35 u_w - 4 u_0 + 2 u_1 - 4/5 u_2 + 1/7 u_3. Residuals are LHS - RHS of the momentum
/// equations; the imposed axial gradient a adds to dp/dz.
#pragma once

#include "tcflow/grid.hpp"

namespace tcflow::stencil {

/// Inverse spacings, hoisted so that the double and dual paths share every
/// floating-point operation.
struct Spacing {
    explicit Spacing(const Grid& g)
        : inv_h(1.0 / g.h_r()),
          inv_h2(1.0 / (g.h_r() * g.h_r())),
          inv_2h(0.5 / g.h_r()),
          inv_hz(1.0 / g.h_z()),
          inv_hz2(1.0 / (g.h_z() * g.h_z())),
          inv_2hz(0.5 / g.h_z()) {}
    double inv_h, inv_h2, inv_2h, inv_hz, inv_hz2, inv_2hz;
};

/// Ghost value half a cell outside the wall from the quartic through the wall
/// value and the four nearest cell values; keeps the wall-cell truncation O(h^3).
template <class T>
T wall_ghost(double wall, const T& u0, const T& u1, const T& u2, const T& u3) {
    return T(128.0 / 35.0 * wall) - 4.0 * u0 + 2.0 * u1 - 0.8 * u2 + (1.0 / 7.0) * u3;
}

/// v_theta at radial cell index i in [-1, n_r], ghosts outside the domain.
template <class T, class Src>
T vt_ext(const Src& s, const Grid& g, int i, int j) {
    if (i < 0) return wall_ghost(s.wall_in(), s.vt(0, j), s.vt(1, j), s.vt(2, j), s.vt(3, j));
    const int n = g.n_r();
    if (i >= n) return wall_ghost(s.wall_out(), s.vt(n - 1, j), s.vt(n - 2, j), s.vt(n - 3, j), s.vt(n - 4, j));
    return s.vt(i, j);
}

/// v_z at radial cell index i in [-1, n_r]; the wall value is zero.
template <class T, class Src>
T vz_ext(const Src& s, const Grid& g, int i, int j) {
    if (i < 0) return wall_ghost(0.0, s.vz(0, j), s.vz(1, j), s.vz(2, j), s.vz(3, j));
    const int n = g.n_r();
    if (i >= n) return wall_ghost(0.0, s.vz(n - 1, j), s.vz(n - 2, j), s.vz(n - 3, j), s.vz(n - 4, j));
    return s.vz(i, j);
}

/// Radial momentum at interior radial face i (1..n_r-1), axial cell j.
template <class T, class Src>
T radial_momentum(const Src& s, const Grid& g, const Spacing& d, int i, int j, double nu,
                  bool advect) {
    const double rho = g.r_face(i);
    const double inv_rho = 1.0 / rho;
    const T u = s.ur(i, j);
    const T u_e = s.ur(i + 1, j);
    const T u_w = s.ur(i - 1, j);
    const T u_n = s.ur(i, j + 1);
    const T u_s = s.ur(i, j - 1);

    // d/dr ((1/r) d(r u)/dr), which equals the radial Laplacian minus u / r^2.
    const T flux_e = (g.r_face(i + 1) * u_e - rho * u) * (1.0 / g.r_center(i));
    const T flux_w = (rho * u - g.r_face(i - 1) * u_w) * (1.0 / g.r_center(i - 1));
    T visc = (flux_e - flux_w) * d.inv_h2;
    visc += (u_n - 2.0 * u + u_s) * d.inv_hz2;

    T res = (s.p(i, j) - s.p(i - 1, j)) * d.inv_h;
    if (advect) {
        const T w_f = 0.5 * (s.vt(i - 1, j) + s.vt(i, j));
        const T vz_f = 0.25 * (s.vz(i - 1, j) + s.vz(i, j) + s.vz(i - 1, j + 1) + s.vz(i, j + 1));
        res += u * (u_e - u_w) * d.inv_2h;
        res += vz_f * (u_n - u_s) * d.inv_2hz;
        res -= w_f * w_f * inv_rho;
    }
    return res - nu * visc;
}

/// Azimuthal momentum at cell centre (i, j).
template <class T, class Src>
T azimuthal_momentum(const Src& s, const Grid& g, const Spacing& d, int i, int j, double nu,
                     bool advect) {
    const double r = g.r_center(i);
    const double inv_r = 1.0 / r;
    const T w = s.vt(i, j);
    const T w_e = vt_ext<T>(s, g, i + 1, j);
    const T w_w = vt_ext<T>(s, g, i - 1, j);
    const T w_n = s.vt(i, j + 1);
    const T w_s = s.vt(i, j - 1);

    // Same flux form as the radial component; exact for A r + B / r.
    const double r_e = r + g.h_r();
    const double r_w = r - g.h_r();
    const T flux_e = (r_e * w_e - r * w) * (1.0 / g.r_face(i + 1));
    const T flux_w = (r * w - r_w * w_w) * (1.0 / g.r_face(i));
    T visc = (flux_e - flux_w) * d.inv_h2;
    visc += (w_n - 2.0 * w + w_s) * d.inv_hz2;

    T res = T(0.0);
    if (advect) {
        const T ur_c = 0.5 * (s.ur(i, j) + s.ur(i + 1, j));
        const T vz_c = 0.5 * (s.vz(i, j) + s.vz(i, j + 1));
        res += ur_c * (w_e - w_w) * d.inv_2h;
        res += vz_c * (w_n - w_s) * d.inv_2hz;
        res += ur_c * w * inv_r;
    }
    return res - nu * visc;
}

/// Axial momentum at cell-centre radius i, lower axial face j.
template <class T, class Src>
T axial_momentum(const Src& s, const Grid& g, const Spacing& d, int i, int j, double nu,
                 double axial_gradient, bool advect) {
    const double r = g.r_center(i);
    const double inv_r = 1.0 / r;
    const T q = s.vz(i, j);
    const T q_e = vz_ext<T>(s, g, i + 1, j);
    const T q_w = vz_ext<T>(s, g, i - 1, j);
    const T q_n = s.vz(i, j + 1);
    const T q_s = s.vz(i, j - 1);

    T visc = (g.r_face(i + 1) * (q_e - q) - g.r_face(i) * (q - q_w)) * (inv_r * d.inv_h2);
    visc += (q_n - 2.0 * q + q_s) * d.inv_hz2;

    T res = (s.p(i, j) - s.p(i, j - 1)) * d.inv_hz + T(axial_gradient);
    if (advect) {
        const T ur_z = 0.25 * (s.ur(i, j - 1) + s.ur(i + 1, j - 1) + s.ur(i, j) + s.ur(i + 1, j));
        res += ur_z * (q_e - q_w) * d.inv_2h;
        res += q * (q_n - q_s) * d.inv_2hz;
    }
    return res - nu * visc;
}

/// (1/r) d(r v_r)/dr + d v_z/dz at cell (i, j).
template <class T, class Src>
T continuity(const Src& s, const Grid& g, const Spacing& d, int i, int j) {
    const double inv_r = 1.0 / g.r_center(i);
    T div = (g.r_face(i + 1) * s.ur(i + 1, j) - g.r_face(i) * s.ur(i, j)) * (inv_r * d.inv_h);
    div += (s.vz(i, j + 1) - s.vz(i, j)) * d.inv_hz;
    return div;
}

/// Read-only view of one theta slice of a Field (and optionally a pressure).
class FieldSlice {
public:
    FieldSlice(const Field& f, const PressureField* p, int k)
        : f_(f), p_(p), k_(k), nz_(f.grid().n_z()) {}
    double ur(int i, int j) const { return f_.v_r(k_, i, wrap(j, nz_)); }
    double vt(int i, int j) const { return f_.v_theta(k_, i, wrap(j, nz_)); }
    double vz(int i, int j) const { return f_.v_z(k_, i, wrap(j, nz_)); }
    double p(int i, int j) const { return p_ ? (*p_)(k_, i, wrap(j, nz_)) : 0.0; }
    double wall_in() const { return f_.wall_vtheta_inner; }
    double wall_out() const { return f_.wall_vtheta_outer; }

private:
    const Field& f_;
    const PressureField* p_;
    int k_;
    int nz_;
};

}  // namespace tcflow::stencil
