#include "tcflow/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tcflow/annulus.hpp"
#include "tcflow/errors.hpp"
#include "tcflow/parallel.hpp"
#include "tcflow/stencils.hpp"

namespace tcflow {
namespace {

using stencil::FieldSlice;
using stencil::Spacing;

void require_same_layout(const Field& field, const PressureField& pressure) {
    require(field.grid().same_layout(pressure.grid()),
            "pressure field does not live on the velocity grid");
}

double theta_measure(const Grid& g) {
    return g.axisymmetric() ? 2.0 * std::numbers::pi : g.h_theta();
}

// Partial sums of r * res^2 and max |res| for one radial row of one array.
struct RowNorm {
    double sum = 0.0;
    double max = 0.0;
};

RowNorm row_norm(const double* row, int n, double weight) {
    RowNorm out;
    for (int j = 0; j < n; ++j) {
        out.sum += row[j] * row[j];
        out.max = std::max(out.max, std::abs(row[j]));
    }
    out.sum *= weight;
    return out;
}

// Norms of a field stored as n_theta x n_rows x n_z, using radial weights
// weights[i] for rows first..last-1.
EquationNorms norms_of(const Grid& g, const std::vector<double>& values, int n_rows, int first,
                       int last, const std::vector<double>& radius, Exec exec) {
    const int nz = g.n_z();
    const int span_rows = last - first;
    const int rows = g.n_theta() * span_rows;
    const double measure = g.h_r() * g.h_z() * theta_measure(g);
    EquationNorms out;
    if (exec == Exec::parallel) {
        std::vector<double> sums(static_cast<std::size_t>(rows));
        std::vector<double> maxes(static_cast<std::size_t>(rows));
        for_rows(exec, rows, [&](int row) {
            const int k = row / span_rows;
            const int i = first + row % span_rows;
            const double* base = values.data() + (static_cast<std::size_t>(k) * n_rows + i) * nz;
            const RowNorm rn = row_norm(base, nz, radius[static_cast<std::size_t>(i)]);
            sums[static_cast<std::size_t>(row)] = rn.sum;
            maxes[static_cast<std::size_t>(row)] = rn.max;
        });
        out.linf = ordered_max(maxes);
        out.l2 = std::sqrt(ordered_sum(sums) * measure);
    } else {
        double sum = 0.0;
        for (int k = 0; k < g.n_theta(); ++k)
            for (int i = first; i < last; ++i)
                for (int j = 0; j < nz; ++j) {
                    const double v = values[(static_cast<std::size_t>(k) * n_rows + i) * nz + j];
                    sum += radius[static_cast<std::size_t>(i)] * v * v;
                    out.linf = std::max(out.linf, std::abs(v));
                }
        out.l2 = std::sqrt(sum * measure);
    }
    return out;
}

double theta_diff(double plus, double minus, double inv_2ht) { return (plus - minus) * inv_2ht; }

double theta_second(double plus, double mid, double minus, double inv_ht2) {
    return (plus - 2.0 * mid + minus) * inv_ht2;
}

}  // namespace

double ResidualReport::momentum_linf() const {
    return std::max({radial.linf, azimuthal.linf, axial.linf});
}

double ResidualReport::max_linf() const { return std::max(momentum_linf(), continuity.linf); }

std::vector<double> divergence(const Field& field, Exec exec) {
    const Grid& g = field.grid();
    const Spacing d(g);
    const int nr = g.n_r();
    const int nz = g.n_z();
    const int nt = g.n_theta();
    const double inv_2ht = 0.5 / g.h_theta();
    std::vector<double> out(g.cell_count());
    for_rows(exec, nt * nr, [&](int row) {
        const int k = row / nr;
        const int i = row % nr;
        const FieldSlice s(field, nullptr, k);
        const double inv_r = 1.0 / g.r_center(i);
        for (int j = 0; j < nz; ++j) {
            double div = stencil::continuity<double>(s, g, d, i, j);
            if (!g.axisymmetric()) {
                div += inv_r * theta_diff(field.v_theta(wrap(k + 1, nt), i, j),
                                          field.v_theta(wrap(k - 1, nt), i, j), inv_2ht);
            }
            out[field.c_index(k, i, j)] = div;
        }
    });
    return out;
}

double weighted_divergence_sum(const Field& field) {
    const Grid& g = field.grid();
    const std::vector<double> div = divergence(field, Exec::serial);
    double sum = 0.0;
    for (int k = 0; k < g.n_theta(); ++k)
        for (int i = 0; i < g.n_r(); ++i)
            for (int j = 0; j < g.n_z(); ++j)
                sum += g.r_center(i) * div[field.c_index(k, i, j)];
    return sum * g.h_r() * g.h_z();
}

ResidualFields residual_fields_axisym(const Field& field, const PressureField& pressure,
                                      double axial_gradient, double nu, bool advect, Exec exec) {
    require_same_layout(field, pressure);
    require(nu > 0.0, "viscosity must be positive");
    const Grid& g = field.grid();
    const Spacing d(g);
    const int nr = g.n_r();
    const int nz = g.n_z();
    const int nt = g.n_theta();

    ResidualFields out;
    out.radial.assign(g.radial_face_count(), 0.0);
    out.azimuthal.assign(g.cell_count(), 0.0);
    out.axial.assign(g.cell_count(), 0.0);
    out.continuity.assign(g.cell_count(), 0.0);

    for_rows(exec, nt * nr, [&](int row) {
        const int k = row / nr;
        const int i = row % nr;
        const FieldSlice s(field, &pressure, k);
        for (int j = 0; j < nz; ++j) {
            if (i > 0)
                out.radial[field.r_index(k, i, j)] =
                    stencil::radial_momentum<double>(s, g, d, i, j, nu, advect);
            const std::size_t c = field.c_index(k, i, j);
            out.azimuthal[c] = stencil::azimuthal_momentum<double>(s, g, d, i, j, nu, advect);
            out.axial[c] =
                stencil::axial_momentum<double>(s, g, d, i, j, nu, axial_gradient, advect);
            out.continuity[c] = stencil::continuity<double>(s, g, d, i, j);
        }
    });
    return out;
}

ResidualReport summarize(const Grid& g, const ResidualFields& fields, Exec exec) {
    ResidualReport rep;
    rep.h_r = g.h_r();
    rep.h_z = g.h_z();
    rep.radial = norms_of(g, fields.radial, g.n_r() + 1, 1, g.n_r(), g.r_faces(), exec);
    rep.azimuthal = norms_of(g, fields.azimuthal, g.n_r(), 0, g.n_r(), g.r_centers(), exec);
    rep.axial = norms_of(g, fields.axial, g.n_r(), 0, g.n_r(), g.r_centers(), exec);
    rep.continuity = norms_of(g, fields.continuity, g.n_r(), 0, g.n_r(), g.r_centers(), exec);
    return rep;
}

ResidualReport momentum_residual_axisym(const Field& field, const PressureField& pressure,
                                        double axial_gradient, double nu, Exec exec) {
    require(field.grid().axisymmetric(), "momentum_residual_axisym needs an axisymmetric grid");
    return summarize(field.grid(),
                     residual_fields_axisym(field, pressure, axial_gradient, nu, true, exec), exec);
}

ResidualFields residual_fields_general(const Field& field, const PressureField& pressure,
                                       double nu, Exec exec) {
    const Grid& g = field.grid();
    require(!g.axisymmetric(), "momentum_residual_general needs a theta-resolved grid");
    ResidualFields out =
        residual_fields_axisym(field, pressure, pressure.axial_gradient, nu, true, exec);

    const int nr = g.n_r();
    const int nz = g.n_z();
    const int nt = g.n_theta();
    const double inv_2ht = 0.5 / g.h_theta();
    const double inv_ht2 = 1.0 / (g.h_theta() * g.h_theta());

    for_rows(exec, nt * nr, [&](int row) {
        const int k = row / nr;
        const int i = row % nr;
        const int kp = wrap(k + 1, nt);
        const int km = wrap(k - 1, nt);
        const double r = g.r_center(i);
        const double inv_r = 1.0 / r;
        for (int j = 0; j < nz; ++j) {
            const int jm = wrap(j - 1, nz);
            if (i > 0) {
                // (v_theta/r) d_theta v_r + (2 nu / r^2) d_theta v_theta - (nu / r^2) d_theta^2 v_r
                const double rho = g.r_face(i);
                const double inv_rho2 = 1.0 / (rho * rho);
                const double w_f = 0.5 * (field.v_theta(k, i - 1, j) + field.v_theta(k, i, j));
                const double dw_f =
                    0.5 * (theta_diff(field.v_theta(kp, i - 1, j), field.v_theta(km, i - 1, j), inv_2ht) +
                           theta_diff(field.v_theta(kp, i, j), field.v_theta(km, i, j), inv_2ht));
                const double du = theta_diff(field.v_r(kp, i, j), field.v_r(km, i, j), inv_2ht);
                const double ddu =
                    theta_second(field.v_r(kp, i, j), field.v_r(k, i, j), field.v_r(km, i, j), inv_ht2);
                double& res = out.radial[field.r_index(k, i, j)];
                res += w_f / rho * du;
                res += 2.0 * nu * inv_rho2 * dw_f;
                res -= nu * inv_rho2 * ddu;
            }
            {
                // (v_theta/r) d_theta v_theta + (1/r) d_theta p - (nu/r^2) d_theta^2 v_theta
                //   - (2 nu / r^2) d_theta v_r
                const double w = field.v_theta(k, i, j);
                const double dw = theta_diff(field.v_theta(kp, i, j), field.v_theta(km, i, j), inv_2ht);
                const double ddw = theta_second(field.v_theta(kp, i, j), w, field.v_theta(km, i, j), inv_ht2);
                const double dp = theta_diff(pressure(kp, i, j), pressure(km, i, j), inv_2ht);
                const double dur =
                    0.5 * (theta_diff(field.v_r(kp, i, j), field.v_r(km, i, j), inv_2ht) +
                           theta_diff(field.v_r(kp, i + 1, j), field.v_r(km, i + 1, j), inv_2ht));
                double& res = out.azimuthal[field.c_index(k, i, j)];
                res += w * inv_r * dw;
                res += inv_r * dp;
                res -= nu * inv_r * inv_r * ddw;
                res -= 2.0 * nu * inv_r * inv_r * dur;
            }
            {
                // (v_theta/r) d_theta v_z - (nu/r^2) d_theta^2 v_z
                const double w_z = 0.5 * (field.v_theta(k, i, jm) + field.v_theta(k, i, j));
                const double dq = theta_diff(field.v_z(kp, i, j), field.v_z(km, i, j), inv_2ht);
                const double ddq =
                    theta_second(field.v_z(kp, i, j), field.v_z(k, i, j), field.v_z(km, i, j), inv_ht2);
                double& res = out.axial[field.c_index(k, i, j)];
                res += w_z * inv_r * dq;
                res -= nu * inv_r * inv_r * ddq;
            }
            out.continuity[field.c_index(k, i, j)] +=
                inv_r * theta_diff(field.v_theta(kp, i, j), field.v_theta(km, i, j), inv_2ht);
        }
    });
    return out;
}

ResidualReport momentum_residual_general(const Field& field, const PressureField& pressure,
                                         double nu, Exec exec) {
    return summarize(field.grid(), residual_fields_general(field, pressure, nu, exec), exec);
}

std::vector<double> scalar_laplacian(const Grid& g, std::span<const double> cell_values,
                                     double wall_inner, double wall_outer) {
    require(g.axisymmetric(), "scalar_laplacian needs an axisymmetric grid");
    require(cell_values.size() == g.cell_count(), "scalar_laplacian: wrong array size");
    const int nr = g.n_r();
    const int nz = g.n_z();
    const Spacing d(g);
    auto at = [&](int i, int j) {
        const std::size_t jj = static_cast<std::size_t>(wrap(j, nz));
        auto cell = [&](int ii) { return cell_values[static_cast<std::size_t>(ii) * nz + jj]; };
        if (i < 0) return stencil::wall_ghost(wall_inner, cell(0), cell(1), cell(2), cell(3));
        if (i >= nr)
            return stencil::wall_ghost(wall_outer, cell(nr - 1), cell(nr - 2), cell(nr - 3), cell(nr - 4));
        return cell_values[static_cast<std::size_t>(i) * nz + jj];
    };
    std::vector<double> out(g.cell_count());
    for (int i = 0; i < nr; ++i) {
        const double inv_r = 1.0 / g.r_center(i);
        for (int j = 0; j < nz; ++j) {
            const double u = at(i, j);
            double lap = (g.r_face(i + 1) * (at(i + 1, j) - u) - g.r_face(i) * (u - at(i - 1, j))) *
                         (inv_r * d.inv_h2);
            lap += (at(i, j + 1) - 2.0 * u + at(i, j - 1)) * d.inv_hz2;
            out[static_cast<std::size_t>(i) * nz + j] = lap;
        }
    }
    return out;
}

double theta_asymmetry(const Field& field) {
    const Grid& g = field.grid();
    require(!g.axisymmetric(), "theta_asymmetry needs a theta-resolved grid");
    const int nt = g.n_theta();
    const int nr = g.n_r();
    const int nz = g.n_z();
    const double inv_2ht = 0.5 / g.h_theta();
    std::vector<double> maxes(static_cast<std::size_t>(nt), 0.0);
    for_rows(Exec::parallel, nt, [&](int k) {
        const int kp = wrap(k + 1, nt);
        const int km = wrap(k - 1, nt);
        double m = 0.0;
        for (int i = 0; i <= nr; ++i)
            for (int j = 0; j < nz; ++j) {
                m = std::max(m, std::abs(theta_diff(field.v_r(kp, i, j), field.v_r(km, i, j), inv_2ht)));
                if (i == nr) continue;
                m = std::max(m, std::abs(theta_diff(field.v_theta(kp, i, j), field.v_theta(km, i, j), inv_2ht)));
                m = std::max(m, std::abs(theta_diff(field.v_z(kp, i, j), field.v_z(km, i, j), inv_2ht)));
            }
        maxes[static_cast<std::size_t>(k)] = m;
    });
    return ordered_max(maxes);
}

std::vector<double> sample_profile(const Grid& g, const std::function<double(double, double)>& f) {
    const int nz = g.n_z();
    std::vector<double> out(static_cast<std::size_t>(g.n_r() + 1) * nz);
    for (int i = 0; i <= g.n_r(); ++i)
        for (int j = 0; j < nz; ++j)
            out[static_cast<std::size_t>(i) * nz + j] = f(g.r_face(i), g.z_center(j));
    return out;
}

double phi_l(double z, double l_cut) {
    const double az = std::abs(z);
    if (az < l_cut - 1.0) return 1.0;
    if (az <= l_cut) return l_cut - az;
    return 0.0;
}

PoincareReport poincare_check(std::span<const double> profile, const Grid& g, double l_cut) {
    require(l_cut > 1.0, "poincare_check requires L > 1");
    const int nr = g.n_r();
    const int nz = g.n_z();
    require(profile.size() == static_cast<std::size_t>(nr + 1) * nz,
            "profile must be sampled at the n_r + 1 radial nodes and n_z axial centres");

    double scale = 0.0;
    for (double v : profile) scale = std::max(scale, std::abs(v));
    const double trace_tol = 1e-12 * std::max(1.0, scale);
    for (int j = 0; j < nz; ++j) {
        const double inner = profile[static_cast<std::size_t>(j)];
        const double outer = profile[static_cast<std::size_t>(nr) * nz + j];
        require(std::abs(inner) <= trace_tol && std::abs(outer) <= trace_tol,
                "profile does not vanish on the walls");
    }

    const double h = g.h_r();
    const double two_pi = 2.0 * std::numbers::pi;
    double f_omega = 0.0, df_omega = 0.0, f_strip = 0.0, df_strip = 0.0;
    for (int j = 0; j < nz; ++j) {
        const double z = g.z_center(j);
        const double phi = phi_l(z, l_cut);
        if (phi == 0.0) continue;
        const double az = std::abs(z);
        const bool in_strip = az >= l_cut - 1.0 && az <= l_cut;
        double f2 = 0.0;
        for (int i = 0; i <= nr; ++i) {
            const double v = profile[static_cast<std::size_t>(i) * nz + j];
            const double w = (i == 0 || i == nr) ? 0.5 * h : h;
            f2 += w * g.r_face(i) * v * v;
        }
        double df2 = 0.0;
        for (int i = 0; i < nr; ++i) {
            const double dv = (profile[static_cast<std::size_t>(i + 1) * nz + j] -
                               profile[static_cast<std::size_t>(i) * nz + j]) / h;
            df2 += h * g.r_center(i) * dv * dv;
        }
        f_omega += phi * f2;
        df_omega += phi * df2;
        if (in_strip) {
            f_strip += phi * f2;
            df_strip += phi * df2;
        }
    }
    const double measure = two_pi * g.h_z();

    PoincareReport rep;
    rep.norm_f_omega = std::sqrt(f_omega * measure);
    rep.norm_df_omega = std::sqrt(df_omega * measure);
    rep.norm_f_strip = std::sqrt(f_strip * measure);
    rep.norm_df_strip = std::sqrt(df_strip * measure);
    rep.sqrt_cp = std::sqrt(poincare_constant(g.annulus()));
    rep.bound = rep.sqrt_cp * (1.0 + 5.0 * h);
    rep.degenerate_omega = rep.norm_df_omega == 0.0;
    rep.degenerate_strip = rep.norm_df_strip == 0.0;
    rep.ratio_omega = rep.degenerate_omega ? 0.0 : rep.norm_f_omega / rep.norm_df_omega;
    rep.ratio_strip = rep.degenerate_strip ? 0.0 : rep.norm_f_strip / rep.norm_df_strip;
    rep.holds = (rep.degenerate_omega || rep.ratio_omega <= rep.bound) &&
                (rep.degenerate_strip || rep.ratio_strip <= rep.bound);
    return rep;
}

std::vector<PoincareCase> poincare_suite(const Grid& g, double l_cut, int count,
                                         std::uint64_t seed) {
    require(count >= 0, "poincare_suite needs a non-negative case count");
    constexpr double pi = std::numbers::pi;
    const double r1 = g.annulus().r_inner();
    const double gap = g.annulus().gap();
    const double kz = 2.0 * pi / g.z_period();
    std::vector<PoincareCase> out;
    const auto sine = sample_profile(g, [&](double r, double) { return std::sin(pi * (r - r1) / gap); });
    out.push_back({"fundamental_sine", poincare_check(sine, g, l_cut)});

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 0; n < count; ++n) {
        const double m1 = 1.0 + 0.5 * u(rng), m2 = u(rng), m3 = u(rng);
        const double c0 = 1.5 + u(rng), c1 = u(rng), s1 = u(rng), c2 = 0.4 * u(rng);
        const auto prof = sample_profile(g, [&](double r, double z) {
            const double x = (r - r1) / gap;
            const double radial = m1 * std::sin(pi * x) + m2 * std::sin(2.0 * pi * x) + m3 * std::sin(3.0 * pi * x);
            const double axial = c0 + c1 * std::cos(kz * z) + s1 * std::sin(kz * z) + c2 * std::cos(2.0 * kz * z);
            return radial * axial;
        });
        out.push_back({"random_" + std::to_string(n), poincare_check(prof, g, l_cut)});
    }
    return out;
}

}  // namespace tcflow
