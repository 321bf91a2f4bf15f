#include "tcflow/lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>

#include "tcflow/errors.hpp"
#include "tcflow/operators.hpp"
#include "tcflow/parallel.hpp"
#include "tcflow/stencils.hpp"

namespace tcflow {

void CutoffSpec::validate() const {
    require(std::isfinite(l_cut) && l_cut > 1.0, "cutoff length L must exceed 1");
}

double phi_l(double z, const CutoffSpec& spec) {
    spec.validate();
    return phi_l(z, spec.l_cut);
}

bool in_strip(double z, const CutoffSpec& spec) {
    const double az = std::abs(z);
    return az >= spec.l_cut - 1.0 && az <= spec.l_cut;
}

std::vector<double> l_ladder(double z_period) {
    std::vector<double> out;
    for (int m = 0;; ++m) {
        const double l = 1.25 + 0.25 * m;
        if (l > 0.5 * z_period + 1e-12) break;
        out.push_back(l);
    }
    return out;
}

std::string to_string(EnergyVariant v) { return v == EnergyVariant::axial ? "axial" : "azimuthal"; }

EnergyVariant parse_energy_variant(const std::string& name) {
    if (name == "axial") return EnergyVariant::axial;
    if (name == "azimuthal") return EnergyVariant::azimuthal;
    throw ValidationError("unknown energy variant '" + name + "' (expected axial or azimuthal)");
}

namespace {

// Accumulates nu * term^2 * r * cell area against phi_L and the strip indicator.
class EnergyAccumulator {
public:
    EnergyAccumulator(std::vector<std::string> names, double nu, const CutoffSpec& spec,
                      double area)
        : names_(std::move(names)), y_(names_.size(), 0.0), yp_(names_.size(), 0.0), nu_(nu),
          spec_(spec), area_(area) {}

    void add(std::size_t term, double value, double r, double z, double weight = 1.0) {
        const double w = nu_ * value * value * r * area_ * weight;
        y_[term] += w * phi_l(z, spec_.l_cut);
        if (in_strip(z, spec_)) yp_[term] += w;
    }

    EnergyReport report() const {
        EnergyReport rep;
        rep.l_cut = spec_.l_cut;
        for (std::size_t t = 0; t < names_.size(); ++t) {
            rep.terms.push_back({names_[t], y_[t], yp_[t]});
            rep.y_value += y_[t];
            rep.y_prime += yp_[t];
        }
        return rep;
    }

private:
    std::vector<std::string> names_;
    std::vector<double> y_;
    std::vector<double> yp_;
    double nu_;
    CutoffSpec spec_;
    double area_;
};

// Gregory end-corrected trapezoid weight for node i of 0..n; plain trapezoid
// on grids too coarse for the correction.
double gregory_weight(int i, int n) {
    const int e = std::min(i, n - i);
    if (n < 6) return e == 0 ? 0.5 : 1.0;
    constexpr std::array<double, 3> ends{3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    return e < 3 ? ends[static_cast<std::size_t>(e)] : 1.0;
}

// Radial difference at faces 0..n of a cell-centred quantity e(i) whose wall
// value is zero, with quartic ghosts outside. Calls out(face, value, weight).
template <class E, class Out>
void radial_diff_to_faces(int n, double inv_h, E&& e, Out&& out) {
    const double g_in = stencil::wall_ghost(0.0, e(0), e(1), e(2), e(3));
    const double g_out = stencil::wall_ghost(0.0, e(n - 1), e(n - 2), e(n - 3), e(n - 4));
    out(0, (e(0) - g_in) * inv_h, gregory_weight(0, n));
    for (int i = 1; i < n; ++i) out(i, (e(i) - e(i - 1)) * inv_h, gregory_weight(i, n));
    out(n, (g_out - e(n - 1)) * inv_h, gregory_weight(n, n));
}

EnergyReport axial_energy(const Field& f, double nu, const CutoffSpec& spec) {
    const Grid& g = f.grid();
    const int nr = g.n_r(), nz = g.n_z(), nt = g.n_theta();
    const double ih = 1.0 / g.h_r(), ihz = 1.0 / g.h_z(), ihz2 = ihz * ihz;
    const double theta_w = g.axisymmetric() ? 2.0 * std::numbers::pi : g.h_theta();
    EnergyAccumulator acc({"dr_dz_vr", "dr_dz_vtheta", "dr_dz_vz", "dz2_vr", "dz2_vtheta",
                           "dz2_vz", "dz_vr_over_r", "dz_vtheta_over_r"},
                          nu, spec, g.h_r() * g.h_z() * theta_w);
    for (int k = 0; k < nt; ++k) {
        auto ur = [&](int i, int j) { return f.v_r(k, i, wrap(j, nz)); };
        auto vt = [&](int i, int j) { return f.v_theta(k, i, wrap(j, nz)); };
        auto vz = [&](int i, int j) { return f.v_z(k, i, wrap(j, nz)); };
        for (int j = 0; j < nz; ++j) {
            const double zf = g.z_face(j), zc = g.z_center(j);
            // d_r d_z v_r at (centre i, face j)
            for (int i = 0; i < nr; ++i) {
                const double d = ((ur(i + 1, j) - ur(i + 1, j - 1)) - (ur(i, j) - ur(i, j - 1))) * ihz * ih;
                acc.add(0, d, g.r_center(i), zf);
            }
            // d_r d_z v_theta at (face i, face j)
            radial_diff_to_faces(nr, ih, [&](int i) { return (vt(i, j) - vt(i, j - 1)) * ihz; },
                                 [&](int i, double d, double w) { acc.add(1, d, g.r_face(i), zf, w); });
            // d_r d_z v_z at (face i, centre j)
            radial_diff_to_faces(nr, ih, [&](int i) { return (vz(i, j + 1) - vz(i, j)) * ihz; },
                                 [&](int i, double d, double w) { acc.add(2, d, g.r_face(i), zc, w); });
            for (int i = 1; i < nr; ++i) {
                const double rho = g.r_face(i);
                acc.add(3, (ur(i, j + 1) - 2.0 * ur(i, j) + ur(i, j - 1)) * ihz2, rho, zc);
                acc.add(6, (ur(i, j) - ur(i, j - 1)) * ihz / rho, rho, zf);
            }
            for (int i = 0; i < nr; ++i) {
                const double r = g.r_center(i);
                acc.add(4, (vt(i, j + 1) - 2.0 * vt(i, j) + vt(i, j - 1)) * ihz2, r, zc);
                acc.add(5, (vz(i, j + 1) - 2.0 * vz(i, j) + vz(i, j - 1)) * ihz2, r, zf);
                acc.add(7, (vt(i, j) - vt(i, j - 1)) * ihz / r, r, zf);
            }
        }
    }
    return acc.report();
}

EnergyReport azimuthal_energy(const Field& f, double nu, const CutoffSpec& spec) {
    const Grid& g = f.grid();
    require(!g.axisymmetric(), "the azimuthal energy needs a theta-resolved grid");
    const int nr = g.n_r(), nz = g.n_z(), nt = g.n_theta();
    const double ih = 1.0 / g.h_r(), ihz = 1.0 / g.h_z();
    const double i2ht = 0.5 / g.h_theta(), iht2 = 1.0 / (g.h_theta() * g.h_theta());
    EnergyAccumulator acc({"dr_dth_vr", "dr_dth_vtheta", "dr_dth_vz", "dz_dth_vr", "dz_dth_vtheta",
                           "dz_dth_vz", "th_combo_vtheta", "th_combo_vr", "dth2_vz_over_r"},
                          nu, spec, g.h_r() * g.h_z() * g.h_theta());
    for (int k = 0; k < nt; ++k) {
        const int kp = wrap(k + 1, nt), km = wrap(k - 1, nt);
        auto dur = [&](int i, int j) {
            j = wrap(j, nz);
            return (f.v_r(kp, i, j) - f.v_r(km, i, j)) * i2ht;
        };
        auto dvt = [&](int i, int j) {
            j = wrap(j, nz);
            return (f.v_theta(kp, i, j) - f.v_theta(km, i, j)) * i2ht;
        };
        auto dvz = [&](int i, int j) {
            j = wrap(j, nz);
            return (f.v_z(kp, i, j) - f.v_z(km, i, j)) * i2ht;
        };
        auto second = [&](double p, double c, double m) { return (p - 2.0 * c + m) * iht2; };
        for (int j = 0; j < nz; ++j) {
            const double zf = g.z_face(j), zc = g.z_center(j);
            for (int i = 0; i < nr; ++i) acc.add(0, (dur(i + 1, j) - dur(i, j)) * ih, g.r_center(i), zc);
            radial_diff_to_faces(nr, ih, [&](int i) { return dvt(i, j); },
                                 [&](int i, double d, double w) { acc.add(1, d, g.r_face(i), zc, w); });
            radial_diff_to_faces(nr, ih, [&](int i) { return dvz(i, j); },
                                 [&](int i, double d, double w) { acc.add(2, d, g.r_face(i), zf, w); });
            for (int i = 1; i < nr; ++i) {
                const double rho = g.r_face(i);
                acc.add(3, (dur(i, j) - dur(i, j - 1)) * ihz, rho, zf);
                const double ddu = second(f.v_r(kp, i, j), f.v_r(k, i, j), f.v_r(km, i, j));
                const double dw_f = 0.5 * (dvt(i - 1, j) + dvt(i, j));
                acc.add(7, (ddu - dw_f) / rho, rho, zc);
            }
            for (int i = 0; i < nr; ++i) {
                const double r = g.r_center(i);
                acc.add(4, (dvt(i, j) - dvt(i, j - 1)) * ihz, r, zf);
                acc.add(5, (dvz(i, j + 1) - dvz(i, j)) * ihz, r, zc);
                const double ddw = second(f.v_theta(kp, i, j), f.v_theta(k, i, j), f.v_theta(km, i, j));
                const double du_c = 0.5 * (dur(i, j) + dur(i + 1, j));
                acc.add(6, (ddw + du_c) / r, r, zc);
                const double ddq = second(f.v_z(kp, i, j), f.v_z(k, i, j), f.v_z(km, i, j));
                acc.add(8, ddq / r, r, zf);
            }
        }
    }
    return acc.report();
}

}  // namespace

EnergyReport y_functional(const Field& field, double nu, const CutoffSpec& spec,
                          EnergyVariant variant) {
    spec.validate();
    require(nu > 0.0, "viscosity must be positive");
    require(spec.l_cut <= 0.5 * field.grid().z_period() + 1e-12,
            "cutoff length L must not exceed half the axial period");
    return variant == EnergyVariant::axial ? axial_energy(field, nu, spec)
                                           : azimuthal_energy(field, nu, spec);
}

std::vector<EnergyReport> y_ladder(const Field& field, double nu, EnergyVariant variant) {
    const auto ladder = l_ladder(field.grid().z_period());
    std::vector<EnergyReport> out(ladder.size());
    if (ladder.empty()) return out;
    // Validate on one rung first so no exception escapes the parallel loop.
    out.back() = y_functional(field, nu, CutoffSpec{ladder.back()}, variant);
    for_rows(Exec::parallel, static_cast<int>(ladder.size()) - 1, [&](int m) {
        out[static_cast<std::size_t>(m)] =
            y_functional(field, nu, CutoffSpec{ladder[static_cast<std::size_t>(m)]}, variant);
    });
    return out;
}

double energy_scale(const Annulus& an, double nu, double velocity_scale, double l_cut) {
    const double volume = std::numbers::pi *
                          (an.r_outer() * an.r_outer() - an.r_inner() * an.r_inner()) * 2.0 * l_cut;
    return nu * velocity_scale * velocity_scale * volume / (an.gap() * an.gap());
}

std::pair<double, double> field_distance(const Field& a, const Field& b) {
    require(a.grid().same_layout(b.grid()), "fields live on different grids");
    const Grid& g = a.grid();
    const int nr = g.n_r(), nz = g.n_z(), nt = g.n_theta();
    const double area = g.h_r() * g.h_z() * (g.axisymmetric() ? 2.0 * std::numbers::pi : g.h_theta());
    double linf = 0.0, sum = 0.0;
    for (int k = 0; k < nt; ++k)
        for (int j = 0; j < nz; ++j) {
            for (int i = 1; i < nr; ++i) {
                const double d = a.v_r(k, i, j) - b.v_r(k, i, j);
                linf = std::max(linf, std::abs(d));
                sum += g.r_face(i) * d * d;
            }
            for (int i = 0; i < nr; ++i) {
                const double dw = a.v_theta(k, i, j) - b.v_theta(k, i, j);
                const double dq = a.v_z(k, i, j) - b.v_z(k, i, j);
                linf = std::max({linf, std::abs(dw), std::abs(dq)});
                sum += g.r_center(i) * (dw * dw + dq * dq);
            }
        }
    return {linf, std::sqrt(sum * area)};
}

ManifoldFit fit_tc_manifold(const Field& field, const PressureField& pressure,
                            std::optional<double> imposed_a, double nu) {
    const Grid& g = field.grid();
    require(g.axisymmetric(), "fit_tc_manifold needs an axisymmetric field");
    require(pressure.grid().same_layout(g), "pressure and velocity live on different grids");
    require(nu > 0.0, "viscosity must be positive");
    const int nr = g.n_r(), nz = g.n_z();
    const Annulus& an = g.annulus();

    // Normal equations of min sum_i r_i (wbar_i - A r_i - B / r_i)^2.
    double s11 = 0.0, s12 = 0.0, s22 = 0.0, t1 = 0.0, t2 = 0.0;
    double qs = 0.0, ss = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double r = g.r_center(i);
        double wbar = 0.0, qbar = 0.0;
        for (int j = 0; j < nz; ++j) {
            wbar += field.v_theta(0, i, j);
            qbar += field.v_z(0, i, j);
        }
        wbar /= nz;
        qbar /= nz;
        s11 += r * r * r;
        s12 += r;
        s22 += 1.0 / r;
        t1 += r * r * wbar;
        t2 += wbar;
        const double shape = poiseuille_shape(an, nu, r);
        qs += r * qbar * shape;
        ss += r * shape * shape;
    }
    const double det = s11 * s22 - s12 * s12;
    GeneralizedTC fitted{
        TCCoefficients{(t1 * s22 - t2 * s12) / det, (s11 * t2 - s12 * t1) / det, an},
        imposed_a.value_or(ss > 0.0 ? qs / ss : 0.0), 0.0, nu};

    // b is the weighted mean of p - h(r).
    double num = 0.0, den = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double r = g.r_center(i);
        const double h = eval_pressure_radial(fitted, r);
        for (int j = 0; j < nz; ++j) {
            num += r * (pressure(0, i, j) - h);
            den += r;
        }
    }
    fitted.pressure_offset = num / den;

    ManifoldFit out{fitted, 0.0, 0.0};
    const Field sampled = sample_on_grid(fitted, g).first;
    std::tie(out.distance_linf, out.distance_l2) = field_distance(field, sampled);
    return out;
}

void SweepConfig::validate() const {
    require(viscosity > 0.0, "viscosity must be positive");
    require(!omega_pairs.empty(), "sweep needs at least one omega pair");
    require(!amplitudes.empty(), "sweep needs at least one perturbation amplitude");
    require(!seeds.empty(), "sweep needs at least one seed");
    for (double a : amplitudes) require(a >= 0.0 && std::isfinite(a), "amplitudes must be non-negative");
    for (const auto& [w1, w2] : omega_pairs)
        require(std::isfinite(w1) && std::isfinite(w2), "angular velocities must be finite");
    solver.validate();
    require(!l_ladder(z_period).empty(),
            "z_period must be at least 2.5 so the L ladder {1.25, ...} is nonempty");
    (void)grid();
}

Grid SweepConfig::grid() const { return Grid(annulus, n_r, n_z, z_period); }

ExperimentRecord run_experiment(const SweepConfig& cfg, double omega_inner, double omega_outer,
                                double amplitude, std::uint64_t seed) {
    const Grid g = cfg.grid();
    const Annulus& an = cfg.annulus;
    const double nu = cfg.viscosity;
    const FlowConfig bc{nu, omega_inner, omega_outer};
    const double a = cfg.solver.imposed_axial_gradient;

    ExperimentRecord rec;
    rec.omega_inner = omega_inner;
    rec.omega_outer = omega_outer;
    rec.reynolds_inner = reynolds(nu, an, omega_inner, Wall::inner);
    rec.reynolds_outer = reynolds(nu, an, omega_outer, Wall::outer);
    rec.amplitude = amplitude;
    rec.seed = seed;
    rec.thresholds = thresholds(nu, an);
    const double wall = wall_speed(an, bc);
    rec.wall_hypothesis = wall < rec.thresholds.c1;
    rec.reynolds_hypothesis =
        std::max(std::abs(rec.reynolds_inner), std::abs(rec.reynolds_outer)) < rec.thresholds.re_bound;

    const Field start = perturb(sample_on_grid(make_generalized_tc(an, bc, a), g).first, amplitude, seed);
    const SolveOutcome out = solve_steady(g, nu, bc, start, cfg.solver);
    rec.converged = out.converged;
    rec.status = to_string(out.status);
    rec.newton_iterations = out.newton_iterations;
    rec.final_residual = out.final_residual.max_linf();
    rec.velocity_linf = out.field.max_abs();
    rec.in_hypothesis = rec.wall_hypothesis && rec.reynolds_hypothesis &&
                        rec.velocity_linf < rec.thresholds.c_star;

    const ManifoldFit fit = fit_tc_manifold(out.field, out.pressure, std::nullopt, nu);
    rec.fitted_a_coef = fit.fitted.coeffs.a_coef;
    rec.fitted_b_coef = fit.fitted.coeffs.b_coef;
    rec.fitted_axial_gradient = fit.fitted.axial_gradient;
    rec.manifold_distance = fit.distance_linf;
    rec.manifold_distance_l2 = fit.distance_l2;
    const Field fitted_field = sample_on_grid(fit.fitted, g).first;
    const double scale = std::max({wall, fitted_field.max_abs(), amplitude});
    const double h = std::max(g.h_r(), g.h_z());
    rec.distance_tolerance = std::max(1e-8, 5.0 * h * h * scale);
    rec.on_manifold = rec.converged && rec.manifold_distance <= rec.distance_tolerance;

    for (const auto& rep : y_ladder(out.field, nu, EnergyVariant::axial)) {
        rec.y_max = std::max(rec.y_max, rep.y_value);
        rec.y_prime_max = std::max(rec.y_prime_max, rep.y_prime);
    }
    const auto ladder = l_ladder(g.z_period());
    rec.y_scale = energy_scale(an, nu, scale, ladder.back());
    return rec;
}

std::vector<ExperimentRecord> sweep_reynolds(const SweepConfig& cfg) {
    cfg.validate();
    struct Point {
        double w1, w2, amp;
        std::uint64_t seed;
    };
    std::vector<Point> points;
    for (const auto& [w1, w2] : cfg.omega_pairs)
        for (double amp : cfg.amplitudes)
            for (std::uint64_t s : cfg.seeds) points.push_back({w1, w2, amp, s});

    std::vector<ExperimentRecord> records(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    const int n = static_cast<int>(points.size());
#pragma omp parallel for schedule(dynamic)
    for (int m = 0; m < n; ++m) {
        const Point& p = points[static_cast<std::size_t>(m)];
        try {
            records[static_cast<std::size_t>(m)] = run_experiment(cfg, p.w1, p.w2, p.amp, p.seed);
        } catch (...) {
            errors[static_cast<std::size_t>(m)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return records;
}

SweepSummary summarize_sweep(const std::vector<ExperimentRecord>& records) {
    SweepSummary s;
    for (const auto& r : records) {
        ++s.runs;
        if (r.converged) ++s.converged;
        if (r.on_manifold) ++s.on_manifold;
        if (!r.in_hypothesis) ++s.out_of_hypothesis;
        if (r.converged && r.in_hypothesis && !r.on_manifold) ++s.counterexamples;
    }
    return s;
}

}  // namespace tcflow
