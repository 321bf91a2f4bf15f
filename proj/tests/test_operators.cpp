#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tcflow/errors.hpp"
#include "tcflow/exact_flows.hpp"
#include "tcflow/operators.hpp"

using namespace tcflow;
using std::numbers::pi;

namespace {

// Least-squares slope of log(err) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t m = 0; m < h.size(); ++m) {
        const double x = std::log(h[m]);
        const double y = std::log(err[m]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Field random_field(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f(g);
    for (auto& v : f.v_r_data()) v = u(rng);
    for (auto& v : f.v_theta_data()) v = u(rng);
    for (auto& v : f.v_z_data()) v = u(rng);
    f.enforce_walls();
    f.wall_vtheta_inner = u(rng);
    f.wall_vtheta_outer = u(rng);
    return f;
}

}  // namespace

TEST_CASE("grid construction") {
    const Grid g(Annulus(1.0, 2.0), 4, 4, 1.0);
    CHECK(g.h_r() == 0.25);
    CHECK(g.h_z() == 0.25);
    CHECK(g.axisymmetric());
    CHECK(g.n_theta() == 1);
    CHECK(g.r_face(0) == 1.0);
    CHECK(g.r_face(4) == 2.0);
    CHECK(g.r_center(0) == 1.125);
    CHECK(g.z_face(0) == -0.5);
    const Grid fine(Annulus(1.0, 2.0), 8, 4, 1.0);
    CHECK(fine.h_r() == 0.5 * g.h_r());
    CHECK_THROWS_AS(Grid(Annulus(1.0, 2.0), 3, 4, 1.0), ValidationError);
    CHECK_THROWS_AS(Grid(Annulus(1.0, 2.0), 4, 2, 1.0), ValidationError);
    CHECK_THROWS_AS(Grid(Annulus(1.0, 2.0), 4, 4, 0.0), ValidationError);
    CHECK_THROWS_AS(Grid(Annulus(1.0, 2.0), 4, 4, 1.0, 2), ValidationError);
    CHECK_FALSE(g.with_theta(8).axisymmetric());
    CHECK(default_z_period(Annulus(1.0, 3.0)) == 4.0);
}

TEST_CASE("divergence") {
    const Grid g(Annulus(1.0, 2.0), 16, 16, 2.0);
    SUBCASE("constant axial velocity") {
        Field f(g);
        for (auto& v : f.v_z_data()) v = 0.73;
        for (double d : divergence(f)) CHECK(d == 0.0);
    }
    SUBCASE("discrete Gauss identity") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const Field f = random_field(g, seed);
            CHECK(std::abs(weighted_divergence_sum(f)) <= 1e-12 * 2.0);
        }
    }
    SUBCASE("radial source flow r v_r = const") {
        Field f(g.with_theta(4).without_theta());
        for (int i = 1; i < g.n_r(); ++i)
            for (int j = 0; j < g.n_z(); ++j) f.v_r(0, i, j) = 1.0 / g.r_face(i);
        // Divergence is nonzero only in cells touching a wall.
        const auto d = divergence(f);
        for (int i = 1; i + 1 < g.n_r(); ++i)
            for (int j = 0; j < g.n_z(); ++j) CHECK(std::abs(d[f.c_index(0, i, j)]) < 1e-12);
    }
}

TEST_CASE("zero state has zero residual") {
    const Grid g(Annulus(1.0, 2.0), 8, 8, 2.0);
    const Field f(g);
    const PressureField p(g);
    const auto rep = momentum_residual_axisym(f, p, 0.0, 1.0);
    CHECK(rep.max_linf() == 0.0);
    CHECK(rep.radial.l2 == 0.0);
    CHECK(rep.continuity.l2 == 0.0);
}

TEST_CASE("residual of sampled generalized flow converges at second order") {
    const Annulus an(1.0, 2.0);
    const auto gtc = make_generalized_tc(an, {0.7, 1.0, -0.4}, 0.8, 0.3);
    std::vector<double> h, err_axi, err_gen;
    for (int n : {32, 64, 128}) {
        const Grid g(an, n, n, 2.0);
        auto [f, p] = sample_on_grid(gtc, g);
        const auto rep = momentum_residual_axisym(f, p, gtc.axial_gradient, gtc.viscosity);
        CHECK(rep.continuity.linf == 0.0);
        h.push_back(g.h_r());
        err_axi.push_back(rep.max_linf());
        {
            const auto gen = momentum_residual_general(extend_in_theta(f, 4),
                                                       extend_in_theta(p, 4), gtc.viscosity);
            err_gen.push_back(gen.max_linf());
        }
    }
    MESSAGE("axisymmetric residuals ", err_axi[0], " ", err_axi[1], " ", err_axi[2]);
    CHECK(fitted_order(h, err_axi) >= 1.9);
    CHECK(fitted_order(h, err_gen) >= 1.9);
}

TEST_CASE("theta-constant data reproduces the axisymmetric residual") {
    const Annulus an(1.0, 2.0);
    const Grid g(an, 16, 16, 2.0);
    for (std::uint64_t seed = 3; seed < 8; ++seed) {
        const Field f = random_field(g, seed);
        PressureField p(g);
        std::mt19937_64 rng(seed + 100);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : p.data()) v = u(rng);
        p.axial_gradient = 0.4;
        const auto axi = momentum_residual_axisym(f, p, 0.4, 0.9);
        const auto gen = momentum_residual_general(extend_in_theta(f, 6), extend_in_theta(p, 6), 0.9);
        auto same = [](const EquationNorms& a, const EquationNorms& b) {
            CHECK(std::abs(a.linf - b.linf) <= 1e-14 * std::max(1.0, a.linf));
            CHECK(std::abs(a.l2 - b.l2) <= 1e-14 * std::max(1.0, a.l2) * 10);
        };
        same(axi.radial, gen.radial);
        same(axi.azimuthal, gen.azimuthal);
        same(axi.axial, gen.axial);
        same(axi.continuity, gen.continuity);
    }
    CHECK_THROWS_AS(momentum_residual_general(Field(g), PressureField(g), 1.0), ValidationError);
}

TEST_CASE("manufactured azimuthal profile") {
    const Annulus an(1.0, 2.0);
    const double nu = 1.3;
    auto f = [](double r) { return std::sin(pi * (r - 1.0)); };
    auto df = [](double r) { return pi * std::cos(pi * (r - 1.0)); };
    auto d2f = [](double r) { return -pi * pi * std::sin(pi * (r - 1.0)); };
    std::vector<double> h, err_w, err_r;
    for (int n : {32, 64, 128}) {
        const Grid g(an, n, 8, 2.0);
        Field fld(g);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 8; ++j) fld.v_theta(0, i, j) = f(g.r_center(i));
        const PressureField p(g);
        const auto res = residual_fields_axisym(fld, p, 0.0, nu);
        double ew = 0.0, er = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = g.r_center(i);
            const double forcing = -nu * (d2f(r) + df(r) / r - f(r) / (r * r));
            ew = std::max(ew, std::abs(res.azimuthal[fld.c_index(0, i, 3)] - forcing));
        }
        for (int i = 1; i < n; ++i) {
            const double rho = g.r_face(i);
            er = std::max(er, std::abs(res.radial[fld.r_index(0, i, 3)] + f(rho) * f(rho) / rho));
        }
        h.push_back(g.h_r());
        err_w.push_back(ew);
        err_r.push_back(er);
    }
    CHECK(fitted_order(h, err_w) >= 1.9);
    CHECK(fitted_order(h, err_r) >= 1.9);
}

TEST_CASE("azimuthal coupling term") {
    const Annulus an(1.0, 2.0);
    const double nu = 0.6, eps = 1e-3;
    const int nt = 8;
    const Grid g = Grid(an, 12, 6, 2.0).with_theta(nt);
    auto bump = [&](double r) { return (r - 1.0) * (2.0 - r); };
    Field f(g);
    for (int k = 0; k < nt; ++k)
        for (int i = 0; i <= g.n_r(); ++i)
            for (int j = 0; j < g.n_z(); ++j) f.v_r(k, i, j) = eps * std::cos(g.theta(k)) * bump(g.r_face(i));
    const PressureField p(g);
    const auto res = residual_fields_general(f, p, nu);
    const double ht = g.h_theta();
    const double shrink = std::sin(ht) / ht;
    for (int k = 0; k < nt; ++k)
        for (int i = 0; i < g.n_r(); ++i) {
            const double r = g.r_center(i);
            const double avg = 0.5 * (bump(g.r_face(i)) + bump(g.r_face(i + 1)));
            // Residual carries minus the viscous operator, whose coupling part is
            // (2 nu / r^2) d_theta v_r = -2 nu eps sin(theta) bump / r^2.
            const double expected = 2.0 * nu * eps * std::sin(g.theta(k)) * shrink * avg / (r * r);
            CHECK(std::abs(res.azimuthal[f.c_index(k, i, 2)] - expected) <= 1e-14 * 10);
        }
}

TEST_CASE("scalar Laplacian of r squared") {
    const Annulus an(1.0, 2.0);
    const Grid g(an, 16, 8, 2.0);
    std::vector<double> u(g.cell_count());
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_z(); ++j) u[static_cast<std::size_t>(i) * g.n_z() + j] = std::pow(g.r_center(i), 2);
    const auto lap = scalar_laplacian(g, u, 1.0, 4.0);
    for (double v : lap) CHECK(v == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("Poincare check") {
    const Annulus an(1.0, 2.0);
    const Grid g(an, 128, 64, 4.0);
    SUBCASE("sine profile") {
        const auto prof = sample_profile(g, [](double r, double) { return std::sin(pi * (r - 1.0)); });
        const auto rep = poincare_check(prof, g, 1.5);
        CHECK(rep.ratio_omega == doctest::Approx(1.0 / pi).epsilon(1e-3));
        CHECK(rep.ratio_strip == doctest::Approx(1.0 / pi).epsilon(1e-3));
        CHECK(rep.sqrt_cp == doctest::Approx(0.4502).epsilon(1e-4));
        CHECK(rep.holds);
    }
    SUBCASE("zero profile is degenerate") {
        const std::vector<double> prof(static_cast<std::size_t>(g.n_r() + 1) * g.n_z(), 0.0);
        const auto rep = poincare_check(prof, g, 1.5);
        CHECK(rep.degenerate_omega);
        CHECK(rep.degenerate_strip);
        CHECK(rep.norm_f_omega == 0.0);
    }
    SUBCASE("nonvanishing trace and bad cutoff rejected") {
        const auto prof = sample_profile(g, [](double r, double) { return r; });
        CHECK_THROWS_AS(poincare_check(prof, g, 1.5), ValidationError);
        const auto ok = sample_profile(g, [](double r, double) { return (r - 1.0) * (2.0 - r); });
        CHECK_THROWS_AS(poincare_check(ok, g, 1.0), ValidationError);
    }
    SUBCASE("random axial modulation") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int n = 0; n < 50; ++n) {
            const double c0 = 1.5 + u(rng), c1 = u(rng), c2 = u(rng), s1 = u(rng);
            auto gz = [&](double z) {
                return c0 + c1 * std::cos(pi * z / 2.0) + s1 * std::sin(pi * z / 2.0) + c2 * std::cos(pi * z);
            };
            const auto prof = sample_profile(g, [&](double r, double z) { return (r - 1.0) * (2.0 - r) * gz(z); });
            const auto rep = poincare_check(prof, g, 1.25 + 0.75 * std::abs(u(rng)));
            CHECK(rep.ratio_omega <= rep.bound);
            if (!rep.degenerate_strip) CHECK(rep.ratio_strip <= rep.bound);
            CHECK(rep.holds);
        }
    }
    CHECK(phi_l(0.0, 2.0) == 1.0);
    CHECK(phi_l(1.5, 2.0) == 0.5);
    CHECK(phi_l(-2.5, 2.0) == 0.0);
}

TEST_CASE("theta asymmetry") {
    const Grid g = Grid(Annulus(1.0, 2.0), 8, 8, 2.0).with_theta(16);
    Field base(g);
    CHECK(theta_asymmetry(base) == 0.0);
    auto with_eps = [&](double eps) {
        Field f = base;
        for (int k = 0; k < g.n_theta(); ++k)
            for (int i = 0; i < g.n_r(); ++i)
                for (int j = 0; j < g.n_z(); ++j) f.v_theta(k, i, j) += eps * std::cos(g.theta(k));
        return theta_asymmetry(f);
    };
    double max_sin = 0.0;
    for (int k = 0; k < g.n_theta(); ++k) max_sin = std::max(max_sin, std::abs(std::sin(g.theta(k))));
    const double ht = g.h_theta();
    const double a1 = with_eps(1e-3);
    CHECK(a1 == doctest::Approx(1e-3 * max_sin * std::sin(ht) / ht).epsilon(1e-12));
    CHECK(with_eps(2e-3) / a1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(theta_asymmetry(Field(g.without_theta())), ValidationError);
}

TEST_CASE("serial and parallel kernels agree bitwise") {
    omp_set_num_threads(4);
    const Annulus an(1.0, 2.0);
    const Grid g = Grid(an, 24, 20, 2.0);
    const Field f = random_field(g, 42);
    PressureField p(g);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : p.data()) v = u(rng);
    CHECK(divergence(f, Exec::serial) == divergence(f, Exec::parallel));
    const auto rs = residual_fields_axisym(f, p, 0.2, 0.5, true, Exec::serial);
    const auto rp = residual_fields_axisym(f, p, 0.2, 0.5, true, Exec::parallel);
    CHECK(rs.radial == rp.radial);
    CHECK(rs.azimuthal == rp.azimuthal);
    CHECK(rs.axial == rp.axial);
    CHECK(rs.continuity == rp.continuity);
    const auto ns = summarize(g, rs, Exec::serial);
    const auto np = summarize(g, rp, Exec::parallel);
    CHECK(ns.radial.l2 == doctest::Approx(np.radial.l2).epsilon(1e-13));
    CHECK(ns.max_linf() == np.max_linf());
    omp_set_num_threads(1);
    const auto one = summarize(g, rp, Exec::parallel);
    omp_set_num_threads(4);
    CHECK(one.radial.l2 == np.radial.l2);
    CHECK(one.axial.l2 == np.axial.l2);

    const Field ft = extend_in_theta(f, 6);
    const PressureField pt = extend_in_theta(p, 6);
    const auto gs = momentum_residual_general(ft, pt, 0.5, Exec::serial);
    const auto gp = momentum_residual_general(ft, pt, 0.5, Exec::parallel);
    CHECK(gs.azimuthal.l2 == doctest::Approx(gp.azimuthal.l2).epsilon(1e-13));
    CHECK(gs.max_linf() == gp.max_linf());
}
