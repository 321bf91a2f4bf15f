#include <cmath>
#include <random>

#include "doctest.h"
#include "tcflow/errors.hpp"
#include "tcflow/exact_flows.hpp"
#include "tcflow/operators.hpp"

using namespace tcflow;

namespace {

bool rel_close(double a, double b, double tol, double floor = 0.0) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), floor});
}

// Cramer's rule on  [R1 1/R1; R2 1/R2] [A; B] = [R1 w1; R2 w2].
std::pair<double, double> solve_walls(double r1, double r2, double w1, double w2) {
    const double det = r1 / r2 - r2 / r1;
    const double a = (r1 * w1 / r2 - r2 * w2 / r1) / det;
    const double b = (r1 * r2 * w2 - r2 * r1 * w1) / det;
    return {a, b};
}

}  // namespace

TEST_CASE("Taylor-Couette coefficients") {
    const Annulus an(1.0, 2.0);
    const auto c = tc_coefficients(an, {1.0, 1.0, 0.0});
    const auto [a_ref, b_ref] = solve_walls(1.0, 2.0, 1.0, 0.0);
    CHECK(rel_close(c.a_coef, a_ref, 1e-14));
    CHECK(rel_close(c.b_coef, b_ref, 1e-14));
    CHECK(c.a_coef == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(c.b_coef == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    const auto rigid = tc_coefficients(an, {1.0, 0.7, 0.7});
    CHECK(rigid.a_coef == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(std::abs(rigid.b_coef) < 1e-15);

    const auto rest = tc_coefficients(an, {1.0, 0.0, 0.0});
    CHECK(rest.a_coef == 0.0);
    CHECK(rest.b_coef == 0.0);
}

TEST_CASE("azimuthal profile") {
    const Annulus an(1.0, 2.0);
    const auto c = tc_coefficients(an, {1.0, 1.0, 0.0});
    CHECK(eval_vtheta(c, 1.5) == doctest::Approx(0.3888889).epsilon(1e-7));
    CHECK(eval_vtheta(c, 1.5) == doctest::Approx(-0.5 + 4.0 / 4.5).epsilon(1e-15));
    CHECK(eval_vtheta(c, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(eval_vtheta(c, 2.0)) < 1e-15);
    const auto rigid = tc_coefficients(an, {1.0, 0.4, 0.4});
    for (double r : {1.0, 1.3, 1.9, 2.0}) CHECK(eval_vtheta(rigid, r) == doctest::Approx(0.4 * r));
    CHECK_THROWS_AS(eval_vtheta(c, 0.99), ValidationError);
    CHECK_THROWS_AS(eval_vtheta(c, 2.01), ValidationError);
}

TEST_CASE("annular Poiseuille profile") {
    const Annulus an(1.0, 2.0);
    const auto gtc = make_generalized_tc(an, {1.0, 0.0, 0.0}, 4.0);
    // Independent evaluation of both closed forms at r = 1.5.
    const double radii_form = (4.0 / 4.0) * ((1.5 * 1.5 - 1.0) - 3.0 / std::log(2.0) * std::log(1.5));
    const double eta = 0.5;
    const double eta_form =
        (4.0 / 4.0) * (1.5 * 1.5 - 1.0 + (1.0 - eta * eta) / (eta * eta * std::log(eta)) * std::log(1.5));
    CHECK(rel_close(radii_form, eta_form, 1e-14));
    CHECK(rel_close(eval_vz(gtc, 1.5), radii_form, 1e-14));
    CHECK(eval_vz(gtc, 1.5) == doctest::Approx(-0.504888).epsilon(1e-6));
    CHECK(std::abs(eval_vz(gtc, 1.0)) < 1e-15);
    CHECK(std::abs(eval_vz(gtc, 2.0)) < 1e-12 * 4.0 * 4.0);

    const auto still = make_generalized_tc(an, {1.0, 0.0, 0.0}, 0.0);
    for (double r : {1.0, 1.25, 1.75, 2.0}) CHECK(eval_vz(still, r) == 0.0);
    CHECK_THROWS_AS(eval_vz(gtc, 3.0), ValidationError);
}

TEST_CASE("pressure") {
    const Annulus an(1.0, 2.0);
    const auto rigid = make_generalized_tc(an, {1.0, 0.6, 0.6});
    for (double r : {1.0, 1.4, 2.0}) {
        CHECK(eval_pressure(rigid, r, 5.0) == doctest::Approx(0.5 * 0.36 * r * r).epsilon(1e-14));
    }

    // a z + b only.
    GeneralizedTC axial{TCCoefficients{0.0, 0.0, an}, 2.0, 1.0, 1.0};
    CHECK(eval_pressure(axial, 1.5, 3.0) == 7.0);

    // Radial balance d_r p = v_theta^2 / r by central differences.
    const auto gtc = make_generalized_tc(an, {1.0, 1.0, 0.0});
    const double r = 1.5;
    const double target = std::pow(eval_vtheta(gtc.coeffs, r), 2) / r;
    double prev_err = 0.0;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
        const double fd = (eval_pressure(gtc, r + h, 0.0) - eval_pressure(gtc, r - h, 0.0)) / (2 * h);
        const double err = std::abs(fd - target);
        CHECK(err < 10.0 * h * h);
        if (prev_err > 0.0) CHECK(err / prev_err == doctest::Approx(0.25).epsilon(0.02));
        prev_err = err;
    }
    CHECK_THROWS_AS(eval_pressure(gtc, 0.5, 0.0), ValidationError);
}

TEST_CASE("compact and expanded pressure agree") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> rad(0.2, 3.0);
    for (int n = 0; n < 100; ++n) {
        const double r1 = rad(rng);
        const Annulus an(r1, r1 + rad(rng));
        const FlowConfig cfg{1.0, u(rng), u(rng)};
        const double b = u(rng);
        const auto gtc = make_generalized_tc(an, cfg, 0.0, b);
        for (double t : {0.0, 0.3, 0.77, 1.0}) {
            const double r = an.r_inner() + t * an.gap();
            const double compact = eval_pressure_radial(gtc, r);
            const double expanded = eval_pressure_radial_expanded(an, cfg, b, r);
            double scale = std::abs(b) + 0.5 * std::pow(gtc.coeffs.a_coef * r, 2) +
                           std::abs(2.0 * gtc.coeffs.a_coef * gtc.coeffs.b_coef * std::log(r)) +
                           0.5 * std::pow(gtc.coeffs.b_coef / r, 2);
            CHECK(std::abs(compact - expanded) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("coefficient forms agree for random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rad(0.1, 4.0);
    std::uniform_real_distribution<double> om(-3.0, 3.0);
    for (int n = 0; n < 100; ++n) {
        const double r1 = rad(rng);
        const Annulus an(r1, r1 + rad(rng));
        FlowConfig cfg{1.0, om(rng), om(rng)};
        if (cfg.omega_inner == 0.0) cfg.omega_inner = 0.5;
        const auto ro = tc_coefficients(an, cfg);
        const auto me = tc_coefficients_mu_eta(an, cfg);
        // Both coefficients are compared against the size of v_theta at the walls.
        const double scale_a = std::abs(cfg.omega_inner) + std::abs(cfg.omega_outer);
        const double scale_b = scale_a * an.r_inner() * an.r_inner();
        CHECK(rel_close(ro.a_coef, me.a_coef, 1e-12, 1e-3 * scale_a));
        CHECK(rel_close(ro.b_coef, me.b_coef, 1e-12, 1e-3 * scale_b));
        // Wall conditions.
        CHECK(rel_close(eval_vtheta(ro, an.r_inner()), an.r_inner() * cfg.omega_inner, 1e-12,
                        an.r_outer() * scale_a));
        CHECK(rel_close(eval_vtheta(ro, an.r_outer()), an.r_outer() * cfg.omega_outer, 1e-12,
                        an.r_outer() * scale_a));
    }
    // omega1 = 0 branch.
    const Annulus an(1.0, 3.0);
    const auto ro = tc_coefficients(an, {1.0, 0.0, 0.9});
    const auto me = tc_coefficients_mu_eta(an, {1.0, 0.0, 0.9});
    CHECK(rel_close(ro.a_coef, me.a_coef, 1e-14));
    CHECK(rel_close(ro.b_coef, me.b_coef, 1e-14));
}

TEST_CASE("axial profile forms agree for random annuli") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> rad(0.1, 4.0);
    std::uniform_real_distribution<double> grad(-5.0, 5.0);
    std::uniform_real_distribution<double> visc(0.05, 5.0);
    for (int n = 0; n < 100; ++n) {
        const double r1 = rad(rng);
        const Annulus an(r1, r1 + rad(rng));
        const auto gtc = make_generalized_tc(an, {visc(rng), 0.0, 0.0}, grad(rng));
        const double wall_scale = std::abs(gtc.axial_gradient) * an.r_outer() * an.r_outer() /
                                  gtc.viscosity;
        CHECK(std::abs(eval_vz(gtc, an.r_inner())) <= 1e-12 * wall_scale);
        CHECK(std::abs(eval_vz(gtc, an.r_outer())) <= 1e-12 * wall_scale);
        for (double t : {0.1, 0.37, 0.5, 0.81}) {
            const double r = an.r_inner() + t * an.gap();
            CHECK(rel_close(eval_vz(gtc, r), eval_vz_eta_form(gtc, r), 1e-12));
        }
    }
}

TEST_CASE("coefficients are linear in the wall rates") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> om(-2.0, 2.0);
    const Annulus an(0.7, 1.9);
    for (int n = 0; n < 50; ++n) {
        const double w1 = om(rng), w2 = om(rng), c = om(rng);
        const auto base = tc_coefficients(an, {1.0, w1, w2});
        const auto scaled = tc_coefficients(an, {1.0, c * w1, c * w2});
        CHECK(std::abs(scaled.a_coef - c * base.a_coef) <= 1e-14 * (std::abs(c) * (std::abs(w1) + std::abs(w2))) * 4);
        CHECK(std::abs(scaled.b_coef - c * base.b_coef) <= 1e-14 * (std::abs(c) * (std::abs(w1) + std::abs(w2))) * 4);
    }
}

TEST_CASE("closed forms satisfy the reduced ODEs") {
    const Annulus an(1.0, 2.0);
    const double nu = 0.8;
    const auto gtc = make_generalized_tc(an, {nu, 0.3, -0.2}, 1.7);
    const double h = 1e-3;
    for (double r : {1.1, 1.35, 1.5, 1.72, 1.9}) {
        auto vt = [&](double x) { return eval_vtheta(gtc.coeffs, x); };
        auto vz = [&](double x) { return eval_vz(gtc, x); };
        const double d2t = (vt(r + h) - 2 * vt(r) + vt(r - h)) / (h * h);
        const double d1t = (vt(r + h) - vt(r - h)) / (2 * h);
        CHECK(std::abs(nu * (d2t + d1t / r - vt(r) / (r * r))) < 1e-5);
        const double d2z = (vz(r + h) - 2 * vz(r) + vz(r - h)) / (h * h);
        const double d1z = (vz(r + h) - vz(r - h)) / (2 * h);
        CHECK(nu * (d2z + d1z / r) == doctest::Approx(gtc.axial_gradient).epsilon(1e-5));
    }
}

TEST_CASE("sampling on the staggered grid") {
    const Annulus an(1.0, 2.0);
    const Grid grid(an, 64, 64, 2.0);

    SUBCASE("zero flow") {
        const auto gtc = make_generalized_tc(an, {1.0, 0.0, 0.0});
        const auto [f, p] = sample_on_grid(gtc, grid);
        CHECK(f.max_abs() == 0.0);
        for (double v : p.data()) CHECK(v == 0.0);
    }
    SUBCASE("pointwise values and exact divergence") {
        const auto gtc = make_generalized_tc(an, {1.0, 1.0, 0.0}, 0.5, 0.25);
        const auto [f, p] = sample_on_grid(gtc, grid);
        for (int i = 0; i < grid.n_r(); ++i)
            for (int j = 0; j < grid.n_z(); j += 7) {
                const double r = grid.r_center(i);
                CHECK(f.v_theta(0, i, j) == eval_vtheta(gtc.coeffs, r));
                CHECK(f.v_z(0, i, j) == eval_vz(gtc, r));
                CHECK(p(0, i, j) == eval_pressure_radial(gtc, r));
            }
        for (double v : f.v_r_data()) CHECK(v == 0.0);
        CHECK(p.axial_gradient == 0.5);
        CHECK(f.wall_vtheta_inner == doctest::Approx(1.0));
        for (double d : divergence(f)) CHECK(d == 0.0);
    }
    SUBCASE("annulus mismatch") {
        const auto other = make_generalized_tc(Annulus(1.0, 2.5), {1.0, 1.0, 0.0});
        CHECK_THROWS_AS(sample_on_grid(other, grid), ValidationError);
    }
}
