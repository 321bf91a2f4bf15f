#include "tcflow/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <numbers>
#include <random>

#include "tcflow/errors.hpp"
#include "tcflow/parallel.hpp"
#include "tcflow/sparse_dual.hpp"
#include "tcflow/stencils.hpp"

namespace tcflow {
namespace {

template <class T>
T make_unknown(double value, int index);

template <>
double make_unknown<double>(double value, int) {
    return value;
}

template <>
SparseDual make_unknown<SparseDual>(double value, int index) {
    return SparseDual::variable(value, index);
}

// Stencil source over the packed unknown vector.
template <class T>
class VectorSource {
public:
    VectorSource(const SteadyProblem& problem, const Eigen::VectorXd& x, double wall_in,
                 double wall_out)
        : p_(problem), x_(x), nr_(problem.grid().n_r()), nz_(problem.grid().n_z()),
          wall_in_(wall_in), wall_out_(wall_out) {}

    T ur(int i, int j) const {
        if (i == 0 || i == nr_) return T(0.0);
        return get(p_.ur_index(i, wrap(j, nz_)));
    }
    T vt(int i, int j) const { return get(p_.vt_index(i, wrap(j, nz_))); }
    T vz(int i, int j) const { return get(p_.vz_index(i, wrap(j, nz_))); }
    T p(int i, int j) const { return get(p_.p_index(i, wrap(j, nz_))); }
    double wall_in() const { return wall_in_; }
    double wall_out() const { return wall_out_; }

private:
    T get(int idx) const { return make_unknown<T>(x_[idx], idx); }

    const SteadyProblem& p_;
    const Eigen::VectorXd& x_;
    int nr_;
    int nz_;
    double wall_in_;
    double wall_out_;
};

double linf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

void SolveOptions::validate() const {
    require(newton_tol > 0.0, "newton_tol must be positive");
    require(max_newton >= 1, "max_newton must be at least 1");
    if (ptc_initial_dt) require(*ptc_initial_dt > 0.0, "ptc_initial_dt must be positive");
    require(std::isfinite(imposed_axial_gradient), "imposed axial gradient must be finite");
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::singular_jacobian: return "singular_jacobian";
        case SolveStatus::stalled: return "stalled";
    }
    return "unknown";
}

SteadyProblem::SteadyProblem(const Grid& grid, double nu, const FlowConfig& bc,
                             double axial_gradient, bool advect)
    : grid_(grid),
      nu_(nu),
      wall_inner_(grid.annulus().r_inner() * bc.omega_inner),
      wall_outer_(grid.annulus().r_outer() * bc.omega_outer),
      axial_gradient_(axial_gradient),
      advect_(advect),
      nr_(grid.n_r()),
      nz_(grid.n_z()) {
    require(grid.axisymmetric(), "the steady solver works on axisymmetric grids only");
    require(nu > 0.0, "viscosity must be positive");
    offset_w_ = (nr_ - 1) * nz_;
    offset_z_ = offset_w_ + nr_ * nz_;
    offset_p_ = offset_z_ + nr_ * nz_;
    n_unknowns_ = offset_p_ + nr_ * nz_;
}

Eigen::VectorXd SteadyProblem::pack(const Field& field, const PressureField& pressure) const {
    require(field.grid().same_layout(grid_) && pressure.grid().same_layout(grid_),
            "state does not live on the problem grid");
    Eigen::VectorXd x(n_unknowns_);
    for (int i = 0; i < nr_; ++i)
        for (int j = 0; j < nz_; ++j) {
            if (i > 0) x[ur_index(i, j)] = field.v_r(0, i, j);
            x[vt_index(i, j)] = field.v_theta(0, i, j);
            x[vz_index(i, j)] = field.v_z(0, i, j);
            x[p_index(i, j)] = pressure(0, i, j);
        }
    return x;
}

Field SteadyProblem::unpack_field(const Eigen::VectorXd& x) const {
    Field f(grid_);
    f.wall_vtheta_inner = wall_inner_;
    f.wall_vtheta_outer = wall_outer_;
    for (int i = 0; i < nr_; ++i)
        for (int j = 0; j < nz_; ++j) {
            if (i > 0) f.v_r(0, i, j) = x[ur_index(i, j)];
            f.v_theta(0, i, j) = x[vt_index(i, j)];
            f.v_z(0, i, j) = x[vz_index(i, j)];
        }
    return f;
}

PressureField SteadyProblem::unpack_pressure(const Eigen::VectorXd& x) const {
    PressureField p(grid_);
    p.axial_gradient = axial_gradient_;
    for (int i = 0; i < nr_; ++i)
        for (int j = 0; j < nz_; ++j) p(0, i, j) = x[p_index(i, j)];
    return p;
}

template <class T, class Sink>
void SteadyProblem::assemble_row(const Eigen::VectorXd& x, int i, Sink&& sink) const {
    const VectorSource<T> s(*this, x, wall_inner_, wall_outer_);
    const stencil::Spacing d(grid_);
    for (int j = 0; j < nz_; ++j) {
        if (i > 0) sink(ur_index(i, j), stencil::radial_momentum<T>(s, grid_, d, i, j, nu_, advect_));
        sink(vt_index(i, j), stencil::azimuthal_momentum<T>(s, grid_, d, i, j, nu_, advect_));
        sink(vz_index(i, j),
             stencil::axial_momentum<T>(s, grid_, d, i, j, nu_, axial_gradient_, advect_));
        if (i == 0 && j == 0)
            sink(p_index(0, 0), s.p(0, 0));
        else
            sink(p_index(i, j), stencil::continuity<T>(s, grid_, d, i, j));
    }
}

Eigen::VectorXd SteadyProblem::residual(const Eigen::VectorXd& x, Exec exec) const {
    require(x.size() == n_unknowns_, "state vector has the wrong size");
    Eigen::VectorXd f(n_unknowns_);
    for_rows(exec, nr_, [&](int i) {
        assemble_row<double>(x, i, [&](int row, double v) { f[row] = v; });
    });
    return f;
}

Eigen::SparseMatrix<double> SteadyProblem::jacobian(const Eigen::VectorXd& x, double shift,
                                                    Exec exec) const {
    require(x.size() == n_unknowns_, "state vector has the wrong size");
    using Triplet = Eigen::Triplet<double>;
    std::vector<std::vector<Triplet>> rows(static_cast<std::size_t>(nr_));
    for_rows(exec, nr_, [&](int i) {
        auto& out = rows[static_cast<std::size_t>(i)];
        out.reserve(static_cast<std::size_t>(nz_) * 64);
        assemble_row<SparseDual>(x, i, [&](int row, const SparseDual& v) {
            for (const auto& e : v.grad()) out.emplace_back(row, e.index, e.coef);
            if (row < offset_p_) out.emplace_back(row, row, shift);
        });
    });
    std::size_t total = 0;
    for (const auto& r : rows) total += r.size();
    std::vector<Triplet> all;
    all.reserve(total);
    for (const auto& r : rows) all.insert(all.end(), r.begin(), r.end());
    Eigen::SparseMatrix<double> j(n_unknowns_, n_unknowns_);
    j.setFromTriplets(all.begin(), all.end());
    return j;
}

namespace {

struct StateMeasure {
    ResidualReport report;
    double value = 0.0;  // max over momentum and continuity L-infinity norms
};

StateMeasure measure(const SteadyProblem& problem, const Eigen::VectorXd& x, double nu,
                     double axial_gradient, bool advect, Exec exec) {
    const Field f = problem.unpack_field(x);
    const PressureField p = problem.unpack_pressure(x);
    StateMeasure m;
    m.report = summarize(problem.grid(),
                         residual_fields_axisym(f, p, axial_gradient, nu, advect, exec), exec);
    m.value = m.report.max_linf();
    return m;
}

}  // namespace

SolveOutcome solve_steady(const Grid& grid, double nu, const FlowConfig& bc, const Field& initial,
                          const SolveOptions& opts) {
    opts.validate();
    bc.validate();
    require(nu > 0.0, "viscosity must be positive");
    require(grid.axisymmetric(), "solve_steady needs an axisymmetric grid");
    require(initial.grid().same_layout(grid), "initial field does not live on the solver grid");

    const bool advect = !opts.stokes_mode;
    const double a = opts.imposed_axial_gradient;
    const SteadyProblem problem(grid, nu, bc, a, advect);

    Field start = initial;
    start.attach_walls(bc);
    start.enforce_walls();
    PressureField p0(grid);
    p0.axial_gradient = a;
    Eigen::VectorXd x = problem.pack(start, p0);

    const double dt0 = opts.ptc_initial_dt.value_or(0.1 * grid.annulus().gap() *
                                                    grid.annulus().gap() / nu);
    const double inf = std::numeric_limits<double>::infinity();

    SolveOutcome out{problem.unpack_field(x), problem.unpack_pressure(x), false,
                     SolveStatus::max_iterations, {}, 0, {}};
    StateMeasure current = measure(problem, x, nu, a, advect, opts.exec);
    out.history.push_back({0, current.value, current.report.continuity.linf, 0.0});

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    bool pattern_ready = false;
    // Pure Newton while full steps reduce the residual; pseudo-transient
    // continuation (dt x2 on decrease, x0.5 otherwise) once one does not, back
    // to Newton below 1e-3 of the residual at PTC entry. Stokes mode is linear
    // and always takes the full step.
    bool ptc = false;
    double dt = dt0;
    double ptc_entry = current.value;
    int solves = 0;
    out.status = SolveStatus::max_iterations;

    while (true) {
        if (current.value <= opts.newton_tol) {
            out.status = SolveStatus::converged;
            break;
        }
        if (solves >= opts.max_newton) break;
        if (ptc && dt < 1e-12 * dt0) {
            out.status = SolveStatus::stalled;
            break;
        }

        const double shift = ptc ? 1.0 / dt : 0.0;
        const Eigen::SparseMatrix<double> jac = problem.jacobian(x, shift, opts.exec);
        if (!pattern_ready) {
            lu.analyzePattern(jac);
            pattern_ready = true;
        }
        lu.factorize(jac);
        ++solves;
        if (lu.info() != Eigen::Success) {
            out.status = SolveStatus::singular_jacobian;
            break;
        }
        const Eigen::VectorXd f = problem.residual(x, opts.exec);
        const Eigen::VectorXd step = lu.solve(-f);
        if (lu.info() != Eigen::Success || !step.allFinite()) {
            out.status = SolveStatus::singular_jacobian;
            break;
        }
        const Eigen::VectorXd trial = x + step;
        const StateMeasure next = measure(problem, trial, nu, a, advect, opts.exec);
        const bool improved = std::isfinite(next.value) && next.value < current.value;

        if (!ptc) {
            if (improved || opts.stokes_mode) {
                x = trial;
                current = next;
                out.history.push_back({solves, current.value, current.report.continuity.linf, inf});
            } else {
                ptc = true;
                dt = dt0;
                ptc_entry = current.value;
                out.history.push_back({solves, current.value, current.report.continuity.linf, 0.0});
            }
            continue;
        }

        if (improved) {
            x = trial;
            current = next;
            out.history.push_back({solves, current.value, current.report.continuity.linf, dt});
            dt *= 2.0;
            if (current.value < 1e-3 * ptc_entry) ptc = false;
        } else {
            out.history.push_back({solves, current.value, current.report.continuity.linf, dt});
            dt *= 0.5;
        }
    }

    out.newton_iterations = solves;
    out.converged = out.status == SolveStatus::converged;
    out.field = problem.unpack_field(x);
    out.pressure = problem.unpack_pressure(x);
    out.pressure.regauge();
    out.final_residual = current.report;
    return out;
}

Field perturb(const Field& field, double amplitude, std::uint64_t seed) {
    require(amplitude >= 0.0 && std::isfinite(amplitude), "amplitude must be non-negative");
    const Grid& g = field.grid();
    require(g.axisymmetric(), "perturb expects an axisymmetric field");
    if (amplitude == 0.0) return field;

    constexpr int modes = 3;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    struct Mode {
        double cos_c, sin_c, radial;
    };
    std::vector<Mode> psi_modes(modes);
    std::vector<Mode> bump_modes(modes + 1);
    for (auto& m : psi_modes) m = {uni(rng), uni(rng), 0.5 * uni(rng)};
    for (auto& m : bump_modes) m = {uni(rng), uni(rng), 0.5 * uni(rng)};

    const int nr = g.n_r();
    const int nz = g.n_z();
    const double r1 = g.annulus().r_inner();
    const double gap = g.annulus().gap();
    const double kappa = 2.0 * std::numbers::pi / g.z_period();
    auto xi = [&](double r) { return (r - r1) / gap; };

    // psi at (radial face i, axial face j); sin^2 makes psi and d psi/dr vanish on the walls.
    std::vector<double> psi(static_cast<std::size_t>(nr + 1) * nz, 0.0);
    for (int i = 1; i < nr; ++i) {
        const double x = xi(g.r_face(i));
        const double s = std::sin(std::numbers::pi * x);
        for (int j = 0; j < nz; ++j) {
            const double z = g.z_face(j);
            double sum = 0.0;
            for (int m = 0; m < modes; ++m) {
                const Mode& md = psi_modes[static_cast<std::size_t>(m)];
                const double arg = kappa * (m + 1) * z;
                sum += (md.cos_c * std::cos(arg) + md.sin_c * std::sin(arg)) *
                       (1.0 + md.radial * std::cos(std::numbers::pi * x));
            }
            psi[static_cast<std::size_t>(i) * nz + j] = s * s * sum;
        }
    }
    auto psi_at = [&](int i, int j) { return psi[static_cast<std::size_t>(i) * nz + wrap(j, nz)]; };

    Field du(g);
    for (int i = 1; i < nr; ++i)
        for (int j = 0; j < nz; ++j)
            du.v_r(0, i, j) = -(psi_at(i, j + 1) - psi_at(i, j)) / (g.h_z() * g.r_face(i));
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nz; ++j)
            du.v_z(0, i, j) = (psi_at(i + 1, j) - psi_at(i, j)) / (g.h_r() * g.r_center(i));
    for (int i = 0; i < nr; ++i) {
        const double x = xi(g.r_center(i));
        const double s = std::sin(std::numbers::pi * x);
        for (int j = 0; j < nz; ++j) {
            const double z = g.z_center(j);
            double sum = 0.0;
            for (int m = 0; m <= modes; ++m) {
                const Mode& md = bump_modes[static_cast<std::size_t>(m)];
                const double arg = kappa * m * z;
                sum += (md.cos_c * std::cos(arg) + md.sin_c * std::sin(arg)) *
                       (1.0 + md.radial * std::cos(std::numbers::pi * x));
            }
            du.v_theta(0, i, j) = s * sum;
        }
    }

    const double poloidal = std::max(linf(du.v_r_data()), linf(du.v_z_data()));
    const double azimuthal = linf(du.v_theta_data());
    const double sp = poloidal > 0.0 ? amplitude / poloidal : 0.0;
    const double sa = azimuthal > 0.0 ? amplitude / azimuthal : 0.0;

    Field out = field;
    for (std::size_t n = 0; n < out.v_r_data().size(); ++n) out.v_r_data()[n] += sp * du.v_r_data()[n];
    for (std::size_t n = 0; n < out.v_z_data().size(); ++n) out.v_z_data()[n] += sp * du.v_z_data()[n];
    for (std::size_t n = 0; n < out.v_theta_data().size(); ++n)
        out.v_theta_data()[n] += sa * du.v_theta_data()[n];
    return out;
}

void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history) {
    const auto old_precision = out.precision(17);
    out << "iteration,residual_linf,divergence_linf,pseudo_dt\n";
    for (const auto& h : history)
        out << h.iteration << ',' << h.residual_linf << ',' << h.divergence_linf << ','
            << h.pseudo_dt << '\n';
    out.precision(old_precision);
}

}  // namespace tcflow
