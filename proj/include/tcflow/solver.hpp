/// @file solver.hpp
/// @brief Newton solver for the discrete stationary axisymmetric system on the
/// z-periodic annulus, with pseudo-transient continuation as globalization.
///
/// Unknowns are the interior radial-face velocities, the cell-centred azimuthal
/// velocities, the axial-face velocities and the cell pressures. Wall values are
/// set, not solved. One continuity row is replaced by a pin on p(0, 0); the
/// pressure of a converged solve is re-gauged to zero weighted mean. The imposed
/// axial gradient a is data, not an unknown.
#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tcflow/annulus.hpp"
#include "tcflow/grid.hpp"
#include "tcflow/operators.hpp"

namespace tcflow {

struct SolveOptions {
    double newton_tol = 1e-10;
    int max_newton = 50;
    /// Defaults to 0.1 (R2 - R1)^2 / nu.
    std::optional<double> ptc_initial_dt;
    bool stokes_mode = false;
    double imposed_axial_gradient = 0.0;
    Exec exec = Exec::parallel;

    void validate() const;
};

enum class SolveStatus { converged, max_iterations, singular_jacobian, stalled };

std::string to_string(SolveStatus status);

struct IterationRecord {
    int iteration = 0;
    double residual_linf = 0.0;
    double divergence_linf = 0.0;
    /// Pseudo-time step used for the step that produced this state; +inf for a
    /// pure Newton step, 0 for the initial state.
    double pseudo_dt = 0.0;
};

struct SolveOutcome {
    Field field;
    PressureField pressure;
    bool converged = false;
    SolveStatus status = SolveStatus::max_iterations;
    ResidualReport final_residual;
    int newton_iterations = 0;
    std::vector<IterationRecord> history;
};

/// Discrete residual F(x) and Jacobian of the axisymmetric system for a fixed
/// grid, viscosity, wall data and imposed gradient.
class SteadyProblem {
public:
    SteadyProblem(const Grid& grid, double nu, const FlowConfig& bc, double axial_gradient,
                  bool advect);

    const Grid& grid() const { return grid_; }
    int size() const { return n_unknowns_; }
    int velocity_size() const { return offset_p_; }

    Eigen::VectorXd pack(const Field& field, const PressureField& pressure) const;
    Field unpack_field(const Eigen::VectorXd& x) const;
    PressureField unpack_pressure(const Eigen::VectorXd& x) const;

    Eigen::VectorXd residual(const Eigen::VectorXd& x, Exec exec = Exec::parallel) const;
    /// Jacobian with `shift` added on the velocity diagonal. The sparsity
    /// pattern does not depend on x or shift.
    Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& x, double shift = 0.0,
                                         Exec exec = Exec::parallel) const;

    int ur_index(int i, int j) const { return (i - 1) * nz_ + j; }
    int vt_index(int i, int j) const { return offset_w_ + i * nz_ + j; }
    int vz_index(int i, int j) const { return offset_z_ + i * nz_ + j; }
    int p_index(int i, int j) const { return offset_p_ + i * nz_ + j; }

private:
    template <class T, class Sink>
    void assemble_row(const Eigen::VectorXd& x, int i, Sink&& sink) const;

    Grid grid_;
    double nu_;
    double wall_inner_;
    double wall_outer_;
    double axial_gradient_;
    bool advect_;
    int nr_;
    int nz_;
    int offset_w_;
    int offset_z_;
    int offset_p_;
    int n_unknowns_;
};

/// Solves for a stationary velocity-pressure pair. Non-convergence is reported
/// through the outcome, never thrown.
SolveOutcome solve_steady(const Grid& grid, double nu, const FlowConfig& bc, const Field& initial,
                          const SolveOptions& opts);

/// Adds a solenoidal axisymmetric disturbance: (v_r, v_z) from the staggered
/// curl of a random smooth stream function vanishing with its radial derivative
/// on both walls, plus a random wall-vanishing v_theta bump. Each part is
/// scaled so its largest value is `amplitude`. Deterministic in `seed`.
Field perturb(const Field& field, double amplitude, std::uint64_t seed);

/// CSV history: iteration, residual_linf, divergence_linf, pseudo_dt.
void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history);

}  // namespace tcflow
