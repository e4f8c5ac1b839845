#pragma once

#include "adaptrom/linalg.hpp"

#include <vector>

namespace adaptrom {

/// Full-order model written as a residual operator r(x; mu) = 0.
///
/// Implementations are immutable after construction: residual() and
/// jacobian() are pure functions of the state, so one model may be shared
/// by several solvers running on different threads.
class FullModel {
public:
    virtual ~FullModel() = default;

    virtual Index dimension() const = 0;
    virtual Vector residual(const Vector& x) const = 0;
    virtual SparseMatrix jacobian(const Vector& x) const = 0;

    /// Reference configuration used as the affine offset of ROM solutions.
    virtual Vector reference_state() const = 0;

    Matrix dense_jacobian(const Vector& x) const { return Matrix(jacobian(x)); }
};

/// Constant term of the Newton split r = J (x - x_ref) + F at the linearization point x.
Vector linearization_constant(const FullModel& model, const Vector& x, const Vector& x_ref);

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 50;
    LinearSolver solver = LinearSolver::dense;
};

struct NewtonResult {
    Vector x;
    int iterations = 0;
    std::vector<double> residual_norms;  // one entry per evaluated iterate, starting with x0
};

/// Plain undamped Newton iteration on the full model.
NewtonResult newton_solve_full(const FullModel& model, Vector x0, const NewtonOptions& options = {});

/// Semi-discrete system M dx/dt = f(x, t) with a lumped (diagonal) mass.
class SemiDiscreteSystem {
public:
    virtual ~SemiDiscreteSystem() = default;

    virtual Index dimension() const = 0;
    virtual Vector rhs(const Vector& x, double t) const = 0;
    virtual SparseMatrix rhs_jacobian(const Vector& x, double t) const = 0;
    virtual Vector initial_state() const = 0;
    virtual Vector mass() const { return Vector::Ones(dimension()); }
};

struct TimeStepper {
    double dt;
    Vector x_prev;

    TimeStepper(double dt, Vector x_prev);
};

/// (x - x_prev) - dt * f, optionally weighted by a lumped mass: M (x - x_prev) - dt * f.
Vector backward_euler_residual(const Vector& f_at_x, const Vector& x, const Vector& x_prev, double dt,
                               const Vector& mass = {});

/// One implicit backward Euler step of a SemiDiscreteSystem, seen as a FullModel.
/// The previous state doubles as the ROM reference configuration.
class BackwardEulerStep final : public FullModel {
public:
    BackwardEulerStep(const SemiDiscreteSystem& system, Vector x_prev, double t_new, double dt);

    Index dimension() const override { return system_->dimension(); }
    Vector residual(const Vector& x) const override;
    SparseMatrix jacobian(const Vector& x) const override;
    Vector reference_state() const override { return x_prev_; }

    double time() const noexcept { return t_new_; }
    double dt() const noexcept { return dt_; }

private:
    const SemiDiscreteSystem* system_;
    Vector x_prev_;
    Vector mass_;
    double t_new_;
    double dt_;
};

struct TrajectoryResult {
    std::vector<Vector> states;  // states[0] is the initial state
    std::vector<double> times;
    std::vector<int> newton_iterations;
};

/// Marches the full model with backward Euler and Newton per step.
TrajectoryResult march_full(const SemiDiscreteSystem& system, double dt, int steps,
                            const NewtonOptions& options = {});

}  // namespace adaptrom
