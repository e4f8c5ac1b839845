#include "adaptrom/model.hpp"

#include "adaptrom/errors.hpp"

#include <cmath>
#include <string>

namespace adaptrom {

Vector linearization_constant(const FullModel& model, const Vector& x, const Vector& x_ref) {
    return model.residual(x) - model.jacobian(x) * (x - x_ref);
}

NewtonResult newton_solve_full(const FullModel& model, Vector x0, const NewtonOptions& options) {
    if (x0.size() != model.dimension())
        throw DimensionMismatch("newton_solve_full: x0 has length " + std::to_string(x0.size()) +
                                ", model dimension is " + std::to_string(model.dimension()));
    if (!(options.tol > 0.0)) throw InvalidArgument("newton_solve_full: tol must be positive");
    if (options.max_iter < 1) throw InvalidArgument("newton_solve_full: max_iter must be positive");

    NewtonResult result;
    result.x = std::move(x0);
    Vector r = model.residual(result.x);
    double norm = r.norm();
    result.residual_norms.push_back(norm);
    while (norm > options.tol) {
        if (result.iterations == options.max_iter || !std::isfinite(norm))
            throw NonConvergence(result.iterations, norm, "full Newton");
        const SparseMatrix jac = model.jacobian(result.x);
        result.x -= solve_full(jac, r, options.solver, result.iterations);
        ++result.iterations;
        r = model.residual(result.x);
        norm = r.norm();
        result.residual_norms.push_back(norm);
    }
    return result;
}

TimeStepper::TimeStepper(double dt_, Vector x_prev_) : dt(dt_), x_prev(std::move(x_prev_)) {
    if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
}

Vector backward_euler_residual(const Vector& f_at_x, const Vector& x, const Vector& x_prev, double dt,
                               const Vector& mass) {
    if (f_at_x.size() != x.size() || x_prev.size() != x.size() || (mass.size() != 0 && mass.size() != x.size()))
        throw DimensionMismatch("backward_euler_residual: length mismatch");
    if (!(dt > 0.0)) throw InvalidArgument("backward_euler_residual: dt must be positive");
    if (mass.size() == 0) return (x - x_prev) - dt * f_at_x;
    return mass.cwiseProduct(x - x_prev) - dt * f_at_x;
}

BackwardEulerStep::BackwardEulerStep(const SemiDiscreteSystem& system, Vector x_prev, double t_new, double dt)
    : system_(&system), x_prev_(std::move(x_prev)), mass_(system.mass()), t_new_(t_new), dt_(dt) {
    if (x_prev_.size() != system.dimension()) throw DimensionMismatch("BackwardEulerStep: previous state length");
    if (!(dt > 0.0)) throw InvalidArgument("BackwardEulerStep: dt must be positive");
}

Vector BackwardEulerStep::residual(const Vector& x) const {
    return backward_euler_residual(system_->rhs(x, t_new_), x, x_prev_, dt_, mass_);
}

SparseMatrix BackwardEulerStep::jacobian(const Vector& x) const {
    SparseMatrix jac = -dt_ * system_->rhs_jacobian(x, t_new_);
    SparseMatrix diag(jac.rows(), jac.cols());
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(mass_.size()));
    for (Index i = 0; i < mass_.size(); ++i) entries.emplace_back(i, i, mass_(i));
    diag.setFromTriplets(entries.begin(), entries.end());
    return jac + diag;
}

TrajectoryResult march_full(const SemiDiscreteSystem& system, double dt, int steps, const NewtonOptions& options) {
    TrajectoryResult out;
    out.states.reserve(static_cast<std::size_t>(steps) + 1);
    out.states.push_back(system.initial_state());
    out.times.push_back(0.0);
    for (int k = 1; k <= steps; ++k) {
        const double t = k * dt;
        BackwardEulerStep step(system, out.states.back(), t, dt);
        auto solved = newton_solve_full(step, out.states.back(), options);
        out.newton_iterations.push_back(solved.iterations);
        out.states.push_back(std::move(solved.x));
        out.times.push_back(t);
    }
    return out;
}

}  // namespace adaptrom
