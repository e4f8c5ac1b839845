#include "adaptrom/rom.hpp"

#include "adaptrom/errors.hpp"

#include <cmath>
#include <string>

namespace adaptrom {

namespace {

void check_basis(const Matrix& basis, Index full_dim) {
    if (basis.cols() < 1) throw InvalidArgument("ROM basis needs at least one column");
    if (basis.rows() != full_dim) throw DimensionMismatch("ROM basis row count differs from reference length");
    const double err = orthonormality_error(basis);
    if (!(err <= RomState::kOrthonormalityTolerance))
        throw InvalidArgument("ROM basis is not orthonormal (max |Phi^T Phi - I| = " + std::to_string(err) + ")");
}

}  // namespace

RomState::RomState(Matrix basis, Vector reference)
    : basis_(std::move(basis)), reference_(std::move(reference)), q_(Vector::Zero(basis_.cols())) {
    check_basis(basis_, reference_.size());
}

void RomState::set_coordinates(Vector q) {
    if (q.size() != basis_.cols()) throw DimensionMismatch("ROM coordinates length");
    q_ = std::move(q);
}

void RomState::set_basis(Matrix basis) {
    check_basis(basis, reference_.size());
    const Vector offset = basis_ * q_;
    q_ = basis.transpose() * offset;
    basis_ = std::move(basis);
}

void RomState::set_reference(Vector reference) {
    if (reference.size() != basis_.rows()) throw DimensionMismatch("ROM reference length");
    reference_ = std::move(reference);
}

void RomState::restart(Matrix basis, Vector reference) {
    if (reference.size() != reference_.size()) throw DimensionMismatch("ROM reference length");
    check_basis(basis, reference.size());
    basis_ = std::move(basis);
    reference_ = std::move(reference);
    q_ = Vector::Zero(basis_.cols());
}

void reduced_newton_step(const FullModel& model, RomState& rom) {
    const Vector x = rom.reconstruct();
    const Vector g = rom.basis().transpose() * model.residual(x);
    const Matrix jphi = model.jacobian(x) * rom.basis();
    const Matrix reduced = rom.basis().transpose() * jphi;
    DenseLU lu(reduced);
    if (lu.singular()) throw SingularReducedJacobian(0);
    rom.set_coordinates(rom.coordinates() - lu.solve(g));
}

ReducedNewtonResult reduced_newton(const FullModel& model, RomState& rom, const ReducedNewtonOptions& options) {
    if (!(options.tol > 0.0)) throw InvalidArgument("reduced_newton: tolerance must be positive");
    if (model.dimension() != rom.full_dimension()) throw DimensionMismatch("reduced_newton: model/ROM dimension");
    const Matrix& phi = rom.basis();

    ReducedNewtonResult out;
    Vector x = rom.reconstruct();
    Vector g = phi.transpose() * model.residual(x);
    double norm = g.norm();
    out.projected_norms.push_back(norm);
    while (norm > options.tol) {
        if (out.iterations == options.max_iter || !std::isfinite(norm))
            throw NonConvergence(out.iterations, norm, "reduced Newton");
        const Matrix jphi = model.jacobian(x) * phi;
        const Matrix reduced = phi.transpose() * jphi;
        DenseLU lu(reduced);
        if (lu.singular()) throw SingularReducedJacobian(out.iterations);
        rom.set_coordinates(rom.coordinates() - lu.solve(g));
        ++out.iterations;
        x = rom.reconstruct();
        g = phi.transpose() * model.residual(x);
        norm = g.norm();
        out.projected_norms.push_back(norm);
    }
    return out;
}

double fom_error(const FullModel& model, const RomState& rom) { return model.residual(rom.reconstruct()).norm(); }

}  // namespace adaptrom
