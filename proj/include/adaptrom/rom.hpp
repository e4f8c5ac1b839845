#pragma once

#include "adaptrom/model.hpp"

#include <vector>

namespace adaptrom {

/// Galerkin ROM state: x_hat = x_ref + Phi q with an orthonormal trial basis.
class RomState {
public:
    static constexpr double kOrthonormalityTolerance = 1e-8;

    RomState(Matrix basis, Vector reference);

    const Matrix& basis() const noexcept { return basis_; }
    const Vector& reference() const noexcept { return reference_; }
    const Vector& coordinates() const noexcept { return q_; }
    Index full_dimension() const noexcept { return basis_.rows(); }
    Index size() const noexcept { return basis_.cols(); }

    /// Always recomputed from the current basis and coordinates.
    Vector reconstruct() const { return reference_ + basis_ * q_; }
    double magnitude() const { return q_.norm(); }

    void set_coordinates(Vector q);
    /// Replaces the basis and projects the current reconstruction onto it.
    void set_basis(Matrix basis);
    void set_reference(Vector reference);
    /// Restarts from a new basis and reference with q = 0.
    void restart(Matrix basis, Vector reference);

private:
    Matrix basis_;
    Vector reference_;
    Vector q_;
};

struct ReducedNewtonOptions {
    double tol = 1e-8;
    int max_iter = 50;
};

struct ReducedNewtonResult {
    int iterations = 0;
    std::vector<double> projected_norms;  // ||Phi^T r|| per evaluated iterate
};

/// Newton on Phi^T r(x_ref + Phi q) = 0; each step solves (Phi^T J Phi) dq = -Phi^T r.
ReducedNewtonResult reduced_newton(const FullModel& model, RomState& rom, const ReducedNewtonOptions& options = {});

/// A single reduced Newton step regardless of the tolerance.
void reduced_newton_step(const FullModel& model, RomState& rom);

/// eps = ||r(x_ref + Phi q)||_2
double fom_error(const FullModel& model, const RomState& rom);

}  // namespace adaptrom
