#pragma once

#include "adaptrom/model.hpp"

#include <random>

namespace testsupport {

using adaptrom::Index;
using adaptrom::Matrix;
using adaptrom::SparseMatrix;
using adaptrom::Vector;

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
}

inline Vector random_vector(std::mt19937_64& rng, Index n) { return random_matrix(rng, n, 1).col(0); }

inline Matrix random_orthonormal(std::mt19937_64& rng, Index rows, Index cols) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, rows, cols));
    return qr.householderQ() * Matrix::Identity(rows, cols);
}

// r(x) = A x - b
class LinearModel final : public adaptrom::FullModel {
public:
    LinearModel(Matrix a, Vector b, Vector reference = {})
        : a_(std::move(a)), b_(std::move(b)), ref_(reference.size() ? std::move(reference) : Vector::Zero(b_.size())) {}

    Index dimension() const override { return b_.size(); }
    Vector residual(const Vector& x) const override { return a_ * x - b_; }
    SparseMatrix jacobian(const Vector&) const override { return a_.sparseView(); }
    Vector reference_state() const override { return ref_; }

private:
    Matrix a_;
    Vector b_;
    Vector ref_;
};

// Relative mismatch between the forward difference of r along v and J v.
inline double fd_mismatch(const adaptrom::FullModel& model, const Vector& x, const Vector& v) {
    const double h = 1e-6 * std::max(1.0, x.norm()) / std::max(1.0, v.norm());
    const Vector fd = (model.residual(x + h * v) - model.residual(x)) / h;
    const Vector jv = model.jacobian(x) * v;
    return (fd - jv).norm() / std::max(jv.norm(), 1e-300);
}

}  // namespace testsupport
