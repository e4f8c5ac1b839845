#include "adaptrom/linalg.hpp"

#include "adaptrom/errors.hpp"

#include <string>

namespace adaptrom {

LinearSolver parse_linear_solver(std::string_view name) {
    if (name == "dense") return LinearSolver::dense;
    if (name == "sparse") return LinearSolver::sparse;
    throw ConfigError("unknown linear solver '" + std::string(name) + "'");
}

std::string_view to_string(LinearSolver solver) {
    return solver == LinearSolver::dense ? "dense" : "sparse";
}

DenseLU::DenseLU(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("DenseLU needs a square matrix");
    lu_.compute(a);
    const double scale = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
    const auto& packed = lu_.matrixLU();
    const double threshold = kPivotTolerance * scale;
    singular_ = scale == 0.0;
    for (Index i = 0; i < packed.rows() && !singular_; ++i) {
        if (!(std::abs(packed(i, i)) >= threshold)) singular_ = true;
    }
}

Vector DenseLU::solve(const Vector& b) const { return lu_.solve(b); }

Matrix DenseLU::solve(const Matrix& b) const { return lu_.solve(b); }

Vector solve_full(const SparseMatrix& a, const Vector& b, LinearSolver solver, int iteration) {
    if (a.rows() != a.cols() || a.rows() != b.size())
        throw DimensionMismatch("solve_full: system is " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + ", rhs has " + std::to_string(b.size()));
    if (solver == LinearSolver::dense) {
        DenseLU lu{Matrix(a)};
        if (lu.singular()) throw SingularJacobian(iteration);
        return lu.solve(b);
    }
    Eigen::SparseMatrix<double, Eigen::ColMajor> col_major = a;
    col_major.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(col_major);
    if (lu.info() != Eigen::Success) throw SingularJacobian(iteration);
    Vector x = lu.solve(b);
    if (lu.info() != Eigen::Success || !all_finite(x)) throw SingularJacobian(iteration);
    return x;
}

double orthonormality_error(const Matrix& basis) {
    if (basis.cols() == 0) return 0.0;
    const Matrix gram = basis.transpose() * basis;
    return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace adaptrom
