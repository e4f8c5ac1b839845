#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string_view>

namespace adaptrom {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Row-major so that selected Jacobian rows can be read without a transpose.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

enum class LinearSolver { dense, sparse };

LinearSolver parse_linear_solver(std::string_view name);
std::string_view to_string(LinearSolver solver);

// LU with partial pivoting. A pivot whose magnitude is below
// 1e-14 * max|A_ij| marks the matrix as singular.
class DenseLU {
public:
    static constexpr double kPivotTolerance = 1e-14;

    explicit DenseLU(const Matrix& a);

    bool singular() const noexcept { return singular_; }
    Index size() const noexcept { return lu_.rows(); }

    Vector solve(const Vector& b) const;
    Matrix solve(const Matrix& b) const;

private:
    Eigen::PartialPivLU<Matrix> lu_;
    bool singular_ = false;
};

// Solves A x = b in the full dimension with the requested backend. Throws
// SingularJacobian(iteration) on rank deficiency.
Vector solve_full(const SparseMatrix& a, const Vector& b, LinearSolver solver, int iteration = 0);

double orthonormality_error(const Matrix& basis);

bool all_finite(const Vector& v);

}  // namespace adaptrom
