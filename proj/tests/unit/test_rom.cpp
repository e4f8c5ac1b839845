#include "support.hpp"

#include "adaptrom/errors.hpp"
#include "adaptrom/problems.hpp"
#include "adaptrom/rom.hpp"

#include <doctest.h>

using namespace adaptrom;
using namespace testsupport;

TEST_CASE("rom state reconstructs and validates its basis") {
    std::mt19937_64 rng(41);
    const Matrix phi = random_orthonormal(rng, 8, 3);
    const Vector ref = random_vector(rng, 8);
    RomState rom(phi, ref);
    CHECK(rom.coordinates().norm() == 0.0);
    CHECK(rom.reconstruct() == ref);
    const Vector q = random_vector(rng, 3);
    rom.set_coordinates(q);
    CHECK((rom.reconstruct() - (ref + phi * q)).norm() <= 1e-14);
    CHECK(rom.magnitude() == doctest::Approx(q.norm()));
    CHECK_THROWS_AS(RomState(2.0 * phi, ref), InvalidArgument);
    CHECK_THROWS_AS(RomState(phi, Vector::Zero(5)), DimensionMismatch);
    CHECK_THROWS_AS(rom.set_coordinates(Vector::Zero(2)), DimensionMismatch);
}

TEST_CASE("set_basis keeps the reconstruction inside the new span") {
    std::mt19937_64 rng(42);
    const Matrix big = random_orthonormal(rng, 10, 5);
    RomState rom(big.leftCols(3), Vector::Zero(10));
    rom.set_coordinates(random_vector(rng, 3));
    const Vector before = rom.reconstruct();
    rom.set_basis(big);
    CHECK((rom.reconstruct() - before).norm() <= 1e-13);
    rom.restart(big.leftCols(2), before);
    CHECK(rom.size() == 2);
    CHECK(rom.coordinates().norm() == 0.0);
    CHECK(rom.reconstruct() == before);
}

TEST_CASE("reduced newton on a linear model gives the Galerkin solution in one step") {
    std::mt19937_64 rng(43);
    const Index n = 12;
    const Matrix a = random_matrix(rng, n, n) + 12.0 * Matrix::Identity(n, n);
    const Vector b = random_vector(rng, n);
    const Matrix phi = random_orthonormal(rng, n, 4);
    LinearModel model(a, b);
    RomState rom(phi, Vector::Zero(n));
    const auto res = reduced_newton(model, rom);
    CHECK(res.iterations == 1);
    const Vector expected = (phi.transpose() * a * phi).lu().solve(phi.transpose() * b);
    CHECK((rom.coordinates() - expected).norm() <= 1e-12);
    CHECK((phi.transpose() * model.residual(rom.reconstruct())).norm() <= 1e-8);
    CHECK(fom_error(model, rom) == doctest::Approx((a * rom.reconstruct() - b).norm()).epsilon(1e-14));
}

TEST_CASE("reduced newton with the identity basis follows full newton") {
    const Grid2D grid = Grid2D::unit_square(8);
    BratuProblem model(grid, 3.0, 0.25);
    const Index n = model.dimension();
    RomState rom(Matrix::Identity(n, n), model.reference_state());
    ReducedNewtonOptions ro;
    ro.tol = 1e-10;
    const auto reduced = reduced_newton(model, rom, ro);
    const auto full = newton_solve_full(model, model.reference_state());
    CHECK(reduced.iterations == full.iterations);
    for (std::size_t k = 0; k < full.residual_norms.size(); ++k)
        CHECK(reduced.projected_norms[k] == doctest::Approx(full.residual_norms[k]).epsilon(1e-8));
    CHECK((rom.reconstruct() - full.x).lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK(fom_error(model, rom) <= 1e-10);
}

TEST_CASE("reduced newton errors") {
    LinearModel singular(Matrix::Zero(4, 4), Vector::Ones(4));
    RomState rom(Matrix::Identity(4, 2), Vector::Zero(4));
    CHECK_THROWS_AS(reduced_newton(singular, rom), SingularReducedJacobian);
    BratuProblem model(Grid2D::unit_square(8), 3.0, 0.25);
    RomState r2(Matrix::Identity(49, 49), model.reference_state());
    ReducedNewtonOptions opts;
    opts.max_iter = 1;
    opts.tol = 1e-14;
    CHECK_THROWS_AS(reduced_newton(model, r2, opts), NonConvergence);
}

TEST_CASE("enlarging the basis never increases the least-squares residual") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 15;
        const Matrix a = random_matrix(rng, n, n) + 15.0 * Matrix::Identity(n, n);
        const Vector b = random_vector(rng, n);
        const Matrix basis = random_orthonormal(rng, n, 6);
        double previous = std::numeric_limits<double>::infinity();
        for (Index k = 1; k <= 6; ++k) {
            const Matrix phi = basis.leftCols(k);
            const Matrix aphi = a * phi;
            const Vector q = aphi.colPivHouseholderQr().solve(b);
            const double best = (aphi * q - b).norm();
            CHECK(best <= previous * (1.0 + 1e-12));
            previous = best;
        }
    }
}
