#include "support.hpp"

#include "adaptrom/errors.hpp"
#include "adaptrom/problems.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace adaptrom;
using namespace testsupport;

TEST_CASE("bratu residual on a 3x3 interior grid") {
    const Grid2D grid = Grid2D::unit_square(4);
    REQUIRE(grid.size() == 9);
    BratuProblem model(grid, 1.0, Vector::Zero(9));
    CHECK((model.residual(Vector::Zero(9)) - Vector::Ones(9)).norm() == 0.0);
    BratuProblem homogeneous(grid, 0.0, Vector::Zero(9));
    CHECK(homogeneous.residual(Vector::Zero(9)).norm() == 0.0);
}

TEST_CASE("bratu residual matches a hand-written stencil") {
    const Grid2D grid = Grid2D::unit_square(5);
    std::mt19937_64 rng(8);
    const Vector u = 0.3 * random_vector(rng, grid.size());
    BratuProblem model(grid, 2.5, Vector::Zero(grid.size()));
    const Vector r = model.residual(u);
    const auto at = [&](Index i, Index j) {
        if (i < 0 || j < 0 || i >= grid.nx || j >= grid.ny) return 0.0;
        return u(grid.index(i, j));
    };
    const double h2 = grid.hx * grid.hx;
    for (Index j = 0; j < grid.ny; ++j)
        for (Index i = 0; i < grid.nx; ++i) {
            const double lap =
                (at(i - 1, j) + at(i + 1, j) + at(i, j - 1) + at(i, j + 1) - 4.0 * at(i, j)) / h2;
            CHECK(r(grid.index(i, j)) == doctest::Approx(lap + 2.5 * std::exp(at(i, j))).epsilon(1e-13));
        }
}

TEST_CASE("bratu initial guess") {
    // On an edge only one factor equals one; the guess vanishes at the corners.
    CHECK(bratu_initial_guess_at(0.0, 0.0, 0.25) == 0.0);
    CHECK(bratu_initial_guess_at(1.0, 1.0, 1.25) == 0.0);
    CHECK(bratu_initial_guess_at(0.0, 0.37, 0.25) ==
          doctest::Approx(-2.0 * std::log(2.0 - std::pow(1.0 + 0.37 - 0.37 * 0.37, 0.25))).epsilon(1e-15));
    // Centre value for a = 1: -2 ln(2 - 1.25^2) = -2 ln(0.4375).
    const double expected = -2.0 * std::log(0.4375);
    CHECK(bratu_initial_guess_at(0.5, 0.5, 1.0) == doctest::Approx(expected).epsilon(1e-15));
    const Grid2D grid = Grid2D::unit_square(4);
    const Vector u0 = bratu_initial_guess(grid, 1.0);
    CHECK(u0(grid.index(1, 1)) == doctest::Approx(expected).epsilon(1e-15));
    CHECK_THROWS_AS(bratu_initial_guess_at(0.5, 0.5, 10.0), LogDomain);
    CHECK_THROWS_AS(bratu_initial_guess(grid, 10.0), LogDomain);
}

TEST_CASE("bratu overflow guard") {
    BratuProblem model(Grid2D::unit_square(4), 1.0, Vector::Zero(9));
    CHECK_THROWS_AS(model.residual(Vector::Constant(9, 800.0)), OverflowGuard);
}

TEST_CASE("bratu branches at lambda = 3 are distinct") {
    const Grid2D grid = Grid2D::unit_square(20);
    BratuProblem lower(grid, 3.0, 0.25);
    BratuProblem upper(grid, 3.0, 1.25);
    const Vector ul = newton_solve_full(lower, lower.reference_state()).x;
    const Vector uu = newton_solve_full(upper, upper.reference_state()).x;
    MESSAGE("branch gap = " << (ul - uu).lpNorm<Eigen::Infinity>());
    CHECK((ul - uu).lpNorm<Eigen::Infinity>() > 0.5);
}

TEST_CASE("jacobians agree with finite differences") {
    std::mt19937_64 rng(21);
    SUBCASE("bratu") {
        BratuProblem model(Grid2D::unit_square(9), 4.0, 0.25);
        for (int k = 0; k < 20; ++k) {
            const Vector x = random_vector(rng, model.dimension());
            const Vector v = random_vector(rng, model.dimension());
            CHECK(fd_mismatch(model, x, v) <= 1e-4);
        }
    }
    for (auto conv : {ViscosityConvention::verbatim, ViscosityConvention::physical})
        for (auto adv : {AdvectionScheme::central, AdvectionScheme::upwind}) {
            BurgersParams p;
            p.cells = 7;
            p.re = 100.0;
            p.convention = conv;
            p.advection = adv;
            BurgersProblem burgers(p);
            const Vector prev = burgers.initial_state();
            BackwardEulerStep step(burgers, prev, 0.01, 0.01);
            for (int k = 0; k < 20; ++k) {
                const Vector x = prev + 0.2 * random_vector(rng, prev.size());
                const Vector v = random_vector(rng, prev.size());
                CHECK(fd_mismatch(step, x, v) <= 1e-4);
            }
        }
    SUBCASE("heat") {
        HeatParams p;
        p.nx = 6;
        p.ny = 5;
        p.dirichlet = {true, false, true, false};
        HeatGridProblem heat(p);
        const Vector prev = heat.initial_state();
        BackwardEulerStep step(heat, prev, 0.002, 0.002);
        for (int k = 0; k < 20; ++k) {
            const Vector x = prev + 50.0 * random_vector(rng, prev.size());
            const Vector v = random_vector(rng, prev.size());
            CHECK(fd_mismatch(step, x, v) <= 1e-4);
        }
    }
}

TEST_CASE("burgers closed-form field") {
    for (double re : {1.0, 50.0, 1000.0}) {
        const auto uv = BurgersProblem::exact(0.3, 0.3, 0.0, re);
        CHECK(uv[0] == 0.875);
        CHECK(uv[1] == 0.625);
    }
    BurgersParams p;
    p.cells = 5;
    BurgersProblem verbatim(p);
    CHECK(verbatim.viscosity() == 50.0);
    p.convention = ViscosityConvention::physical;
    BurgersProblem physical(p);
    CHECK(physical.viscosity() == doctest::Approx(0.02));
    CHECK(verbatim.dimension() == 2 * 16);
}

TEST_CASE("burgers step residual errors") {
    BurgersParams p;
    p.cells = 5;
    BurgersProblem model(p);
    const Vector x = model.initial_state();
    CHECK_THROWS_AS(burgers_step_residual(model, Vector::Zero(3), x, 0.001, 0.001), DimensionMismatch);
    Vector bad = x;
    bad(0) = std::nan("");
    CHECK_THROWS_AS(burgers_step_residual(model, bad, x, 0.001, 0.001), NonFinite);
    CHECK(burgers_step_residual(model, x, x, 0.001, 0.001).allFinite());
}

TEST_CASE("heat equilibrium and material constants") {
    HeatParams p;
    p.nx = 8;
    p.ny = 8;
    p.load_enabled = false;
    HeatGridProblem heat(p);
    const Vector t = Vector::Constant(heat.dimension(), 25.0);
    CHECK(heat_step_residual(heat, t, t, 0.3, 0.002).norm() == 0.0);
    const double h = 0.1 / 8.0;
    CHECK(heat.mass()(0) == doctest::Approx(500.0 * 200.0 * h * h * 0.01).epsilon(1e-15));
    CHECK(heat.conductivity(25.0) == doctest::Approx(303.15 + 0.3 * 25.0));
}

TEST_CASE("heat single-unknown chain step solved by hand") {
    // One node between two held neighbours at 25 C, constant conductivity.
    HeatParams p;
    p.nx = 1;
    p.ny = 1;
    p.k1 = 0.0;
    p.dirichlet = {true, true, false, false};
    p.initial_temperature = 40.0;
    p.burst.initial_amplitude = 3.0;
    HeatGridProblem heat(p);
    REQUIRE(heat.load_nodes().size() == 1);
    const double dt = 0.002;
    const double m = heat.mass()(0);
    const double g = p.thickness * p.k0;
    const double expected = (m * 40.0 + dt * 3.0 + 2.0 * dt * g * 25.0) / (m + 2.0 * dt * g);
    BackwardEulerStep step(heat, heat.initial_state(), dt, dt);
    const Vector t = newton_solve_full(step, heat.initial_state()).x;
    CHECK(t(0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("heat maximum principle without load") {
    HeatParams p;
    p.nx = 10;
    p.ny = 10;
    p.load_enabled = false;
    p.initial_temperature = 40.0;
    p.dirichlet = {true, false, false, true};
    HeatGridProblem heat(p);
    const auto traj = march_full(heat, 0.002, 20);
    for (const auto& t : traj.states) {
        CHECK(t.minCoeff() >= 25.0 - 1e-9);
        CHECK(t.maxCoeff() <= 40.0 + 1e-9);
    }
}

TEST_CASE("heat rejects negative conductivity") {
    HeatParams p;
    p.nx = 3;
    p.ny = 3;
    p.k0 = -100.0;
    HeatGridProblem heat(p);
    CHECK_THROWS_AS(heat.rhs(heat.initial_state(), 0.0), NegativeConductivity);
}

TEST_CASE("burst excitation") {
    HeatParams p;
    p.nx = 6;
    p.ny = 6;
    HeatGridProblem heat(p);
    BurstSchedule s;
    s.seed = 3;
    s.initial_amplitude = 0.7;
    s.max_amplitude = 2.0;
    // Window 0 carries the initial amplitude, window 1 is off.
    CHECK(s.amplitude(0.001) == 0.7);
    CHECK(s.amplitude(0.03) == 0.0);
    CHECK(burst_excitation(0.03, s, heat).norm() == 0.0);
    const Vector a = burst_excitation(0.05, s, heat);
    const Vector b = burst_excitation(0.05, s, heat);
    CHECK((a - b).norm() == 0.0);
    BurstSchedule other = s;
    other.seed = 4;
    CHECK(s.amplitude(0.001) == other.amplitude(0.001));
    bool differs = false;
    for (int w = 2; w < 40; w += 2) {
        const double t = (w + 0.5) * s.window;
        CHECK(s.amplitude(t) >= 0.0);
        CHECK(s.amplitude(t) <= 2.0);
        differs = differs || s.amplitude(t) != other.amplitude(t);
    }
    CHECK(differs);
    for (Index node = 0; node < heat.dimension(); ++node) {
        const bool loaded = std::find(heat.load_nodes().begin(), heat.load_nodes().end(), node) != heat.load_nodes().end();
        CHECK(a(node) == (loaded ? s.amplitude(0.05) : 0.0));
    }
}

TEST_CASE("burgers error against the closed form shrinks under refinement") {
    // With nu = 1/Re the closed form is a Burgers solution and the error follows the grid.
    std::vector<double> errors;
    for (Index cells : {10, 20}) {
        BurgersParams p;
        p.cells = cells;
        p.re = 50.0;
        p.convention = ViscosityConvention::physical;
        BurgersProblem burgers(p);
        NewtonOptions opts;
        opts.solver = LinearSolver::sparse;
        const auto traj = march_full(burgers, 0.001, 200, opts);
        errors.push_back((traj.states.back() - burgers.exact_state(traj.times.back())).lpNorm<Eigen::Infinity>());
    }
    MESSAGE("errors at t = 0.2: " << errors[0] << ", " << errors[1]);
    CHECK(errors[1] < errors[0]);
}
