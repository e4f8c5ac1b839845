#pragma once

#include "adaptrom/model.hpp"

#include <array>
#include <cstdint>

namespace adaptrom {

inline constexpr double kBratuCriticalLambda = 6.808124223;
// Value printed in the critical-response figure caption; kept for reference runs.
inline constexpr double kBratuCriticalLambdaFigure = 6.8083545;

/// Interior nodes of a uniform grid on the unit square. `cells` subdivisions per
/// axis give cells - 1 interior unknowns per axis; boundary nodes are eliminated.
struct Grid2D {
    Index nx = 0;
    Index ny = 0;
    double hx = 0.0;
    double hy = 0.0;

    static Grid2D unit_square(Index cells_x, Index cells_y);
    static Grid2D unit_square(Index cells) { return unit_square(cells, cells); }

    Index size() const noexcept { return nx * ny; }
    Index index(Index i, Index j) const noexcept { return j * nx + i; }
    double x(Index i) const noexcept { return static_cast<double>(i + 1) * hx; }
    double y(Index j) const noexcept { return static_cast<double>(j + 1) * hy; }
};

// ---------------------------------------------------------------------------
// Bratu: Laplace(u) + lambda * exp(u) = 0 on [0,1]^2, u = 0 on the boundary.

class BratuProblem final : public FullModel {
public:
    static constexpr double kExpLimit = 1e300;

    BratuProblem(Grid2D grid, double lambda, Vector reference);
    /// Reference defaults to the exponent-a initial guess.
    BratuProblem(Grid2D grid, double lambda, double a);

    Index dimension() const override { return grid_.size(); }
    Vector residual(const Vector& u) const override;
    SparseMatrix jacobian(const Vector& u) const override;
    Vector reference_state() const override { return reference_; }

    const Grid2D& grid() const noexcept { return grid_; }
    double lambda() const noexcept { return lambda_; }

private:
    Grid2D grid_;
    double lambda_;
    Vector reference_;
};

/// u0(x,y) = -2 ln(2 - (1+x-x^2)^a (1+y-y^2)^a) sampled at interior nodes.
Vector bratu_initial_guess(const Grid2D& grid, double a);
double bratu_initial_guess_at(double x, double y, double a);

// ---------------------------------------------------------------------------
// Coupled viscous Burgers with exact-solution boundary and initial data.

enum class ViscosityConvention { verbatim, physical };
enum class AdvectionScheme { central, upwind };

struct BurgersParams {
    Index cells = 20;
    double re = 50.0;
    ViscosityConvention convention = ViscosityConvention::verbatim;
    AdvectionScheme advection = AdvectionScheme::central;
};

class BurgersProblem final : public SemiDiscreteSystem {
public:
    explicit BurgersProblem(const BurgersParams& params);

    Index dimension() const override { return 2 * grid_.size(); }
    Vector rhs(const Vector& state, double t) const override;
    SparseMatrix rhs_jacobian(const Vector& state, double t) const override;
    Vector initial_state() const override { return exact_state(0.0); }

    /// Diffusion coefficient in front of the Laplacian (Re or 1/Re by convention).
    double viscosity() const noexcept { return nu_; }
    const Grid2D& grid() const noexcept { return grid_; }
    const BurgersParams& params() const noexcept { return params_; }

    /// Closed-form field used for initial and boundary values; the exponent is
    /// (-4x + 4y - t) / (32 Re) in both conventions.
    static std::array<double, 2> exact(double x, double y, double t, double re);
    Vector exact_state(double t) const;

private:
    BurgersParams params_;
    Grid2D grid_;
    double nu_;
};

Vector burgers_step_residual(const BurgersProblem& problem, const Vector& state, const Vector& prev, double t,
                             double dt);

// ---------------------------------------------------------------------------
// Nonlinear heat conduction on a regular grid.

/// Piecewise-constant burst load. Time is split into windows of equal length;
/// window 0 carries the initial amplitude, odd windows are off, and the other
/// even windows draw a uniform amplitude in [0, max_amplitude] from (seed, window).
struct BurstSchedule {
    std::uint64_t seed = 1;
    double window = 0.02;
    double max_amplitude = 1.0;
    double initial_amplitude = 1.0;

    double amplitude(double t) const;
};

enum class Side { left = 0, right = 1, bottom = 2, top = 3 };

struct HeatParams {
    Index nx = 45;
    Index ny = 45;
    double length = 0.1;      // m, edge length of the square plate
    double thickness = 0.01;  // m
    double density = 500.0;   // kg/m^3
    double specific_heat = 200.0;
    double k0 = 303.15;  // k(T) = k0 + k1 * T, W/(m K)
    double k1 = 0.3;
    double boundary_temperature = 25.0;
    double initial_temperature = 25.0;
    std::array<bool, 4> dirichlet{true, false, false, false};  // left, right, bottom, top
    BurstSchedule burst;
    bool load_enabled = true;
};

class HeatGridProblem final : public SemiDiscreteSystem {
public:
    explicit HeatGridProblem(const HeatParams& params);

    Index dimension() const override { return params_.nx * params_.ny; }
    Vector rhs(const Vector& temperature, double t) const override;
    SparseMatrix rhs_jacobian(const Vector& temperature, double t) const override;
    Vector initial_state() const override;
    Vector mass() const override;

    double spacing() const noexcept { return h_; }
    double conductivity(double temperature) const noexcept { return params_.k0 + params_.k1 * temperature; }
    const HeatParams& params() const noexcept { return params_; }
    Index index(Index i, Index j) const noexcept { return j * params_.nx + i; }

    /// Per-node load at time t: burst amplitude on the load nodes, zero elsewhere.
    Vector load(double t) const;
    const std::vector<Index>& load_nodes() const noexcept { return load_nodes_; }
    /// Observation nodes standing in for the two probe points.
    std::array<Index, 2> probes() const noexcept { return probes_; }

private:
    template <class Visit>
    void for_each_edge(const Vector& temperature, Visit&& visit) const;

    HeatParams params_;
    double h_;
    std::vector<Index> load_nodes_;
    std::array<Index, 2> probes_{};
};

Vector burst_excitation(double t, const BurstSchedule& schedule, const HeatGridProblem& problem);

Vector heat_step_residual(const HeatGridProblem& problem, const Vector& temperature, const Vector& prev, double t,
                          double dt);

}  // namespace adaptrom
