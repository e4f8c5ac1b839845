#include "adaptrom/problems.hpp"

#include "adaptrom/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace adaptrom {

Grid2D Grid2D::unit_square(Index cells_x, Index cells_y) {
    if (cells_x < 2 || cells_y < 2) throw InvalidArgument("grid needs at least 2 cells per axis");
    Grid2D g;
    g.nx = cells_x - 1;
    g.ny = cells_y - 1;
    g.hx = 1.0 / static_cast<double>(cells_x);
    g.hy = 1.0 / static_cast<double>(cells_y);
    return g;
}

// ---------------------------------------------------------------------------
// Bratu

BratuProblem::BratuProblem(Grid2D grid, double lambda, Vector reference)
    : grid_(grid), lambda_(lambda), reference_(std::move(reference)) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("Bratu lambda must be finite and nonnegative");
    if (reference_.size() != grid_.size()) throw DimensionMismatch("Bratu reference state length");
}

BratuProblem::BratuProblem(Grid2D grid, double lambda, double a)
    : BratuProblem(grid, lambda, bratu_initial_guess(grid, a)) {}

Vector BratuProblem::residual(const Vector& u) const {
    if (u.size() != dimension()) throw DimensionMismatch("Bratu residual: state length");
    const double cx = 1.0 / (grid_.hx * grid_.hx);
    const double cy = 1.0 / (grid_.hy * grid_.hy);
    Vector r(dimension());
    for (Index j = 0; j < grid_.ny; ++j) {
        for (Index i = 0; i < grid_.nx; ++i) {
            const Index p = grid_.index(i, j);
            const double west = i > 0 ? u(p - 1) : 0.0;
            const double east = i + 1 < grid_.nx ? u(p + 1) : 0.0;
            const double south = j > 0 ? u(p - grid_.nx) : 0.0;
            const double north = j + 1 < grid_.ny ? u(p + grid_.nx) : 0.0;
            const double e = std::exp(u(p));
            if (!(e <= kExpLimit)) throw OverflowGuard("Bratu exp(u) overflow at node " + std::to_string(p));
            r(p) = cx * (west - 2.0 * u(p) + east) + cy * (south - 2.0 * u(p) + north) + lambda_ * e;
        }
    }
    return r;
}

SparseMatrix BratuProblem::jacobian(const Vector& u) const {
    if (u.size() != dimension()) throw DimensionMismatch("Bratu jacobian: state length");
    const double cx = 1.0 / (grid_.hx * grid_.hx);
    const double cy = 1.0 / (grid_.hy * grid_.hy);
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(5 * dimension()));
    for (Index j = 0; j < grid_.ny; ++j) {
        for (Index i = 0; i < grid_.nx; ++i) {
            const Index p = grid_.index(i, j);
            const double e = std::exp(u(p));
            if (!(e <= kExpLimit)) throw OverflowGuard("Bratu exp(u) overflow at node " + std::to_string(p));
            entries.emplace_back(p, p, -2.0 * cx - 2.0 * cy + lambda_ * e);
            if (i > 0) entries.emplace_back(p, p - 1, cx);
            if (i + 1 < grid_.nx) entries.emplace_back(p, p + 1, cx);
            if (j > 0) entries.emplace_back(p, p - grid_.nx, cy);
            if (j + 1 < grid_.ny) entries.emplace_back(p, p + grid_.nx, cy);
        }
    }
    SparseMatrix jac(dimension(), dimension());
    jac.setFromTriplets(entries.begin(), entries.end());
    return jac;
}

double bratu_initial_guess_at(double x, double y, double a) {
    if (!(a > 0.0)) throw InvalidArgument("Bratu initial-guess exponent must be positive");
    const double arg = 2.0 - std::pow(1.0 + x - x * x, a) * std::pow(1.0 + y - y * y, a);
    if (!(arg > 0.0)) throw LogDomain("Bratu initial guess: log argument " + std::to_string(arg) + " <= 0");
    return -2.0 * std::log(arg);
}

Vector bratu_initial_guess(const Grid2D& grid, double a) {
    Vector u(grid.size());
    for (Index j = 0; j < grid.ny; ++j)
        for (Index i = 0; i < grid.nx; ++i) u(grid.index(i, j)) = bratu_initial_guess_at(grid.x(i), grid.y(j), a);
    return u;
}

// ---------------------------------------------------------------------------
// Burgers

BurgersProblem::BurgersProblem(const BurgersParams& params)
    : params_(params), grid_(Grid2D::unit_square(params.cells)) {
    if (!(params.re > 0.0)) throw InvalidArgument("Burgers Re must be positive");
    nu_ = params.convention == ViscosityConvention::verbatim ? params.re : 1.0 / params.re;
}

std::array<double, 2> BurgersProblem::exact(double x, double y, double t, double re) {
    const double s = 1.0 / (4.0 * (1.0 + std::exp((-4.0 * x + 4.0 * y - t) / (32.0 * re))));
    return {0.75 + s, 0.75 - s};
}

Vector BurgersProblem::exact_state(double t) const {
    const Index n = grid_.size();
    Vector state(2 * n);
    for (Index j = 0; j < grid_.ny; ++j) {
        for (Index i = 0; i < grid_.nx; ++i) {
            const auto uv = exact(grid_.x(i), grid_.y(j), t, params_.re);
            state(grid_.index(i, j)) = uv[0];
            state(n + grid_.index(i, j)) = uv[1];
        }
    }
    return state;
}

namespace {

// Neighbour values of both velocity components around one interior node, with
// boundary values taken from the exact solution at time t.
struct BurgersStencil {
    // index 0: u, 1: v; positions W, E, S, N
    double w[2], e[2], s[2], n[2], p[2];
    Index iw, ie, is, in;  // -1 when the neighbour is a boundary node
};

BurgersStencil gather(const Grid2D& g, const Vector& state, Index i, Index j, double t, double re) {
    const Index n = g.size();
    const Index p = g.index(i, j);
    BurgersStencil st{};
    st.iw = i > 0 ? p - 1 : -1;
    st.ie = i + 1 < g.nx ? p + 1 : -1;
    st.is = j > 0 ? p - g.nx : -1;
    st.in = j + 1 < g.ny ? p + g.nx : -1;
    auto value = [&](Index idx, double x, double y, double out[2]) {
        if (idx >= 0) {
            out[0] = state(idx);
            out[1] = state(n + idx);
        } else {
            const auto uv = BurgersProblem::exact(x, y, t, re);
            out[0] = uv[0];
            out[1] = uv[1];
        }
    };
    const double x = g.x(i);
    const double y = g.y(j);
    value(st.iw, x - g.hx, y, st.w);
    value(st.ie, x + g.hx, y, st.e);
    value(st.is, x, y - g.hy, st.s);
    value(st.in, x, y + g.hy, st.n);
    st.p[0] = state(p);
    st.p[1] = state(n + p);
    return st;
}

// One-dimensional first-derivative stencil weights (minus, centre, plus).
std::array<double, 3> derivative_weights(AdvectionScheme scheme, double velocity, double h) {
    if (scheme == AdvectionScheme::central) return {-0.5 / h, 0.0, 0.5 / h};
    if (velocity >= 0.0) return {-1.0 / h, 1.0 / h, 0.0};
    return {0.0, -1.0 / h, 1.0 / h};
}

void check_finite(const Vector& state, const char* what) {
    if (!state.allFinite()) throw NonFinite(std::string(what) + ": state has NaN/Inf entries");
}

}  // namespace

Vector BurgersProblem::rhs(const Vector& state, double t) const {
    if (state.size() != dimension()) throw DimensionMismatch("Burgers rhs: state length");
    check_finite(state, "Burgers rhs");
    const Index n = grid_.size();
    const double cx = nu_ / (grid_.hx * grid_.hx);
    const double cy = nu_ / (grid_.hy * grid_.hy);
    Vector f(2 * n);
    for (Index j = 0; j < grid_.ny; ++j) {
        for (Index i = 0; i < grid_.nx; ++i) {
            const Index p = grid_.index(i, j);
            const auto st = gather(grid_, state, i, j, t, params_.re);
            const double a = st.p[0];
            const double b = st.p[1];
            const auto wx = derivative_weights(params_.advection, a, grid_.hx);
            const auto wy = derivative_weights(params_.advection, b, grid_.hy);
            for (int c = 0; c < 2; ++c) {
                const double dx = wx[0] * st.w[c] + wx[1] * st.p[c] + wx[2] * st.e[c];
                const double dy = wy[0] * st.s[c] + wy[1] * st.p[c] + wy[2] * st.n[c];
                const double lap = cx * (st.w[c] - 2.0 * st.p[c] + st.e[c]) + cy * (st.s[c] - 2.0 * st.p[c] + st.n[c]);
                f(c * n + p) = -a * dx - b * dy + lap;
            }
        }
    }
    return f;
}

SparseMatrix BurgersProblem::rhs_jacobian(const Vector& state, double t) const {
    if (state.size() != dimension()) throw DimensionMismatch("Burgers jacobian: state length");
    check_finite(state, "Burgers jacobian");
    const Index n = grid_.size();
    const double cx = nu_ / (grid_.hx * grid_.hx);
    const double cy = nu_ / (grid_.hy * grid_.hy);
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(14 * n));
    for (Index j = 0; j < grid_.ny; ++j) {
        for (Index i = 0; i < grid_.nx; ++i) {
            const Index p = grid_.index(i, j);
            const auto st = gather(grid_, state, i, j, t, params_.re);
            const double a = st.p[0];
            const double b = st.p[1];
            const auto wx = derivative_weights(params_.advection, a, grid_.hx);
            const auto wy = derivative_weights(params_.advection, b, grid_.hy);
            for (int c = 0; c < 2; ++c) {
                const Index row = c * n + p;
                const Index off = c * n;
                const double dx = wx[0] * st.w[c] + wx[1] * st.p[c] + wx[2] * st.e[c];
                const double dy = wy[0] * st.s[c] + wy[1] * st.p[c] + wy[2] * st.n[c];
                // f = -a*dx - b*dy + lap, with a = u_p and b = v_p
                entries.emplace_back(row, p, -dx);
                entries.emplace_back(row, n + p, -dy);
                entries.emplace_back(row, off + p, -a * wx[1] - b * wy[1] - 2.0 * cx - 2.0 * cy);
                if (st.iw >= 0) entries.emplace_back(row, off + st.iw, -a * wx[0] + cx);
                if (st.ie >= 0) entries.emplace_back(row, off + st.ie, -a * wx[2] + cx);
                if (st.is >= 0) entries.emplace_back(row, off + st.is, -b * wy[0] + cy);
                if (st.in >= 0) entries.emplace_back(row, off + st.in, -b * wy[2] + cy);
            }
        }
    }
    SparseMatrix jac(2 * n, 2 * n);
    jac.setFromTriplets(entries.begin(), entries.end());
    return jac;
}

Vector burgers_step_residual(const BurgersProblem& problem, const Vector& state, const Vector& prev, double t,
                             double dt) {
    if (state.size() != problem.dimension() || prev.size() != problem.dimension())
        throw DimensionMismatch("burgers_step_residual: state length");
    check_finite(prev, "burgers_step_residual");
    return backward_euler_residual(problem.rhs(state, t), state, prev, dt);
}

// ---------------------------------------------------------------------------
// Heat

double BurstSchedule::amplitude(double t) const {
    if (!(window > 0.0)) throw InvalidArgument("burst window must be positive");
    if (t < 0.0) return 0.0;
    const auto w = static_cast<std::uint64_t>(std::floor(t / window));
    if (w == 0) return initial_amplitude;
    if (w % 2 == 1) return 0.0;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(w >> 32)};
    std::mt19937_64 rng(seq);
    return max_amplitude * std::generate_canonical<double, 53>(rng);
}

HeatGridProblem::HeatGridProblem(const HeatParams& params) : params_(params) {
    if (params.nx < 1 || params.ny < 1) throw InvalidArgument("heat grid needs at least one node per axis");
    if (!(params.length > 0.0) || !(params.thickness > 0.0) || !(params.density > 0.0) ||
        !(params.specific_heat > 0.0))
        throw InvalidArgument("heat geometry and material constants must be positive");
    h_ = params.length / static_cast<double>(std::max(params.nx, params.ny));
    // Load on the middle third of the right column, away from the held edge.
    const Index i_load = params.nx - 1;
    const Index j0 = params.ny / 3;
    const Index j1 = std::max(j0 + 1, params.ny - params.ny / 3);
    for (Index j = j0; j < j1; ++j) load_nodes_.push_back(index(i_load, j));
    probes_ = {index(params.nx / 2, params.ny / 2), index(std::max<Index>(0, params.nx - 1 - params.nx / 8), params.ny / 2)};
}

Vector HeatGridProblem::initial_state() const {
    return Vector::Constant(dimension(), params_.initial_temperature);
}

Vector HeatGridProblem::mass() const {
    return Vector::Constant(dimension(), params_.density * params_.specific_heat * h_ * h_ * params_.thickness);
}

Vector HeatGridProblem::load(double t) const { return burst_excitation(t, params_.burst, *this); }

Vector burst_excitation(double t, const BurstSchedule& schedule, const HeatGridProblem& problem) {
    Vector q = Vector::Zero(problem.dimension());
    if (!problem.params().load_enabled) return q;
    const double amp = schedule.amplitude(t);
    for (Index node : problem.load_nodes()) q(node) = amp;
    return q;
}

// Calls visit(p, neighbour_or_minus_one, neighbour_temperature) once per edge
// seen from node p. Dirichlet neighbours report index -1.
template <class Visit>
void HeatGridProblem::for_each_edge(const Vector& temperature, Visit&& visit) const {
    const Index nx = params_.nx;
    const Index ny = params_.ny;
    const double tb = params_.boundary_temperature;
    for (Index j = 0; j < ny; ++j) {
        for (Index i = 0; i < nx; ++i) {
            const Index p = index(i, j);
            auto side = [&](bool interior, Index q, Side s) {
                if (interior) visit(p, q, temperature(q));
                else if (params_.dirichlet[static_cast<std::size_t>(s)]) visit(p, Index{-1}, tb);
            };
            side(i > 0, i > 0 ? p - 1 : -1, Side::left);
            side(i + 1 < nx, i + 1 < nx ? p + 1 : -1, Side::right);
            side(j > 0, j > 0 ? p - nx : -1, Side::bottom);
            side(j + 1 < ny, j + 1 < ny ? p + nx : -1, Side::top);
        }
    }
}

Vector HeatGridProblem::rhs(const Vector& temperature, double t) const {
    if (temperature.size() != dimension()) throw DimensionMismatch("heat rhs: state length");
    if (!temperature.allFinite()) throw NonFinite("heat rhs: temperature has NaN/Inf entries");
    Vector f = load(t);
    const double th = params_.thickness;
    for_each_edge(temperature, [&](Index p, Index, double tq) {
        const double k = conductivity(0.5 * (temperature(p) + tq));
        if (!(k > 0.0)) throw NegativeConductivity("conductivity " + std::to_string(k) + " at node " + std::to_string(p));
        f(p) -= th * k * (temperature(p) - tq);
    });
    return f;
}

SparseMatrix HeatGridProblem::rhs_jacobian(const Vector& temperature, double) const {
    if (temperature.size() != dimension()) throw DimensionMismatch("heat jacobian: state length");
    if (!temperature.allFinite()) throw NonFinite("heat jacobian: temperature has NaN/Inf entries");
    const double th = params_.thickness;
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(5 * dimension()));
    for_each_edge(temperature, [&](Index p, Index q, double tq) {
        const double k = conductivity(0.5 * (temperature(p) + tq));
        if (!(k > 0.0)) throw NegativeConductivity("conductivity " + std::to_string(k) + " at node " + std::to_string(p));
        const double slope = 0.5 * params_.k1 * (temperature(p) - tq);
        // d/dTp and d/dTq of -th * k(mean) * (Tp - Tq)
        entries.emplace_back(p, p, -th * (k + slope));
        if (q >= 0) entries.emplace_back(p, q, th * (k - slope));
    });
    SparseMatrix jac(dimension(), dimension());
    jac.setFromTriplets(entries.begin(), entries.end());
    return jac;
}

Vector heat_step_residual(const HeatGridProblem& problem, const Vector& temperature, const Vector& prev, double t,
                          double dt) {
    if (temperature.size() != problem.dimension() || prev.size() != problem.dimension())
        throw DimensionMismatch("heat_step_residual: state length");
    return backward_euler_residual(problem.rhs(temperature, t), temperature, prev, dt, problem.mass());
}

}  // namespace adaptrom
