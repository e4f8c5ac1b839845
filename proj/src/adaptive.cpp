#include "adaptrom/adaptive.hpp"

#include "adaptrom/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <string>

namespace adaptrom {

namespace {

using Clock = std::chrono::steady_clock;

// Relative eigenvalue floor of the local Gram matrix.
constexpr double kRankTol = 1e-12;

std::int64_t elapsed_ns(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
    if (name == "pod-append") return Strategy::pod_append;
    if (name == "f-rom") return Strategy::f_rom;
    if (name == "local-opt") return Strategy::local_opt;
    throw ConfigError("unknown strategy '" + std::string(name) + "' (expected pod-append, f-rom or local-opt)");
}

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::pod_append: return "pod-append";
        case Strategy::f_rom: return "f-rom";
        case Strategy::local_opt: return "local-opt";
    }
    return "unknown";
}

void AdaptiveConfig::validate(Index full_dim, Index initial_modes) const {
    if (!(eps_rom > 0.0) || !(eps_fom > 0.0)) throw ConfigError("tolerances must be positive");
    if (strategy == Strategy::local_opt && (n_sel < 1 || n_sel > full_dim))
        throw ConfigError("n_sel must lie in [1, " + std::to_string(full_dim) + "], got " + std::to_string(n_sel));
    if (max_modes < 1) throw ConfigError("max_modes must be positive");
    if (initial_modes > max_modes)
        throw ConfigError("initial basis (" + std::to_string(initial_modes) + " modes) exceeds max_modes");
    if (append_count < 1) throw ConfigError("append_count must be positive");
    if (!(qr_drop_tol > 0.0)) throw ConfigError("qr_drop_tol must be positive");
    if (rom_max_iter < 1) throw ConfigError("rom_max_iter must be positive");
}

std::vector<Index> select_rows(const Vector& residual, Index n_sel) {
    if (n_sel < 1 || n_sel > residual.size())
        throw InvalidArgument("select_rows: n_sel must lie in [1, N]");
    std::vector<Index> order(static_cast<std::size_t>(residual.size()));
    std::iota(order.begin(), order.end(), Index{0});
    const auto by_magnitude = [&](Index a, Index b) {
        const double ma = std::abs(residual(a));
        const double mb = std::abs(residual(b));
        return ma > mb || (ma == mb && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + n_sel, order.end(), by_magnitude);
    order.resize(static_cast<std::size_t>(n_sel));
    return order;
}

LocalOperators local_operators(const SparseMatrix& jacobian, const Vector& residual, std::vector<Index> rows) {
    if (jacobian.rows() != residual.size()) throw DimensionMismatch("local_operators: Jacobian/residual rows");
    if (rows.empty()) throw InvalidArgument("local_operators: no rows selected");
    LocalOperators out;
    const auto n_sel = static_cast<Index>(rows.size());
    out.residual_rows.resize(n_sel);
    std::vector<Triplet> entries;
    for (Index i = 0; i < n_sel; ++i) {
        const Index row = rows[static_cast<std::size_t>(i)];
        if (row < 0 || row >= residual.size()) throw InvalidArgument("local_operators: row index out of range");
        out.residual_rows(i) = residual(row);
        for (SparseMatrix::InnerIterator it(jacobian, row); it; ++it) entries.emplace_back(i, it.col(), it.value());
    }
    out.jacobian_rows.resize(n_sel, jacobian.cols());
    out.jacobian_rows.setFromTriplets(entries.begin(), entries.end());
    out.rows = std::move(rows);
    return out;
}

LocalOperators local_operators(const FullModel& model, const RomState& rom, std::vector<Index> rows) {
    const Vector x = rom.reconstruct();
    return local_operators(model.jacobian(x), model.residual(x), std::move(rows));
}

LocalBasisUpdate additional_basis_local(const RomState& rom, const LocalOperators& local, bool allow_rank_fallback) {
    const Vector& q = rom.coordinates();
    const double d = q.norm();
    if (!(d > 0.0)) throw ZeroRomSolution("local update needs a nonzero ROM solution (||q|| = 0)");
    if (!(local.residual_rows.norm() > 0.0))
        throw ZeroLocalResidual("local residual vanishes at the selected rows; no adaptation needed there");
    if (local.jacobian_rows.cols() != rom.full_dimension())
        throw DimensionMismatch("additional_basis_local: local Jacobian width");

    const SparseMatrix& lj = local.jacobian_rows;
    const Matrix gram = Matrix(lj * lj.transpose());

    LocalBasisUpdate out;
    out.aux.magnitude = d;
    out.aux.psi = q / d;
    out.aux.xi_tilde = -local.residual_rows / d;

    // y = (L_J L_J^T)^{-1} xi_tilde
    Vector y;
    Eigen::LDLT<Matrix> ldlt(gram);
    const Vector diag = ldlt.vectorD().cwiseAbs();
    const double dmax = diag.size() ? diag.maxCoeff() : 0.0;
    const bool full_rank = ldlt.info() == Eigen::Success && dmax > 0.0 && diag.minCoeff() > kRankTol * dmax;
    if (full_rank) {
        y = ldlt.solve(out.aux.xi_tilde);
    } else {
        if (!allow_rank_fallback)
            throw RankDeficientLocalJacobian("local Jacobian rows are not linearly independent");
        std::cerr << "adaptrom: warning: rank-deficient local Jacobian, using pseudo-inverse\n";
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
        const Vector& w = eig.eigenvalues();
        const double wmax = w.cwiseAbs().maxCoeff();
        Vector coeff = eig.eigenvectors().transpose() * out.aux.xi_tilde;
        for (Index i = 0; i < w.size(); ++i) coeff(i) = std::abs(w(i)) > kRankTol * wmax ? coeff(i) / w(i) : 0.0;
        y = eig.eigenvectors() * coeff;
        out.rank_deficient = true;
    }
    out.aux.xi = lj.transpose() * y;
    out.additional = rom.basis() + out.aux.xi * out.aux.psi.transpose();
    return out;
}

Matrix additional_basis_from(const SparseMatrix& jacobian, const Vector& residual, LinearSolver solver) {
    if (!(residual.norm() > 0.0)) throw InvalidArgument("additional_basis_from: residual is zero");
    return solve_full(jacobian, residual, solver);
}

Matrix additional_basis_from(const FullModel& model, const RomState& rom, LinearSolver solver) {
    const Vector x = rom.reconstruct();
    return additional_basis_from(model.jacobian(x), model.residual(x), solver);
}

Matrix PodPool::take(Index u) {
    if (u < 1) throw InvalidArgument("PodPool::take: u must be positive");
    if (u > remaining())
        throw PoolExhausted("POD pool has " + std::to_string(remaining()) + " vectors, " + std::to_string(u) +
                            " requested");
    Matrix out = vectors_.middleCols(next_, u);
    next_ += u;
    return out;
}

Matrix additional_basis_pod(PodPool& pool, Index u) { return pool.take(u); }

ExtendResult extend_and_orthonormalize(const Matrix& phi, const Matrix& psi, double drop_tol) {
    if (phi.cols() + psi.cols() < 1) throw InvalidArgument("extend_and_orthonormalize: no columns");
    if (phi.cols() > 0 && psi.cols() > 0 && phi.rows() != psi.rows())
        throw DimensionMismatch("extend_and_orthonormalize: row counts differ");
    const Index rows = phi.cols() > 0 ? phi.rows() : psi.rows();

    double max_norm = 0.0;
    for (Index c = 0; c < phi.cols(); ++c) max_norm = std::max(max_norm, phi.col(c).norm());
    for (Index c = 0; c < psi.cols(); ++c) max_norm = std::max(max_norm, psi.col(c).norm());
    const double threshold = drop_tol * max_norm;

    Matrix out(rows, phi.cols() + psi.cols());
    out.leftCols(phi.cols()) = phi;
    Index k = phi.cols();
    for (Index c = 0; c < psi.cols(); ++c) {
        Vector v = psi.col(c);
        for (int pass = 0; pass < 2; ++pass)
            for (Index i = 0; i < k; ++i) v -= out.col(i).dot(v) * out.col(i);
        const double norm = v.norm();
        if (!(norm > threshold)) continue;
        out.col(k++) = v / norm;
    }
    return {out.leftCols(k), k - phi.cols()};
}

Matrix cap_reset(const Matrix& phi, const Matrix& initial, Index max_modes) {
    if (phi.cols() <= max_modes) return phi;
    return initial;
}

AdaptResult adapt_loop(const FullModel& model, RomState& rom, const AdaptiveConfig& config, const Matrix& initial_basis,
                       PodPool* pool) {
    config.validate(model.dimension(), rom.size());
    const ReducedNewtonOptions rn{config.eps_rom, config.rom_max_iter};
    AdaptResult out;

    for (int round = 0;; ++round) {
        auto t0 = Clock::now();
        const auto solved = reduced_newton(model, rom, rn);
        out.reduced_iterations += solved.iterations;
        Vector x = rom.reconstruct();
        Vector r = model.residual(x);
        out.eps = r.norm();
        out.eps_history.push_back(out.eps);
        out.rom_ns += elapsed_ns(t0);

        if (out.eps <= config.eps_fom) {
            out.status = AdaptStatus::converged;
            return out;
        }
        if (config.max_adaptations >= 0 && out.adaptations >= config.max_adaptations) {
            out.status = AdaptStatus::budget_exhausted;
            return out;
        }

        t0 = Clock::now();
        AdaptationRecord rec;
        rec.round = round;
        rec.strategy = config.strategy;
        rec.n_before = rom.size();
        rec.eps = out.eps;

        Matrix psi;
        Strategy used = config.strategy;
        if (used == Strategy::local_opt && !(rom.magnitude() > 0.0)) {
            // Lemma precondition fails at q = 0: nudge once, then fall back.
            reduced_newton_step(model, rom);
            x = rom.reconstruct();
            r = model.residual(x);
            if (!(rom.magnitude() > 0.0)) {
                if (pool == nullptr || pool->remaining() < config.append_count)
                    throw ZeroRomSolution("ROM solution stays zero and no POD pool is available");
                used = Strategy::pod_append;
            }
        }
        switch (used) {
            case Strategy::local_opt: {
                const SparseMatrix jac = model.jacobian(x);
                auto local = local_operators(jac, r, select_rows(r, config.n_sel));
                auto update = additional_basis_local(rom, local, config.allow_rank_fallback);
                rec.enrich_solve_dim = static_cast<Index>(local.rows.size());
                rec.rank_deficient = update.rank_deficient;
                psi = std::move(update.additional);
                break;
            }
            case Strategy::f_rom: {
                psi = additional_basis_from(model.jacobian(x), r, config.full_solver);
                rec.enrich_solve_dim = model.dimension();
                break;
            }
            case Strategy::pod_append: {
                if (pool == nullptr) throw PoolExhausted("POD-append needs a pool of remaining POD vectors");
                psi = additional_basis_pod(*pool, config.append_count);
                rec.enrich_solve_dim = 0;
                break;
            }
        }
        rec.candidate_columns = psi.cols();

        auto extended = extend_and_orthonormalize(rom.basis(), psi, config.qr_drop_tol);
        if (extended.basis.cols() > config.max_modes) {
            if (config.max_resets >= 0 && out.resets >= config.max_resets) {
                out.status = AdaptStatus::stagnated;
                return out;
            }
            // The current solution becomes the new reference so the restart keeps its progress.
            rom.restart(cap_reset(extended.basis, initial_basis, config.max_modes), rom.reconstruct());
            rec.reset = true;
            ++out.resets;
        } else if (extended.added == 0) {
            out.status = AdaptStatus::stagnated;
            return out;
        } else {
            rom.set_basis(std::move(extended.basis));
        }
        rec.n_after = rom.size();
        rec.wall_ns = elapsed_ns(t0);
        out.enrich_ns += rec.wall_ns;
        out.trace.push_back(rec);
        ++out.adaptations;
    }
}

void require_converged(const AdaptResult& result) {
    if (!result.converged()) throw AdaptationBudgetExhausted(result.adaptations, result.eps);
}

}  // namespace adaptrom
