#pragma once

#include "adaptrom/model.hpp"
#include "adaptrom/rom.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace adaptrom {

enum class Strategy { pod_append, f_rom, local_opt };

Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy strategy);

struct AdaptiveConfig {
    Strategy strategy = Strategy::local_opt;
    double eps_rom = 1e-8;
    double eps_fom = 1e-6;
    Index n_sel = 40;
    Index max_modes = 80;
    Index append_count = 1;     // columns taken per POD-append round
    int max_adaptations = -1;   // per solve; negative means no limit
    int max_resets = 20;        // per solve; negative means no limit
    double qr_drop_tol = 1e-10;
    int rom_max_iter = 50;
    LinearSolver full_solver = LinearSolver::dense;  // F-ROM enrichment solve
    bool allow_rank_fallback = true;

    /// Throws ConfigError on an unusable configuration for a model of size full_dim.
    void validate(Index full_dim, Index initial_modes) const;
};

/// Indices of the n_sel largest |r_i|, ties broken by lower index.
std::vector<Index> select_rows(const Vector& residual, Index n_sel);

/// Rows picked by the Boolean selector B: L_J = B^T J and L_r = B^T r.
struct LocalOperators {
    std::vector<Index> rows;
    SparseMatrix jacobian_rows;  // n_sel x N
    Vector residual_rows;        // n_sel
};

LocalOperators local_operators(const SparseMatrix& jacobian, const Vector& residual, std::vector<Index> rows);
LocalOperators local_operators(const FullModel& model, const RomState& rom, std::vector<Index> rows);

/// Rank-one update factors: Psi = Phi + xi psi^T with psi = q / d and
/// xi = L_J^T (L_J L_J^T)^{-1} xi_tilde, xi_tilde = -L_r / d.
struct AuxiliaryUpdate {
    Vector xi;
    Vector psi;
    double magnitude = 0.0;  // d = ||q||
    Vector xi_tilde;
    double psi_tilde = 1.0;
};

struct LocalBasisUpdate {
    Matrix additional;  // Psi, N x n
    AuxiliaryUpdate aux;
    bool rank_deficient = false;
};

/// Closed-form additional basis from the local residual. The only factorization
/// is of the n_sel x n_sel Gram matrix L_J L_J^T.
LocalBasisUpdate additional_basis_local(const RomState& rom, const LocalOperators& local,
                                        bool allow_rank_fallback = true);

/// F-ROM enrichment: the single column solving J psi = r in the full dimension.
Matrix additional_basis_from(const SparseMatrix& jacobian, const Vector& residual,
                             LinearSolver solver = LinearSolver::dense);
Matrix additional_basis_from(const FullModel& model, const RomState& rom, LinearSolver solver = LinearSolver::dense);

/// Remaining POD vectors, handed out in energy order.
class PodPool {
public:
    PodPool() = default;
    explicit PodPool(Matrix remainder) : vectors_(std::move(remainder)) {}

    Index remaining() const noexcept { return vectors_.cols() - next_; }
    Matrix take(Index u);

private:
    Matrix vectors_;
    Index next_ = 0;
};

Matrix additional_basis_pod(PodPool& pool, Index u);

struct ExtendResult {
    Matrix basis;
    Index added = 0;
};

/// Gram-Schmidt (two passes) of Psi against Phi and itself. Columns whose
/// orthogonalized norm is below drop_tol * (max column norm of [Phi Psi]) are dropped.
ExtendResult extend_and_orthonormalize(const Matrix& phi, const Matrix& psi, double drop_tol = 1e-10);

/// Returns the initial dominant basis when phi has more than max_modes columns.
Matrix cap_reset(const Matrix& phi, const Matrix& initial, Index max_modes);

struct AdaptationRecord {
    int round = 0;
    Strategy strategy = Strategy::local_opt;
    Index n_before = 0;
    Index n_after = 0;
    Index candidate_columns = 0;  // columns of Psi before orthonormalization
    double eps = 0.0;             // FOM error that triggered this round
    Index enrich_solve_dim = 0;   // dimension of the linear solve inside the enrichment
    std::int64_t wall_ns = 0;
    bool reset = false;
    bool rank_deficient = false;
};

enum class AdaptStatus { converged, budget_exhausted, stagnated };

struct AdaptResult {
    AdaptStatus status = AdaptStatus::converged;
    double eps = 0.0;
    int adaptations = 0;
    int resets = 0;
    int reduced_iterations = 0;
    std::vector<double> eps_history;  // eps after every reduced solve
    std::vector<AdaptationRecord> trace;
    std::int64_t rom_ns = 0;
    std::int64_t enrich_ns = 0;

    bool converged() const noexcept { return status == AdaptStatus::converged; }
};

/// Solve / check / enrich loop. `initial_basis` is what a cap reset restores;
/// `pool` feeds POD-append (and the zero-solution fallback of local-opt).
AdaptResult adapt_loop(const FullModel& model, RomState& rom, const AdaptiveConfig& config,
                       const Matrix& initial_basis, PodPool* pool = nullptr);

/// Throws AdaptationBudgetExhausted unless the loop converged.
void require_converged(const AdaptResult& result);

}  // namespace adaptrom
