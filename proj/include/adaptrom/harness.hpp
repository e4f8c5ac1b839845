#pragma once

#include "adaptrom/adaptive.hpp"
#include "adaptrom/pod.hpp"
#include "adaptrom/problems.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace adaptrom {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kResultSchemaVersion = 1;

enum class ProblemKind { bratu, burgers, heat };

ProblemKind parse_problem(std::string_view name);
std::string_view to_string(ProblemKind kind);

/// One online evaluation: the fields that apply to the configured problem override its defaults.
struct EvaluationPoint {
    std::optional<double> lambda;             // bratu
    std::optional<double> a;                  // bratu initial-guess exponent
    std::optional<double> re;                 // burgers
    std::optional<std::uint64_t> burst_seed;  // heat evaluation excitation

    std::string label(ProblemKind kind) const;
};

struct ExperimentConfig {
    ProblemKind problem = ProblemKind::bratu;

    // Bratu / Burgers grid: subdivisions per axis (interior unknowns = cells - 1).
    Index cells = 20;
    double bratu_a = 0.25;
    BurgersParams burgers;  // burgers.re is the snapshot Reynolds number
    HeatParams heat;        // heat.burst.seed is the snapshot excitation seed

    double dt = 0.001;
    int steps = 1000;  // online horizon for time-stepped problems

    // Snapshot schedule.
    double lambda_min = 0.0;  // exclusive
    double lambda_max = 2.0;
    int snapshot_count = 1000;  // bratu parameter count
    int snapshot_steps = -1;    // time-stepped; negative means the online horizon

    Index modes = 10;
    bool mean_subtract = false;
    bool clamp_to_rank = true;  // use min(modes, POD rank) instead of failing

    AdaptiveConfig adaptive;
    NewtonOptions newton;
    LinearSolver snapshot_solver = LinearSolver::sparse;

    std::vector<EvaluationPoint> evaluation;
    std::vector<Strategy> strategies{Strategy::local_opt};
    std::uint64_t seed = 1;
    bool keep_fields = false;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    /// Cross-field checks: positive tolerances, known strategies, usable schedule.
    void validate() const;
};

/// Grid shape of a state vector: nx * ny nodes per component.
struct FieldLayout {
    Index nx = 0;
    Index ny = 0;
    int components = 1;
};

FieldLayout field_layout(const ExperimentConfig& config);

SnapshotMatrix build_snapshots(const ExperimentConfig& config);

struct OfflineBasis {
    PodBasis pod;
    Matrix trial;
    Matrix remainder;
    Index modes_used = 0;
};

OfflineBasis build_offline(const ExperimentConfig& config, const SnapshotMatrix& snapshots);
/// Splits a stored POD basis (e.g. read back from ROMX) into trial and pool.
OfflineBasis offline_from_basis(const ExperimentConfig& config, Matrix basis);

struct FieldDifference {
    Vector difference;  // fom - rom
    double max_abs = 0.0;
    double l2 = 0.0;
};

FieldDifference field_difference(const Vector& fom, const Vector& rom);

struct PhaseTimes {
    std::int64_t total_ns = 0;
    std::int64_t fom_ns = 0;
    std::int64_t rom_ns = 0;
    std::int64_t enrich_ns = 0;
};

struct TraceEntry {
    int step = 0;  // time step (0 for steady problems)
    AdaptationRecord record;
};

struct ResultRecord {
    std::string point;
    std::string strategy;
    bool ok = true;
    std::string error;
    bool converged = true;  // every solve reached eps_fom
    double final_eps = 0.0;
    double max_eps = 0.0;
    int adaptations = 0;
    int resets = 0;
    Index initial_basis_size = 0;
    Index final_basis_size = 0;
    Index enrich_solve_dim = 0;  // largest enrichment solve seen
    std::vector<TraceEntry> trace;
    PhaseTimes times;
    FieldDifference diff;
    Vector fom_field;
    Vector rom_field;
};

struct FullReference {
    Vector state;  // steady solution or final time-step state
    std::int64_t wall_ns = 0;
    int newton_iterations = 0;
};

FullReference solve_full_reference(const ExperimentConfig& config, const EvaluationPoint& point);

ResultRecord run_rom(const ExperimentConfig& config, const OfflineBasis& offline, const EvaluationPoint& point,
                     Strategy strategy, const FullReference& reference);

/// All evaluation points times all configured strategies. Independent runs go
/// through a worker pool capped by ADAPTROM_THREADS (default 1).
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config, const OfflineBasis& offline);

struct BenchRow {
    std::string point;
    std::string model;  // "full" or a strategy name
    bool ok = true;
    std::string error;
    PhaseTimes times;
    double final_eps = 0.0;
    int adaptations = 0;
    Index enrich_solve_dim = 0;
    Index final_basis_size = 0;
    double normalized_time = 1.0;  // total / full-model total for the same point
};

struct BenchTable {
    std::vector<BenchRow> rows;
    std::vector<ResultRecord> records;
};

BenchTable bench_compare(const ExperimentConfig& config, const OfflineBasis& offline);

int harness_threads();

nlohmann::json to_json(const AdaptationRecord& record, int step);
nlohmann::json to_json(const ResultRecord& record);
nlohmann::json to_json(const BenchTable& table);
std::string to_csv(const BenchTable& table);

}  // namespace adaptrom
