// adaptrom: snapshot / pod / run / bench / export-field pipeline stages.

#include "adaptrom/errors.hpp"
#include "adaptrom/harness.hpp"
#include "adaptrom/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace adaptrom;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonArgs {
    std::string config_path;
    std::string problem;
    std::optional<std::string> strategy;
    std::optional<Index> n_sel;
    std::optional<Index> max_modes;
    std::optional<Index> modes;
    std::optional<int> budget;
    std::optional<double> eps_fom;
    std::optional<double> lambda;
    std::optional<double> re;
    std::optional<std::uint64_t> burst_seed;
    std::optional<int> steps;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "Experiment config (JSON)");
    cmd->add_option("--problem", a.problem, "bratu | burgers | heat")
        ->check(CLI::IsMember({"bratu", "burgers", "heat"}));
}

void add_online(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--strategy", a.strategy, "pod-append | f-rom | local-opt")
        ->check(CLI::IsMember({"pod-append", "f-rom", "local-opt"}));
    cmd->add_option("--nsel", a.n_sel, "Selected residual rows for local-opt");
    cmd->add_option("--max-modes", a.max_modes, "Basis size cap");
    cmd->add_option("--modes", a.modes, "Initial POD modes");
    cmd->add_option("--budget", a.budget, "Adaptations per solve (negative: unlimited)");
    cmd->add_option("--eps-fom", a.eps_fom, "FOM residual tolerance");
    cmd->add_option("--lambda", a.lambda, "Bratu evaluation lambda");
    cmd->add_option("--re", a.re, "Burgers evaluation Reynolds number");
    cmd->add_option("--burst-seed", a.burst_seed, "Heat evaluation excitation seed");
    cmd->add_option("--steps", a.steps, "Time steps of the online horizon");
}

ExperimentConfig resolve_config(const CommonArgs& a) {
    ExperimentConfig c;
    if (!a.config_path.empty()) {
        c = ExperimentConfig::load(a.config_path);
        if (!a.problem.empty() && parse_problem(a.problem) != c.problem)
            throw UsageError("--problem " + a.problem + " disagrees with the config problem");
    } else if (!a.problem.empty()) {
        json j{{"problem", {{"id", a.problem}}}};
        c = ExperimentConfig::from_json(j);
    } else {
        throw UsageError("either --config or --problem is required");
    }
    if (a.strategy) {
        c.adaptive.strategy = parse_strategy(*a.strategy);
        c.strategies = {c.adaptive.strategy};
    }
    if (a.n_sel) c.adaptive.n_sel = *a.n_sel;
    if (a.max_modes) c.adaptive.max_modes = *a.max_modes;
    if (a.modes) c.modes = *a.modes;
    if (a.budget) c.adaptive.max_adaptations = *a.budget;
    if (a.eps_fom) c.adaptive.eps_fom = *a.eps_fom;
    if (a.steps) c.steps = *a.steps;
    if (a.lambda || a.re || a.burst_seed) {
        EvaluationPoint p;
        p.lambda = a.lambda;
        p.re = a.re;
        p.burst_seed = a.burst_seed;
        c.evaluation = {p};
    }
    if (c.evaluation.empty()) {
        EvaluationPoint p;
        if (c.problem == ProblemKind::bratu) p.lambda = 3.0;
        if (c.problem == ProblemKind::burgers) p.re = c.burgers.re;
        if (c.problem == ProblemKind::heat) p.burst_seed = c.seed + 1;
        c.evaluation = {p};
    }
    c.validate();
    return c;
}

OfflineBasis offline_for(const ExperimentConfig& c, const std::string& basis_path, const std::string& snapshots_path) {
    if (!basis_path.empty()) return offline_from_basis(c, read_matrix(basis_path));
    if (!snapshots_path.empty()) {
        SnapshotMatrix s;
        s.data = read_matrix(snapshots_path);
        return build_offline(c, s);
    }
    return build_offline(c, build_snapshots(c));
}

void emit(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
}

void print_error(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive-basis reduced-order models: offline snapshots/POD, online enrichment, benchmarks"};
    app.require_subcommand(1);
    CommonArgs args;
    std::string out_path, basis_path, snapshots_path, csv_path, json_path, fom_out, rom_out;
    std::string sv_path;
    std::size_t point_index = 0;

    auto* snapshot = app.add_subcommand("snapshot", "Solve the snapshot schedule and write a ROMX matrix");
    add_common(snapshot, args);
    snapshot->add_option("--out", out_path, "Output ROMX file")->required();

    auto* pod = app.add_subcommand("pod", "Compute the POD basis of a snapshot matrix");
    add_common(pod, args);
    pod->add_option("--snapshots", snapshots_path, "Snapshot ROMX file")->required();
    pod->add_option("--out", out_path, "Output basis ROMX file")->required();
    pod->add_option("--singular-values", sv_path, "Optional JSON file for the singular values");

    auto* run = app.add_subcommand("run", "Adaptive ROM at the evaluation points; prints ResultRecord JSON");
    add_common(run, args);
    add_online(run, args);
    run->add_option("--basis", basis_path, "POD basis ROMX (otherwise built from snapshots)");
    run->add_option("--snapshots", snapshots_path, "Snapshot ROMX used when no basis is given");
    run->add_option("--out", out_path, "Result JSON (default stdout)");

    auto* bench = app.add_subcommand("bench", "Full model vs strategies cost table");
    add_common(bench, args);
    add_online(bench, args);
    bench->add_option("--basis", basis_path, "POD basis ROMX");
    bench->add_option("--snapshots", snapshots_path, "Snapshot ROMX used when no basis is given");
    bench->add_option("--csv", csv_path, "CSV table output");
    bench->add_option("--json", json_path, "JSON table output (default stdout)");

    auto* exportf = app.add_subcommand("export-field", "Write the FOM - ROM difference as a CSV grid");
    add_common(exportf, args);
    add_online(exportf, args);
    exportf->add_option("--basis", basis_path, "POD basis ROMX");
    exportf->add_option("--snapshots", snapshots_path, "Snapshot ROMX used when no basis is given");
    exportf->add_option("--point", point_index, "Evaluation point index");
    exportf->add_option("--out", out_path, "Difference CSV")->required();
    exportf->add_option("--fom-out", fom_out, "Optional FOM field CSV");
    exportf->add_option("--rom-out", rom_out, "Optional ROM field CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("UsageError", e.what());
        std::cerr << app.help();
        return 2;
    }

    try {
        const ExperimentConfig config = resolve_config(args);
        if (snapshot->parsed()) {
            write_matrix(out_path, build_snapshots(config).data);
        } else if (pod->parsed()) {
            SnapshotMatrix s;
            s.data = read_matrix(snapshots_path);
            const PodBasis basis = pod_compute(s, config.mean_subtract);
            write_matrix(out_path, basis.vectors);
            if (!sv_path.empty()) {
                const std::vector<double> sv(basis.singular_values.data(),
                                             basis.singular_values.data() + basis.singular_values.size());
                emit(json{{"singular_values", sv}}, sv_path);
            }
        } else if (run->parsed()) {
            const OfflineBasis offline = offline_for(config, basis_path, snapshots_path);
            json records = json::array();
            for (const auto& r : run_experiment(config, offline)) records.push_back(to_json(r));
            emit(json{{"result_schema_version", kResultSchemaVersion},
                      {"modes_used", offline.modes_used},
                      {"config", config.to_json()},
                      {"results", records}},
                 out_path);
        } else if (bench->parsed()) {
            const OfflineBasis offline = offline_for(config, basis_path, snapshots_path);
            const BenchTable table = bench_compare(config, offline);
            if (!csv_path.empty()) {
                std::ofstream out(csv_path);
                if (!out) throw IoError("cannot write " + csv_path);
                out << to_csv(table);
            }
            emit(to_json(table), json_path);
        } else if (exportf->parsed()) {
            if (point_index >= config.evaluation.size()) throw UsageError("--point is out of range");
            ExperimentConfig c = config;
            c.keep_fields = true;
            const OfflineBasis offline = offline_for(c, basis_path, snapshots_path);
            const EvaluationPoint& point = c.evaluation[point_index];
            const FullReference ref = solve_full_reference(c, point);
            const ResultRecord rec = run_rom(c, offline, point, c.strategies.front(), ref);
            if (!rec.ok) throw std::runtime_error(rec.error);
            const FieldLayout layout = field_layout(c);
            const Index block = layout.nx * layout.ny;
            const auto write_field = [&](const std::string& path, const Vector& v) {
                // Multi-component states are written one block per file suffix.
                if (layout.components == 1) {
                    write_grid_csv(path, std::span<const double>(v.data(), v.size()), layout.nx, layout.ny);
                    return;
                }
                for (int comp = 0; comp < layout.components; ++comp)
                    write_grid_csv(path + "." + std::to_string(comp),
                                   std::span<const double>(v.data() + comp * block, block), layout.nx, layout.ny);
            };
            write_field(out_path, rec.diff.difference);
            if (!fom_out.empty()) write_field(fom_out, rec.fom_field);
            if (!rom_out.empty()) write_field(rom_out, rec.rom_field);
            std::cout << json{{"point", rec.point},
                              {"strategy", rec.strategy},
                              {"max_abs", rec.diff.max_abs},
                              {"l2", rec.diff.l2}}
                             .dump()
                      << '\n';
        }
    } catch (const UsageError& e) {
        print_error("UsageError", e.what());
        std::cerr << app.help();
        return 2;
    } catch (const Error& e) {
        print_error(e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("RuntimeError", e.what());
        return 1;
    }
    return 0;
}
