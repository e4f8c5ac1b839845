#include "adaptrom/harness.hpp"

#include "adaptrom/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

namespace adaptrom {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

Side parse_side(const std::string& s) {
    if (s == "left") return Side::left;
    if (s == "right") return Side::right;
    if (s == "bottom") return Side::bottom;
    if (s == "top") return Side::top;
    throw ConfigError("unknown side '" + s + "'");
}

constexpr const char* kSideNames[] = {"left", "right", "bottom", "top"};

std::unique_ptr<SemiDiscreteSystem> make_system(const ExperimentConfig& config, const EvaluationPoint* point) {
    if (config.problem == ProblemKind::burgers) {
        BurgersParams p = config.burgers;
        p.cells = config.cells;
        if (point && point->re) p.re = *point->re;
        return std::make_unique<BurgersProblem>(p);
    }
    if (config.problem == ProblemKind::heat) {
        HeatParams h = config.heat;
        h.burst.seed = config.seed;
        if (point) h.burst.seed = point->burst_seed.value_or(config.seed + 1);
        return std::make_unique<HeatGridProblem>(h);
    }
    throw InvalidArgument("make_system: problem is not time-stepped");
}

int snapshot_steps(const ExperimentConfig& config) {
    return config.snapshot_steps < 0 ? config.steps : config.snapshot_steps;
}

}  // namespace

ProblemKind parse_problem(std::string_view name) {
    if (name == "bratu") return ProblemKind::bratu;
    if (name == "burgers") return ProblemKind::burgers;
    if (name == "heat") return ProblemKind::heat;
    throw ConfigError("unknown problem '" + std::string(name) + "' (expected bratu, burgers or heat)");
}

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::bratu: return "bratu";
        case ProblemKind::burgers: return "burgers";
        case ProblemKind::heat: return "heat";
    }
    return "unknown";
}

std::string EvaluationPoint::label(ProblemKind kind) const {
    std::ostringstream os;
    os.precision(10);
    switch (kind) {
        case ProblemKind::bratu:
            os << "lambda=" << lambda.value_or(0.0);
            if (a) os << ",a=" << *a;
            break;
        case ProblemKind::burgers: os << "re=" << re.value_or(0.0); break;
        case ProblemKind::heat: os << "burst_seed=" << burst_seed.value_or(0); break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Configuration

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"schema_version", "problem", "time", "snapshots", "pod", "adaptive", "newton", "evaluation",
                    "strategies", "seed", "keep_fields"},
                   "config");
    if (get_or<int>(j, "schema_version", kConfigSchemaVersion) != kConfigSchemaVersion)
        throw ConfigError("unsupported config schema_version");

    ExperimentConfig c;
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.keep_fields = get_or<bool>(j, "keep_fields", c.keep_fields);

    if (!j.contains("problem")) throw ConfigError("config needs a 'problem' object");
    const json& p = j.at("problem");
    c.problem = parse_problem(get_or<std::string>(p, "id", ""));
    switch (c.problem) {
        case ProblemKind::bratu:
            reject_unknown(p, {"id", "cells", "a"}, "problem");
            c.cells = get_or<Index>(p, "cells", c.cells);
            c.bratu_a = get_or<double>(p, "a", c.bratu_a);
            break;
        case ProblemKind::burgers: {
            reject_unknown(p, {"id", "cells", "re", "convention", "advection"}, "problem");
            c.cells = get_or<Index>(p, "cells", c.cells);
            c.burgers.re = get_or<double>(p, "re", c.burgers.re);
            const auto conv = get_or<std::string>(p, "convention", "verbatim");
            if (conv == "verbatim") c.burgers.convention = ViscosityConvention::verbatim;
            else if (conv == "physical") c.burgers.convention = ViscosityConvention::physical;
            else throw ConfigError("unknown Burgers convention '" + conv + "'");
            const auto adv = get_or<std::string>(p, "advection", "central");
            if (adv == "central") c.burgers.advection = AdvectionScheme::central;
            else if (adv == "upwind") c.burgers.advection = AdvectionScheme::upwind;
            else throw ConfigError("unknown advection scheme '" + adv + "'");
            break;
        }
        case ProblemKind::heat: {
            reject_unknown(p,
                           {"id", "nx", "ny", "length", "thickness", "density", "specific_heat", "k0", "k1",
                            "boundary_temperature", "initial_temperature", "dirichlet", "burst"},
                           "problem");
            HeatParams& h = c.heat;
            h.nx = get_or<Index>(p, "nx", h.nx);
            h.ny = get_or<Index>(p, "ny", h.ny);
            h.length = get_or<double>(p, "length", h.length);
            h.thickness = get_or<double>(p, "thickness", h.thickness);
            h.density = get_or<double>(p, "density", h.density);
            h.specific_heat = get_or<double>(p, "specific_heat", h.specific_heat);
            h.k0 = get_or<double>(p, "k0", h.k0);
            h.k1 = get_or<double>(p, "k1", h.k1);
            h.boundary_temperature = get_or<double>(p, "boundary_temperature", h.boundary_temperature);
            h.initial_temperature = get_or<double>(p, "initial_temperature", h.initial_temperature);
            if (p.contains("dirichlet")) {
                h.dirichlet = {false, false, false, false};
                for (const auto& s : p.at("dirichlet"))
                    h.dirichlet[static_cast<std::size_t>(parse_side(s.get<std::string>()))] = true;
            }
            if (p.contains("burst")) {
                const json& b = p.at("burst");
                reject_unknown(b, {"window", "max_amplitude", "initial_amplitude"}, "problem.burst");
                h.burst.window = get_or<double>(b, "window", h.burst.window);
                h.burst.max_amplitude = get_or<double>(b, "max_amplitude", h.burst.max_amplitude);
                h.burst.initial_amplitude = get_or<double>(b, "initial_amplitude", h.burst.initial_amplitude);
            }
            c.dt = 0.002;
            c.steps = 6000;
            break;
        }
    }

    if (j.contains("time")) {
        const json& t = j.at("time");
        reject_unknown(t, {"dt", "steps"}, "time");
        c.dt = get_or<double>(t, "dt", c.dt);
        c.steps = get_or<int>(t, "steps", c.steps);
    }
    if (j.contains("snapshots")) {
        const json& s = j.at("snapshots");
        reject_unknown(s, {"lambda_min", "lambda_max", "count", "steps", "solver"}, "snapshots");
        c.lambda_min = get_or<double>(s, "lambda_min", c.lambda_min);
        c.lambda_max = get_or<double>(s, "lambda_max", c.lambda_max);
        c.snapshot_count = get_or<int>(s, "count", c.snapshot_count);
        c.snapshot_steps = get_or<int>(s, "steps", c.snapshot_steps);
        c.snapshot_solver = parse_linear_solver(get_or<std::string>(s, "solver", "sparse"));
    }
    if (j.contains("pod")) {
        const json& s = j.at("pod");
        reject_unknown(s, {"modes", "mean_subtract", "clamp_to_rank"}, "pod");
        c.modes = get_or<Index>(s, "modes", c.modes);
        c.mean_subtract = get_or<bool>(s, "mean_subtract", c.mean_subtract);
        c.clamp_to_rank = get_or<bool>(s, "clamp_to_rank", c.clamp_to_rank);
    }
    if (j.contains("adaptive")) {
        const json& s = j.at("adaptive");
        reject_unknown(s,
                       {"strategy", "eps_rom", "eps_fom", "n_sel", "max_modes", "append_count", "max_adaptations",
                        "max_resets", "qr_drop_tol", "rom_max_iter", "full_solver", "allow_rank_fallback"},
                       "adaptive");
        AdaptiveConfig& a = c.adaptive;
        a.strategy = parse_strategy(get_or<std::string>(s, "strategy", std::string(to_string(a.strategy))));
        a.eps_rom = get_or<double>(s, "eps_rom", a.eps_rom);
        a.eps_fom = get_or<double>(s, "eps_fom", a.eps_fom);
        a.n_sel = get_or<Index>(s, "n_sel", a.n_sel);
        a.max_modes = get_or<Index>(s, "max_modes", a.max_modes);
        a.append_count = get_or<Index>(s, "append_count", a.append_count);
        a.max_adaptations = get_or<int>(s, "max_adaptations", a.max_adaptations);
        a.max_resets = get_or<int>(s, "max_resets", a.max_resets);
        a.qr_drop_tol = get_or<double>(s, "qr_drop_tol", a.qr_drop_tol);
        a.rom_max_iter = get_or<int>(s, "rom_max_iter", a.rom_max_iter);
        a.full_solver = parse_linear_solver(get_or<std::string>(s, "full_solver", "dense"));
        a.allow_rank_fallback = get_or<bool>(s, "allow_rank_fallback", a.allow_rank_fallback);
    }
    if (j.contains("newton")) {
        const json& s = j.at("newton");
        reject_unknown(s, {"tol", "max_iter", "linear_solver"}, "newton");
        c.newton.tol = get_or<double>(s, "tol", c.newton.tol);
        c.newton.max_iter = get_or<int>(s, "max_iter", c.newton.max_iter);
        c.newton.solver = parse_linear_solver(get_or<std::string>(s, "linear_solver", "dense"));
    }
    if (j.contains("evaluation")) {
        for (const json& e : j.at("evaluation")) {
            reject_unknown(e, {"lambda", "a", "re", "burst_seed"}, "evaluation");
            EvaluationPoint pt;
            if (e.contains("lambda")) pt.lambda = e.at("lambda").get<double>();
            if (e.contains("a")) pt.a = e.at("a").get<double>();
            if (e.contains("re")) pt.re = e.at("re").get<double>();
            if (e.contains("burst_seed")) pt.burst_seed = e.at("burst_seed").get<std::uint64_t>();
            c.evaluation.push_back(pt);
        }
    }
    if (j.contains("strategies")) {
        c.strategies.clear();
        for (const json& s : j.at("strategies")) c.strategies.push_back(parse_strategy(s.get<std::string>()));
    } else {
        c.strategies = {c.adaptive.strategy};
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    json p{{"id", std::string(adaptrom::to_string(problem))}};
    switch (problem) {
        case ProblemKind::bratu:
            p["cells"] = cells;
            p["a"] = bratu_a;
            break;
        case ProblemKind::burgers:
            p["cells"] = cells;
            p["re"] = burgers.re;
            p["convention"] = burgers.convention == ViscosityConvention::verbatim ? "verbatim" : "physical";
            p["advection"] = burgers.advection == AdvectionScheme::central ? "central" : "upwind";
            break;
        case ProblemKind::heat: {
            p["nx"] = heat.nx;
            p["ny"] = heat.ny;
            p["length"] = heat.length;
            p["thickness"] = heat.thickness;
            p["density"] = heat.density;
            p["specific_heat"] = heat.specific_heat;
            p["k0"] = heat.k0;
            p["k1"] = heat.k1;
            p["boundary_temperature"] = heat.boundary_temperature;
            p["initial_temperature"] = heat.initial_temperature;
            json sides = json::array();
            for (std::size_t s = 0; s < 4; ++s)
                if (heat.dirichlet[s]) sides.push_back(kSideNames[s]);
            p["dirichlet"] = sides;
            p["burst"] = {{"window", heat.burst.window},
                          {"max_amplitude", heat.burst.max_amplitude},
                          {"initial_amplitude", heat.burst.initial_amplitude}};
            break;
        }
    }
    json eval = json::array();
    for (const auto& e : evaluation) {
        json o = json::object();
        if (e.lambda) o["lambda"] = *e.lambda;
        if (e.a) o["a"] = *e.a;
        if (e.re) o["re"] = *e.re;
        if (e.burst_seed) o["burst_seed"] = *e.burst_seed;
        eval.push_back(o);
    }
    json strategies_json = json::array();
    for (auto s : strategies) strategies_json.push_back(std::string(adaptrom::to_string(s)));
    return {
        {"schema_version", kConfigSchemaVersion},
        {"problem", p},
        {"time", {{"dt", dt}, {"steps", steps}}},
        {"snapshots",
         {{"lambda_min", lambda_min},
          {"lambda_max", lambda_max},
          {"count", snapshot_count},
          {"steps", snapshot_steps},
          {"solver", std::string(adaptrom::to_string(snapshot_solver))}}},
        {"pod", {{"modes", modes}, {"mean_subtract", mean_subtract}, {"clamp_to_rank", clamp_to_rank}}},
        {"adaptive",
         {{"strategy", std::string(adaptrom::to_string(adaptive.strategy))},
          {"eps_rom", adaptive.eps_rom},
          {"eps_fom", adaptive.eps_fom},
          {"n_sel", adaptive.n_sel},
          {"max_modes", adaptive.max_modes},
          {"append_count", adaptive.append_count},
          {"max_adaptations", adaptive.max_adaptations},
          {"max_resets", adaptive.max_resets},
          {"qr_drop_tol", adaptive.qr_drop_tol},
          {"rom_max_iter", adaptive.rom_max_iter},
          {"full_solver", std::string(adaptrom::to_string(adaptive.full_solver))},
          {"allow_rank_fallback", adaptive.allow_rank_fallback}}},
        {"newton",
         {{"tol", newton.tol},
          {"max_iter", newton.max_iter},
          {"linear_solver", std::string(adaptrom::to_string(newton.solver))}}},
        {"evaluation", eval},
        {"strategies", strategies_json},
        {"seed", seed},
        {"keep_fields", keep_fields},
    };
}

void ExperimentConfig::validate() const {
    if (!(adaptive.eps_rom > 0.0) || !(adaptive.eps_fom > 0.0) || !(newton.tol > 0.0))
        throw ConfigError("all tolerances must be positive");
    if (modes < 1) throw ConfigError("pod.modes must be positive");
    if (strategies.empty()) throw ConfigError("at least one strategy is required");
    if (problem == ProblemKind::bratu) {
        if (cells < 2) throw ConfigError("problem.cells must be at least 2");
        if (snapshot_count < 1) throw ConfigError("snapshots.count must be positive");
        if (!(lambda_max > lambda_min)) throw ConfigError("snapshots.lambda_max must exceed lambda_min");
        for (const auto& e : evaluation)
            if (!e.lambda) throw ConfigError("Bratu evaluation points need 'lambda'");
    } else {
        if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
        if (steps < 1) throw ConfigError("time.steps must be positive");
    }
    if (problem == ProblemKind::burgers && cells < 2) throw ConfigError("problem.cells must be at least 2");
}

FieldLayout field_layout(const ExperimentConfig& config) {
    switch (config.problem) {
        case ProblemKind::bratu: return {config.cells - 1, config.cells - 1, 1};
        case ProblemKind::burgers: return {config.cells - 1, config.cells - 1, 2};
        case ProblemKind::heat: return {config.heat.nx, config.heat.ny, 1};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Offline stage

SnapshotMatrix build_snapshots(const ExperimentConfig& config) {
    NewtonOptions opts = config.newton;
    opts.solver = config.snapshot_solver;
    if (config.problem == ProblemKind::bratu) {
        const Grid2D grid = Grid2D::unit_square(config.cells);
        // Continuation along the lower branch, starting from u = 0.
        Vector previous = Vector::Zero(grid.size());
        const auto schedule = uniform_schedule(config.lambda_min, config.lambda_max, config.snapshot_count);
        return collect_snapshots(schedule, [&](double lambda) {
            BratuProblem model(grid, lambda, Vector::Zero(grid.size()));
            previous = newton_solve_full(model, previous, opts).x;
            return previous;
        });
    }
    const auto system = make_system(config, nullptr);
    const int steps = snapshot_steps(config);
    std::vector<double> times(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) times[static_cast<std::size_t>(k)] = (k + 1) * config.dt;
    Vector state = system->initial_state();
    return collect_snapshots(times, [&](double t) {
        BackwardEulerStep step(*system, state, t, config.dt);
        state = newton_solve_full(step, state, opts).x;
        return state;
    });
}

namespace {

OfflineBasis split_basis(const ExperimentConfig& config, PodBasis pod) {
    OfflineBasis out;
    out.modes_used = config.clamp_to_rank ? std::min(config.modes, pod.size()) : config.modes;
    auto split = truncate(pod, out.modes_used);
    out.trial = std::move(split.trial);
    out.remainder = std::move(split.remainder);
    out.pod = std::move(pod);
    return out;
}

}  // namespace

OfflineBasis build_offline(const ExperimentConfig& config, const SnapshotMatrix& snapshots) {
    return split_basis(config, pod_compute(snapshots, config.mean_subtract));
}

OfflineBasis offline_from_basis(const ExperimentConfig& config, Matrix basis) {
    PodBasis pod;
    pod.vectors = std::move(basis);
    return split_basis(config, std::move(pod));
}

// ---------------------------------------------------------------------------
// Online stage

FieldDifference field_difference(const Vector& fom, const Vector& rom) {
    if (fom.size() != rom.size())
        throw ShapeMismatch("field_difference: " + std::to_string(fom.size()) + " vs " + std::to_string(rom.size()));
    FieldDifference out;
    out.difference = fom - rom;
    out.max_abs = out.difference.size() ? out.difference.cwiseAbs().maxCoeff() : 0.0;
    out.l2 = out.difference.norm();
    return out;
}

FullReference solve_full_reference(const ExperimentConfig& config, const EvaluationPoint& point) {
    FullReference out;
    const auto t0 = Clock::now();
    if (config.problem == ProblemKind::bratu) {
        const Grid2D grid = Grid2D::unit_square(config.cells);
        BratuProblem model(grid, point.lambda.value(), point.a.value_or(config.bratu_a));
        auto solved = newton_solve_full(model, model.reference_state(), config.newton);
        out.state = std::move(solved.x);
        out.newton_iterations = solved.iterations;
    } else {
        const auto system = make_system(config, &point);
        auto traj = march_full(*system, config.dt, config.steps, config.newton);
        out.state = std::move(traj.states.back());
        for (int it : traj.newton_iterations) out.newton_iterations += it;
    }
    out.wall_ns = elapsed_ns(t0);
    return out;
}

namespace {

void absorb(ResultRecord& rec, const AdaptResult& res, int step) {
    rec.converged = rec.converged && res.converged();
    rec.final_eps = res.eps;
    rec.max_eps = std::max(rec.max_eps, res.eps);
    rec.adaptations += res.adaptations;
    rec.resets += res.resets;
    rec.times.rom_ns += res.rom_ns;
    rec.times.enrich_ns += res.enrich_ns;
    for (const auto& r : res.trace) {
        rec.enrich_solve_dim = std::max(rec.enrich_solve_dim, r.enrich_solve_dim);
        rec.trace.push_back({step, r});
    }
}

}  // namespace

ResultRecord run_rom(const ExperimentConfig& config, const OfflineBasis& offline, const EvaluationPoint& point,
                     Strategy strategy, const FullReference& reference) {
    ResultRecord rec;
    rec.point = point.label(config.problem);
    rec.strategy = std::string(to_string(strategy));
    rec.initial_basis_size = offline.trial.cols();
    AdaptiveConfig adaptive = config.adaptive;
    adaptive.strategy = strategy;
    PodPool pool(offline.remainder);
    const auto t0 = Clock::now();
    try {
        Vector rom_state;
        if (config.problem == ProblemKind::bratu) {
            const Grid2D grid = Grid2D::unit_square(config.cells);
            BratuProblem model(grid, point.lambda.value(), point.a.value_or(config.bratu_a));
            RomState rom(offline.trial, model.reference_state());
            absorb(rec, adapt_loop(model, rom, adaptive, offline.trial, &pool), 0);
            rom_state = rom.reconstruct();
            rec.final_basis_size = rom.size();
        } else {
            const auto system = make_system(config, &point);
            Vector x = system->initial_state();
            RomState rom(offline.trial, x);
            for (int k = 1; k <= config.steps; ++k) {
                BackwardEulerStep step(*system, x, k * config.dt, config.dt);
                rom.restart(rom.basis(), x);
                absorb(rec, adapt_loop(step, rom, adaptive, offline.trial, &pool), k);
                x = rom.reconstruct();
            }
            rom_state = std::move(x);
            rec.final_basis_size = rom.size();
        }
        rec.diff = field_difference(reference.state, rom_state);
        if (config.keep_fields) {
            rec.fom_field = reference.state;
            rec.rom_field = rom_state;
        }
    } catch (const Error& e) {
        rec.ok = false;
        rec.converged = false;
        rec.error = e.kind() + ": " + e.what();
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.converged = false;
        rec.error = e.what();
    }
    rec.times.total_ns = elapsed_ns(t0);
    return rec;
}

int harness_threads() {
    const char* env = std::getenv("ADAPTROM_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    const int n = std::atoi(env);
    return std::max(1, n);
}

namespace {

template <class Task>
void run_pool(std::size_t count, Task&& task) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(harness_threads()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w)
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) task(i);
        });
    for (auto& t : threads) t.join();
}

struct PlannedRun {
    std::size_t point;
    Strategy strategy;
};

std::vector<FullReference> references_for(const ExperimentConfig& config) {
    std::vector<FullReference> refs(config.evaluation.size());
    run_pool(refs.size(), [&](std::size_t i) { refs[i] = solve_full_reference(config, config.evaluation[i]); });
    return refs;
}

std::vector<ResultRecord> run_planned(const ExperimentConfig& config, const OfflineBasis& offline,
                                      const std::vector<FullReference>& refs) {
    std::vector<PlannedRun> plan;
    for (std::size_t p = 0; p < config.evaluation.size(); ++p)
        for (auto s : config.strategies) plan.push_back({p, s});
    std::vector<ResultRecord> out(plan.size());
    run_pool(plan.size(), [&](std::size_t i) {
        out[i] = run_rom(config, offline, config.evaluation[plan[i].point], plan[i].strategy, refs[plan[i].point]);
    });
    return out;
}

}  // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config, const OfflineBasis& offline) {
    return run_planned(config, offline, references_for(config));
}

BenchTable bench_compare(const ExperimentConfig& config, const OfflineBasis& offline) {
    if (config.strategies.empty()) throw ConfigError("bench needs at least one strategy");
    BenchTable table;
    std::vector<FullReference> refs(config.evaluation.size());
    std::vector<std::string> errors(config.evaluation.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        try {
            refs[i] = solve_full_reference(config, config.evaluation[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    table.records = run_planned(config, offline, refs);
    std::size_t r = 0;
    for (std::size_t p = 0; p < config.evaluation.size(); ++p) {
        BenchRow full;
        full.point = config.evaluation[p].label(config.problem);
        full.model = "full";
        full.ok = errors[p].empty();
        full.error = errors[p];
        full.times.total_ns = refs[p].wall_ns;
        full.times.fom_ns = refs[p].wall_ns;
        full.final_eps = 0.0;
        full.enrich_solve_dim = 0;
        full.final_basis_size = 0;
        full.normalized_time = 1.0;
        table.rows.push_back(full);
        for (std::size_t s = 0; s < config.strategies.size(); ++s, ++r) {
            const ResultRecord& rec = table.records[r];
            BenchRow row;
            row.point = rec.point;
            row.model = rec.strategy;
            row.ok = rec.ok && full.ok;
            row.error = !rec.ok ? rec.error : full.error;
            row.times = rec.times;
            row.final_eps = rec.final_eps;
            row.adaptations = rec.adaptations;
            row.enrich_solve_dim = rec.enrich_solve_dim;
            row.final_basis_size = rec.final_basis_size;
            row.normalized_time = full.times.total_ns > 0
                                      ? static_cast<double>(rec.times.total_ns) / static_cast<double>(full.times.total_ns)
                                      : 0.0;
            table.rows.push_back(row);
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Serialization

json to_json(const AdaptationRecord& r, int step) {
    return {{"round", r.round},
            {"step", step},
            {"strategy", std::string(to_string(r.strategy))},
            {"n_before", r.n_before},
            {"n_after", r.n_after},
            {"candidate_columns", r.candidate_columns},
            {"eps", r.eps},
            {"enrich_solve_dim", r.enrich_solve_dim},
            {"reset", r.reset},
            {"rank_deficient", r.rank_deficient},
            {"wall_ns", r.wall_ns}};
}

namespace {

json times_json(const PhaseTimes& t) {
    return {{"total_ns", t.total_ns}, {"fom_ns", t.fom_ns}, {"rom_ns", t.rom_ns}, {"enrich_ns", t.enrich_ns}};
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

json to_json(const ResultRecord& rec) {
    json trace = json::array();
    for (const auto& t : rec.trace) trace.push_back(to_json(t.record, t.step));
    json out{{"result_schema_version", kResultSchemaVersion},
             {"point", rec.point},
             {"strategy", rec.strategy},
             {"ok", rec.ok},
             {"converged", rec.converged},
             {"final_eps", rec.final_eps},
             {"max_eps", rec.max_eps},
             {"adaptations", rec.adaptations},
             {"resets", rec.resets},
             {"initial_basis_size", rec.initial_basis_size},
             {"final_basis_size", rec.final_basis_size},
             {"enrich_solve_dim", rec.enrich_solve_dim},
             {"difference", {{"max_abs", rec.diff.max_abs}, {"l2", rec.diff.l2}}},
             {"times", times_json(rec.times)},
             {"trace", trace}};
    if (!rec.ok) out["error"] = rec.error;
    if (rec.fom_field.size()) out["fom_field"] = vector_json(rec.fom_field);
    if (rec.rom_field.size()) out["rom_field"] = vector_json(rec.rom_field);
    return out;
}

json to_json(const BenchTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows) {
        json o{{"point", r.point},
               {"model", r.model},
               {"ok", r.ok},
               {"times", times_json(r.times)},
               {"final_eps", r.final_eps},
               {"adaptations", r.adaptations},
               {"enrich_solve_dim", r.enrich_solve_dim},
               {"final_basis_size", r.final_basis_size},
               {"normalized_time", r.normalized_time}};
        if (!r.ok) o["error"] = r.error;
        rows.push_back(o);
    }
    json records = json::array();
    for (const auto& rec : table.records) records.push_back(to_json(rec));
    return {{"result_schema_version", kResultSchemaVersion}, {"rows", rows}, {"records", records}};
}

std::string to_csv(const BenchTable& table) {
    std::ostringstream os;
    os << "point,model,ok,total_ns,fom_ns,rom_ns,enrich_ns,final_eps,adaptations,enrich_solve_dim,"
          "final_basis_size,normalized_time,error\n";
    for (const auto& r : table.rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), '"', '\'');
        os << r.point << ',' << r.model << ',' << (r.ok ? 1 : 0) << ',' << r.times.total_ns << ',' << r.times.fom_ns
           << ',' << r.times.rom_ns << ',' << r.times.enrich_ns << ',' << format_double(r.final_eps) << ','
           << r.adaptations << ',' << r.enrich_solve_dim << ',' << r.final_basis_size << ','
           << format_double(r.normalized_time) << ",\"" << err << "\"\n";
    }
    return os.str();
}

}  // namespace adaptrom
