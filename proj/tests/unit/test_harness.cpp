#include "support.hpp"

#include "adaptrom/errors.hpp"
#include "adaptrom/harness.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sstream>

using namespace adaptrom;
using namespace testsupport;
using nlohmann::json;

namespace {

json small_bratu() {
    return json::parse(R"({
        "problem": {"id": "bratu", "cells": 10, "a": 0.25},
        "snapshots": {"lambda_min": 0, "lambda_max": 2, "count": 20},
        "pod": {"modes": 3},
        "adaptive": {"n_sel": 81, "max_modes": 20},
        "evaluation": [{"lambda": 3}, {"lambda": 1.5}],
        "strategies": ["f-rom", "local-opt"],
        "seed": 7
    })");
}

// Drops every wall-clock entry so records can be compared across runs.
json without_timing(json j) {
    if (j.is_object()) {
        json out = json::object();
        for (auto& [k, v] : j.items())
            if (k != "times" && k != "wall_ns" && k != "normalized_time") out[k] = without_timing(v);
        return out;
    }
    if (j.is_array()) {
        json out = json::array();
        for (auto& v : j) out.push_back(without_timing(v));
        return out;
    }
    return j;
}

}  // namespace

TEST_CASE("config defaults and round trip") {
    const auto c = ExperimentConfig::from_json(small_bratu());
    CHECK(c.problem == ProblemKind::bratu);
    CHECK(c.cells == 10);
    CHECK(c.modes == 3);
    CHECK(c.adaptive.eps_rom == 1e-8);
    CHECK(c.adaptive.eps_fom == 1e-6);
    CHECK(c.newton.tol == 1e-10);
    CHECK(c.strategies.size() == 2);
    CHECK(c.evaluation.size() == 2);
    const auto again = ExperimentConfig::from_json(c.to_json());
    CHECK(again.to_json() == c.to_json());

    const auto heat = ExperimentConfig::from_json(json::parse(R"({"problem": {"id": "heat"}})"));
    CHECK(heat.dt == 0.002);
    CHECK(heat.steps == 6000);
    CHECK(heat.heat.density == 500.0);
    CHECK(heat.heat.specific_heat == 200.0);
    CHECK(field_layout(heat).nx == 45);
    const auto burgers = ExperimentConfig::from_json(json::parse(R"({"problem": {"id": "burgers"}})"));
    CHECK(burgers.dt == 0.001);
    CHECK(field_layout(burgers).components == 2);
}

TEST_CASE("config errors") {
    auto j = small_bratu();
    j["bogus"] = 1;
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
    j = small_bratu();
    j["adaptive"]["eps_fom"] = -1.0;
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
    j = small_bratu();
    j["strategies"] = {"magic"};
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
    j = small_bratu();
    j["problem"]["id"] = "navier-stokes";
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
    j = small_bratu();
    j["evaluation"] = json::array({json{{"re", 100}}});
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/config.json"), IoError);
}

TEST_CASE("field_difference") {
    const Vector a = Vector::LinSpaced(9, 0.0, 1.0);
    const auto same = field_difference(a, a);
    CHECK(same.difference.norm() == 0.0);
    CHECK(same.max_abs == 0.0);
    const Vector b = a - Vector::Ones(9);
    const auto off = field_difference(a, b);
    CHECK(off.l2 == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(off.max_abs == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(field_difference(a, Vector::Zero(4)), ShapeMismatch);
}

TEST_CASE("run_experiment produces converged records and deterministic output") {
    const auto c = ExperimentConfig::from_json(small_bratu());
    const auto offline = build_offline(c, build_snapshots(c));
    CHECK(offline.modes_used == 3);
    const auto first = run_experiment(c, offline);
    REQUIRE(first.size() == 4);
    for (const auto& r : first) {
        CAPTURE(r.point);
        CAPTURE(r.strategy);
        CHECK(r.ok);
        CHECK(r.converged);
        CHECK(r.final_eps <= c.adaptive.eps_fom);
        CHECK(r.diff.max_abs <= 1e-6);
        CHECK(r.times.total_ns >= 0);
        CHECK(r.times.rom_ns >= 0);
    }
    const auto second = run_experiment(c, offline);
    for (std::size_t i = 0; i < first.size(); ++i)
        CHECK(without_timing(to_json(first[i])) == without_timing(to_json(second[i])));

    setenv("ADAPTROM_THREADS", "3", 1);
    CHECK(harness_threads() == 3);
    const auto threaded = run_experiment(c, offline);
    unsetenv("ADAPTROM_THREADS");
    for (std::size_t i = 0; i < first.size(); ++i)
        CHECK(without_timing(to_json(first[i])) == without_timing(to_json(threaded[i])));
}

TEST_CASE("bench table rows, normalisation and CSV/JSON agreement") {
    auto j = small_bratu();
    j["evaluation"] = json::array({json{{"lambda", 3}}});
    const auto c = ExperimentConfig::from_json(j);
    const auto offline = build_offline(c, build_snapshots(c));
    const auto table = bench_compare(c, offline);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].model == "full");
    CHECK(table.rows[0].normalized_time == 1.0);
    CHECK(table.rows[1].model == "f-rom");
    CHECK(table.rows[1].enrich_solve_dim == 81);
    CHECK(table.rows[2].model == "local-opt");
    CHECK(table.rows[2].enrich_solve_dim == c.adaptive.n_sel);

    const json tj = to_json(table);
    std::istringstream csv(to_csv(table));
    std::string line;
    std::getline(csv, line);
    CHECK(line.rfind("point,model,ok,total_ns", 0) == 0);
    for (const auto& row : tj["rows"]) {
        REQUIRE(std::getline(csv, line));
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        CHECK(cells[0] == row["point"].get<std::string>());
        CHECK(cells[1] == row["model"].get<std::string>());
        CHECK(std::stoll(cells[3]) == row["times"]["total_ns"].get<std::int64_t>());
        CHECK(std::stod(cells[7]) == row["final_eps"].get<double>());
        CHECK(std::stoi(cells[8]) == row["adaptations"].get<int>());
        CHECK(std::stoll(cells[9]) == row["enrich_solve_dim"].get<std::int64_t>());
        CHECK(std::stod(cells[11]) == row["normalized_time"].get<double>());
    }

    auto single = j;
    single["strategies"] = {"f-rom"};
    const auto one = bench_compare(ExperimentConfig::from_json(single), offline);
    CHECK(one.rows.size() == 2);
    CHECK(one.rows[1].normalized_time > 0.0);
}

TEST_CASE("failures become rows, not aborts") {
    auto j = small_bratu();
    j["strategies"] = {"pod-append"};
    j["evaluation"] = json::array({json{{"lambda", 3}}});
    const auto c = ExperimentConfig::from_json(j);
    const auto offline = build_offline(c, build_snapshots(c));
    const auto table = bench_compare(c, offline);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].ok);
    CHECK_FALSE(table.rows[1].ok);
    CHECK(table.rows[1].error.find("PoolExhausted") != std::string::npos);
}

TEST_CASE("time-stepped runs keep the problem's field shape") {
    const auto c = ExperimentConfig::from_json(json::parse(R"({
        "problem": {"id": "burgers", "cells": 6, "re": 50},
        "time": {"dt": 0.001, "steps": 20},
        "pod": {"modes": 3},
        "adaptive": {"n_sel": 10, "max_modes": 20},
        "evaluation": [{"re": 100}],
        "strategies": ["f-rom"],
        "keep_fields": true
    })"));
    const auto offline = build_offline(c, build_snapshots(c));
    const auto records = run_experiment(c, offline);
    REQUIRE(records.size() == 1);
    const auto layout = field_layout(c);
    CHECK(records[0].ok);
    CHECK(records[0].diff.difference.size() == layout.nx * layout.ny * layout.components);
    CHECK(records[0].fom_field.size() == records[0].rom_field.size());
    CHECK(records[0].diff.max_abs <= 1e-6);
}
