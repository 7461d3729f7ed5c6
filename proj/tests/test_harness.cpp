#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "lfd/experiment.hpp"
#include "lfd/flow_field.hpp"

using namespace lfd;
namespace fs = std::filesystem;

TEST_CASE("config defaults are filled in") {
    const ExperimentConfig cfg = parse_config(
        R"({"field":{"name":"abc","params":{"A":1,"B":1,"C":1}},"experiment":"helicity"})");
    CHECK(cfg.integrator.h == doctest::Approx(1e-3));
    CHECK(cfg.loop_markers == 256);
    CHECK(cfg.surface_n == 64);
    CHECK(cfg.surface_m == 64);
    CHECK(cfg.box_points == 64);
    CHECK(cfg.tolerance == doctest::Approx(1e-6));
    CHECK(cfg.tolerance_is_relative);
    CHECK_FALSE(cfg.sample_times.empty());
}

TEST_CASE("config validation errors are specific") {
    // malformed document
    CHECK_THROWS_WITH_AS(parse_config("{not json"),
                         doctest::Contains("malformed config document"), ConfigError);
    // unknown experiment
    CHECK_THROWS_WITH_AS(parse_config(R"({"field":{"name":"abc"},"experiment":"foo"})"),
                         doctest::Contains("unknown experiment 'foo'"), ConfigError);
    // unknown field
    CHECK_THROWS_WITH_AS(parse_config(R"({"field":{"name":"tornado"},"experiment":"mass"})"),
                         doctest::Contains("unknown field name"), ConfigError);
    // out-of-range h
    CHECK_THROWS_WITH_AS(
        parse_config(
            R"({"field":{"name":"abc"},"experiment":"mass","integrator":{"h":-1.0}})"),
        doctest::Contains("h must be > 0"), ConfigError);
    // unknown key
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"field":{"name":"abc"},"experiment":"mass","color":"red"})"),
        doctest::Contains("unknown key 'color'"), ConfigError);
    // quadrature out of range
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"field":{"name":"abc"},"experiment":"kelvin",
                         "quadrature":{"loop_markers":4}})"),
        doctest::Contains("loop_markers"), ConfigError);
    // sample times outside [0, t_max]
    CHECK_THROWS_AS(
        parse_config(R"({"field":{"name":"abc"},"experiment":"mass",
                         "integrator":{"t_max":1.0,"sample_times":[0.0,2.0]}})"),
        ConfigError);
    // unknown candidate
    CHECK_THROWS_AS(
        parse_config(R"({"field":{"name":"shear"},"experiment":"clebsch",
                         "geometry":{"candidate":"mystery"}})"),
        ConfigError);
}

TEST_CASE("kelvin experiment on rigid rotation passes at 1e-10") {
    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "rigid"},
        "experiment": "kelvin",
        "geometry": {"loop": {"type": "circle", "center": [0,0,0], "radius": 1.0, "axis": "z"}},
        "integrator": {"h": 1e-3, "t_max": 1.0, "sample_times": [0.0, 0.5, 1.0]},
        "tolerance": 1e-10, "tolerance_kind": "relative"
    })");
    const RunResult r = run_experiment(cfg);
    CHECK(r.pass);
    CHECK(r.max_relative_deviation <= 1e-10);
    CHECK(r.csv_text.find("circulation") != std::string::npos);
}

TEST_CASE("helicity experiment reproduces the beltrami value") {
    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "abc", "params": {"A": 1, "B": 1, "C": 1}},
        "experiment": "helicity",
        "integrator": {"t_max": 0.0},
        "quadrature": {"box_points": 32}
    })");
    const RunResult r = run_experiment(cfg);
    CHECK(r.pass);
    REQUIRE(r.series.rows.size() == 1);
    CHECK(r.series.rows[0].value == doctest::Approx(3.0 * kBoxVolume).epsilon(1e-9));
    CHECK(r.json_text.find("obstruction") != std::string::npos);
}

TEST_CASE("mass experiment on the free expansion hits the exact dilation") {
    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "expansion"},
        "experiment": "mass",
        "geometry": {"seeds": 5},
        "integrator": {"h": 1e-3, "t_max": 1.0, "sample_times": [0.0, 1.0]},
        "tolerance": 1e-8
    })");
    const RunResult r = run_experiment(cfg);
    CHECK(r.pass);
    CHECK(r.max_deviation <= 1e-8);
    CHECK(r.csv_text.rfind("t,a1,a2,a3,x1,x2,x3,J11", 0) == 0);
}

TEST_CASE("clebsch experiment: accept the material pair, reject the axes pair") {
    const ExperimentConfig good = parse_config(R"({
        "field": {"name": "shear"},
        "experiment": "clebsch",
        "geometry": {"seeds": 10, "candidate": "shear_material"},
        "integrator": {"h": 1e-3, "t_max": 1.0, "sample_times": [0.0, 1.0]},
        "quadrature": {"box_points": 10}
    })");
    const RunResult rg = run_experiment(good);
    CHECK(rg.pass);
    CHECK(rg.json_text.find("verdict") != std::string::npos);

    const ExperimentConfig bad = parse_config(R"({
        "field": {"name": "shear"},
        "experiment": "clebsch",
        "geometry": {"seeds": 10, "candidate": "axes"},
        "integrator": {"h": 1e-3, "t_max": 1.0, "sample_times": [0.0, 1.0]},
        "quadrature": {"box_points": 10},
        "expect": "reject"
    })");
    const RunResult rb = run_experiment(bad);
    CHECK(rb.pass);  // the detector fired, which is what this config expects
    CHECK(rb.max_deviation >= 0.1);
}

TEST_CASE("stokes experiment on the rigid disk") {
    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "rigid"},
        "experiment": "stokes",
        "geometry": {"surface": {"type": "disk", "center": [0,0,0], "radius": 1.0, "axis": "z"}},
        "integrator": {"t_max": 0.0},
        "quadrature": {"surface_grid": 64}
    })");
    const RunResult r = run_experiment(cfg);
    CHECK(r.pass);
    CHECK(r.max_deviation <= 1e-6);
}

TEST_CASE("action experiment report fields") {
    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "expansion"},
        "experiment": "action",
        "integrator": {"h": 1e-2, "t_max": 1.0},
        "action": {"ensemble_n": 2, "time_samples": 64, "perturbations": 2}
    })");
    const RunResult r = run_experiment(cfg);
    CHECK(r.pass);
    CHECK(r.json_text.find("action_value") != std::string::npos);
    CHECK(r.json_text.find("first_variation_by_epsilon") != std::string::npos);
    CHECK(r.json_text.find("el_residual_max") != std::string::npos);
    CHECK(r.json_text.find("weak_strong_gap") != std::string::npos);
}

TEST_CASE("action experiment rejects incompressible fields") {
    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "rigid"},
        "experiment": "action"
    })");
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("numeric failures are recorded as failed rows") {
    // an ill-defined gauge makes clebsch8 throw; the run records it and fails
    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "shear"},
        "experiment": "clebsch",
        "geometry": {"seeds": 5, "candidate": "zero", "clebsch8": true},
        "integrator": {"h": 1e-3, "t_max": 0.5, "sample_times": [0.0]},
        "quadrature": {"box_points": 10}
    })");
    const RunResult r = run_experiment(cfg);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.error.empty());
    CHECK(r.csv_text.find("error") != std::string::npos);
    CHECK(r.json_text.find("\"error\"") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical csv output") {
    const std::string doc = R"({
        "field": {"name": "abc"},
        "experiment": "cauchy",
        "geometry": {"seeds": 5},
        "integrator": {"h": 2e-3, "t_max": 1.0, "sample_times": [0.0, 0.5, 1.0]}
    })";
    const RunResult r1 = run_experiment(parse_config(doc));
    const RunResult r2 = run_experiment(parse_config(doc));
    CHECK(r1.csv_text == r2.csv_text);
    CHECK(r1.json_text == r2.json_text);
}

TEST_CASE("sweep: single value gives one row and no fit") {
    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "rigid"},
        "experiment": "kelvin",
        "geometry": {"loop": {"type": "circle", "center": [0,0,0], "radius": 1.0, "axis": "z"}},
        "integrator": {"h": 5e-3, "t_max": 0.5, "sample_times": [0.0, 0.5]}
    })");
    const SweepResult r = sweep(cfg, "loop_markers", {64});
    CHECK(r.values.size() == 1);
    CHECK_FALSE(r.fitted_order.has_value());
    CHECK_THROWS_AS(sweep(cfg, "wingspan", {1.0}), ConfigError);
}

TEST_CASE("sweep: step-size sweep on the invariants recovers the rk4 order") {
    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "abc"},
        "experiment": "cauchy",
        "geometry": {"seeds": 10},
        "integrator": {"h": 1e-3, "t_max": 2.0, "sample_times": [1.0, 2.0]}
    })");
    const SweepResult r = sweep(cfg, "h", {4e-3, 2e-3, 1e-3});
    REQUIRE(r.fitted_order.has_value());
    INFO("fitted order ", *r.fitted_order);
    // the finest point sits a few times above the rounding floor, which can
    // drag the three-point fit somewhat below the asymptotic 4
    CHECK(*r.fitted_order == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("sweep: loop refinement decreases the kelvin deviation monotonically") {
    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "abc"},
        "experiment": "kelvin",
        "geometry": {"loop": {"type": "circle", "center": [3.14159265,3.14159265,3.14159265],
                               "radius": 0.5, "axis": "z"}},
        "integrator": {"h": 2e-3, "t_max": 1.0, "sample_times": [0.0, 1.0]}
    })");
    const SweepResult r = sweep(cfg, "loop_markers", {16, 32, 64});
    REQUIRE(r.deviations.size() == 3);
    CHECK(r.deviations[0] > r.deviations[1]);
    CHECK(r.deviations[1] > r.deviations[2]);
}

TEST_CASE("sweep: surface and box resolution parameters are wired up") {
    const ExperimentConfig helm = parse_config(R"({
        "field": {"name": "abc"},
        "experiment": "helmholtz",
        "geometry": {"surface": {"type": "disk",
                                  "center": [3.14159265,3.14159265,3.14159265],
                                  "radius": 0.5, "axis": "z"}},
        "integrator": {"h": 2e-3, "t_max": 0.5, "sample_times": [0.0, 0.5]}
    })");
    const SweepResult rs = sweep(helm, "surface_grid", {16, 32});
    REQUIRE(rs.deviations.size() == 2);
    CHECK(rs.deviations[0] > rs.deviations[1]);  // coarser grid, larger drift

    const ExperimentConfig hel = parse_config(R"({
        "field": {"name": "abc"},
        "experiment": "helicity",
        "integrator": {"t_max": 0.0}
    })");
    const SweepResult rb = sweep(hel, "box_points", {16, 32});
    REQUIRE(rb.deviations.size() == 2);
    // the integrand is band-limited, both resolutions are already exact
    CHECK(rb.deviations[0] <= 1e-10);
    CHECK(rb.deviations[1] <= 1e-10);
}

TEST_CASE("outputs land under LFD_OUTPUT_DIR and report aggregates them") {
    const fs::path dir = fs::temp_directory_path() / "lfd_harness_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    setenv("LFD_OUTPUT_DIR", dir.c_str(), 1);

    const ExperimentConfig cfg = parse_config(R"({
        "field": {"name": "rigid"},
        "experiment": "kelvin",
        "geometry": {"loop": {"type": "circle", "center": [0,0,0], "radius": 1.0, "axis": "z"}},
        "integrator": {"h": 5e-3, "t_max": 0.5, "sample_times": [0.0, 0.5]},
        "output": {"csv_path": "kelvin.csv", "json_path": "kelvin.json"}
    })");
    const RunResult r = run_and_write(cfg);
    unsetenv("LFD_OUTPUT_DIR");
    CHECK(r.pass);
    CHECK(fs::exists(dir / "kelvin.csv"));
    CHECK(fs::exists(dir / "kelvin.json"));

    const std::string table = report_table(dir.string());
    CHECK(table.find("kelvin") != std::string::npos);
    CHECK(table.find("yes") != std::string::npos);
    fs::remove_all(dir);
}
