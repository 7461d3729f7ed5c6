#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfd/diagnostics.hpp"
#include "lfd/flow_map.hpp"

namespace lfd {

/// Invalid or out-of-range configuration input (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Mass, Cauchy, Kelvin, Helmholtz, Stokes, Clebsch, Helicity, Action };

std::string experiment_name(ExperimentKind kind);

struct LoopSpec {
    std::string type = "circle";
    Vec3 center{0.0, 0.0, 0.0};
    double radius = 0.5;
    int axis = 2;
};

struct SurfaceSpec {
    std::string type = "disk";  // "disk" or "rect"
    Vec3 center{0.0, 0.0, 0.0};
    double radius = 0.5;
    int axis = 2;
    Vec3 origin{0.0, 0.0, 0.0};
    Vec3 edge1{1.0, 0.0, 0.0};
    Vec3 edge2{0.0, 1.0, 0.0};
};

struct ExperimentConfig {
    std::string field_name = "abc";
    std::map<std::string, double> field_params;
    ExperimentKind experiment = ExperimentKind::Mass;

    int seeds = 100;
    LoopSpec loop;
    SurfaceSpec surface;
    std::string candidate = "shear_material";
    bool expect_rejection = false;
    double reject_threshold = 0.1;
    bool run_clebsch8 = false;

    IntegratorConfig integrator{};
    double t_max = 1.0;
    std::vector<double> sample_times;  // filled with defaults when empty

    int loop_markers = 256;
    int surface_n = 64;
    int surface_m = 64;
    int box_points = 64;

    int ensemble_n = 4;
    int time_samples = 256;
    std::vector<double> epsilons{1e-2, 5e-3, 2.5e-3};
    int n_perturbations = 5;

    double tolerance = 0.0;  // 0 = per-experiment default
    bool tolerance_is_relative = false;
    bool tolerance_kind_set = false;

    std::string csv_path;
    std::string json_path;
};

/// Parse and validate a JSON config document. Malformed documents, unknown
/// names and out-of-range parameters raise ConfigError with distinct
/// messages.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

struct RunResult {
    std::string experiment;
    std::string field;
    std::string geometry;
    DiagnosticSeries series;
    double max_deviation = 0.0;
    double max_relative_deviation = 0.0;
    double tolerance = 0.0;
    bool tolerance_is_relative = false;
    bool pass = false;
    std::string error;      // nonempty when a numeric failure was recorded
    std::string csv_text;   // full CSV document (module-specific schema)
    std::string json_text;  // JSON summary document
};

/// Execute the experiment without touching the filesystem.
RunResult run_experiment(const ExperimentConfig& config);

/// Execute and write csv_path / json_path (paths resolved under
/// LFD_OUTPUT_DIR when that variable is set and the path is relative).
RunResult run_and_write(const ExperimentConfig& config);

struct SweepResult {
    std::string parameter;
    std::vector<double> values;
    std::vector<double> deviations;
    std::optional<double> fitted_order;
    std::string csv_text;
    std::string json_text;
};

/// Re-run the experiment for each parameter value (parameter is one of
/// h, loop_markers, surface_grid, box_points) and fit the convergence order
/// of max_deviation against the resolution scale. A single value yields no
/// fit.
SweepResult sweep(const ExperimentConfig& config, const std::string& parameter,
                  const std::vector<double>& values);
SweepResult sweep_and_write(const ExperimentConfig& config, const std::string& parameter,
                            const std::vector<double>& values);

/// Aggregate all *.json summaries under dir into a fixed-width table.
std::string report_table(const std::string& dir);

/// Resolve an output path against $LFD_OUTPUT_DIR (relative paths only).
std::string resolve_output_path(const std::string& path);

}  // namespace lfd
