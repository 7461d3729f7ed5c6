#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lfd/experiment.hpp"
#include "lfd/field_catalog.hpp"
#include "lfd/flow_field.hpp"

namespace {

// exit codes: 0 pass, 1 verification failure, 2 config error, 3 numeric error
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw lfd::ConfigError("sweep: bad numeric value '" + item + "'");
        }
    }
    if (values.empty()) throw lfd::ConfigError("sweep: --values list is empty");
    return values;
}

int do_run(const std::string& config_path) {
    const lfd::ExperimentConfig cfg = lfd::load_config_file(config_path);
    const lfd::RunResult r = lfd::run_and_write(cfg);
    if (!r.error.empty()) {
        std::cerr << "numeric failure: " << r.error << "\n";
        return kExitNumeric;
    }
    const double dev = r.tolerance_is_relative ? r.max_relative_deviation : r.max_deviation;
    std::printf("%s %s/%s max_deviation=%.6g tolerance=%.6g (%s)\n",
                r.pass ? "PASS" : "FAIL", r.experiment.c_str(), r.field.c_str(), dev,
                r.tolerance, r.tolerance_is_relative ? "relative" : "absolute");
    return r.pass ? kExitPass : kExitFail;
}

int do_sweep(const std::string& config_path, const std::string& param,
             const std::string& values_csv) {
    const lfd::ExperimentConfig cfg = lfd::load_config_file(config_path);
    const std::vector<double> values = parse_value_list(values_csv);
    const lfd::SweepResult r = lfd::sweep_and_write(cfg, param, values);
    std::printf("%-16s %-16s\n", param.c_str(), "max_deviation");
    for (size_t i = 0; i < r.values.size(); ++i)
        std::printf("%-16.6g %-16.6g\n", r.values[i], r.deviations[i]);
    if (r.fitted_order)
        std::printf("fitted convergence order: %.3f\n", *r.fitted_order);
    else
        std::printf("fitted convergence order: n/a (single value)\n");
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lfd - Lagrangian fluid-dynamics conservation-theorem verifier"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list-fields", "List catalog fields and parameters");

    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "Run one experiment from a JSON config");
    run_cmd->add_option("config", run_config, "config JSON path")->required();

    std::string sweep_config, sweep_param, sweep_values;
    auto* sweep_cmd = app.add_subcommand("sweep", "Convergence sweep over one parameter");
    sweep_cmd->add_option("config", sweep_config, "config JSON path")->required();
    sweep_cmd->add_option("--param", sweep_param, "h|loop_markers|surface_grid|box_points")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();

    std::string report_dir;
    auto* report_cmd = app.add_subcommand("report", "Aggregate JSON summaries into a table");
    report_cmd->add_option("dir", report_dir, "directory of summary JSON files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& line : lfd::catalog_summaries()) std::cout << line << "\n";
            return kExitPass;
        }
        if (run_cmd->parsed()) return do_run(run_config);
        if (sweep_cmd->parsed()) return do_sweep(sweep_config, sweep_param, sweep_values);
        if (report_cmd->parsed()) {
            std::cout << lfd::report_table(report_dir);
            return kExitPass;
        }
    } catch (const lfd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const lfd::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
