#include <fstream>
#include <iostream>
#include <string>
#include <system_error>

#include <CLI11.hpp>

#include "proxlab/experiment.hpp"

namespace {

// 0 run ok, 2 config error, 3 runtime numeric failure, 4 output not writable.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;
constexpr int kOutputError = 4;

int run_command(const std::string& config_path, const std::string& out_override) {
    proxlab::json config_json;
    {
        std::ifstream f(config_path);
        if (!f) {
            std::cerr << "cannot open config: " << config_path << "\n";
            return kConfigError;
        }
        try {
            f >> config_json;
        } catch (const std::exception& e) {
            std::cerr << "config parse error: " << e.what() << "\n";
            return kConfigError;
        }
    }
    try {
        proxlab::ExperimentConfig cfg = proxlab::ExperimentConfig::from_json(config_json);
        if (!out_override.empty()) cfg.output = out_override;
        const auto result = proxlab::run_experiment(cfg);
        std::cout << "experiment " << cfg.experiment << " finished in " << result.wall_ms
                  << " ms\n";
        for (const auto& [key, v] : result.report.at("verdicts").items())
            std::cout << "  " << key << ": " << v.at("value").dump() << "  ("
                      << v.at("source").get<std::string>() << ")\n";
        std::cout << "report: " << cfg.output << "/report.json\n";
        return kOk;
    } catch (const std::system_error& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return kOutputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return kRuntimeError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proxlab: finite-horizon laboratory for proximal-cell dynamics"};
    app.require_subcommand(1);

    std::string config_path, out_dir, report_dir;
    auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");

    auto* list = app.add_subcommand("list-experiments", "list experiment names");

    auto* plots = app.add_subcommand("emit-plots", "regenerate CSVs from a report directory");
    plots->add_option("--report", report_dir, "directory containing report.json")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return run_command(config_path, out_dir);
    if (list->parsed()) {
        for (const auto& info : proxlab::list_experiments())
            std::cout << info.name << "\n    " << info.anchor << "\n";
        return kOk;
    }
    if (plots->parsed()) {
        try {
            for (const auto& f : proxlab::emit_plots(report_dir)) std::cout << f << "\n";
            return kOk;
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kConfigError;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kRuntimeError;
        }
    }
    return kConfigError;
}
