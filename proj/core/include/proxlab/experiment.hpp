#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxlab/json_io.hpp"

namespace proxlab {

/// Parsed experiment configuration. Every experiment has complete defaults;
/// the config JSON overrides individual fields. A fixed seed makes reports
/// byte-identical across runs.
struct ExperimentConfig {
    std::string experiment;
    std::optional<json> system;   // descriptor override
    std::optional<double> grid_h;
    std::optional<json> horizon;  // {"N","eps","r","step","delta"} overrides
    std::optional<json> measure;  // measure descriptor override
    std::uint64_t seed = 1;
    std::string output;

    static ExperimentConfig from_json(const json& j);
};

struct ExperimentInfo {
    std::string name;
    std::string anchor;  // the claim the experiment exercises
};
const std::vector<ExperimentInfo>& list_experiments();

struct ExperimentResult {
    json report;                      // contents of report.json (deterministic)
    std::vector<std::string> files;   // artifacts written, relative to outdir
    long long wall_ms = 0;            // written to timing.json, not report.json
};

/// Runs the named pipeline and writes report.json, sub-reports and CSV traces
/// into the output directory. Throws std::invalid_argument for configuration
/// errors and std::runtime_error for numeric failures.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Regenerates the CSV plot files from an existing report.json.
std::vector<std::string> emit_plots(const std::string& report_dir);

}  // namespace proxlab
