#pragma once

#include <cstdint>
#include <string>

#include "ifsc/table.hpp"

namespace ifsc {

/// One experiment's worth of settings. Execution-only fields (workers, out)
/// are not part of the artifact identity: outputs are byte-identical for
/// any worker count.
struct RunConfig {
    std::string command;  // rates | outage | bounds | worstcase-grid | cran

    int k = 2;
    double rbt = 16.0;
    double dr_start = 0.0;
    double dr_stop = 8.0;
    double dr_step = 0.25;
    double grid_step = 0.05;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string scheme = "if";          // if | if-suc
    std::string precoder = "cyclo";     // identity | cre | cyclo | file:<path>
    double delta = 0.01;
    std::string alpha_mode = "paper";   // paper | exact
    std::string halve = "on";           // on | off
    int workers = 1;
    std::string out;                    // empty = stdout
    std::string format = "csv";         // csv | json

    // rates / cran inputs
    std::string cov;       // inline JSON matrix
    std::string cov_file;  // path to a JSON matrix
    std::string spectrum;  // inline JSON array of d_i
    int m = 0;             // relay-model transmitters (sampling when > 0)
    double snr = 1.0;

    // worstcase-grid sweep
    double rbt_start = 4.0;
    double rbt_stop = 24.0;
    double rbt_step = 1.0;
};

/// Parse a config JSON document (the schema mirrors the flag names with
/// dashes replaced by underscores). Unknown keys are rejected.
RunConfig config_from_json(const std::string& text);

/// Canonical JSON echo embedded in every artifact; excludes execution-only
/// fields.
std::string config_to_json(const RunConfig& config);

/// Validate and execute one command.
ResultTable run_command(const RunConfig& config);

/// Extract the embedded config from a CSV or JSON artifact (for replay).
RunConfig config_from_artifact(const std::string& artifact_text);

/// Full command line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace ifsc
