#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "etk/oracle.hpp"
#include "etk/potentials.hpp"

namespace etk {

/// Everything one invocation needs, after merging the JSON config file
/// (same keys as the long flags) with the command line.
struct RunConfig {
    std::string command;  // solve, improve, phi, classify, oracle, sweep
    std::string potential;
    ParamMap params;
    int N = 3;
    double m = 1.0;
    int D = 3;
    std::string state = "bgs";
    std::optional<double> phi;  // improve: use this φ instead of computing it

    std::string figure;
    std::string grid;  // "start:stop:step" or "v1,v2,..."; empty for the figure default
    bool run_oracle = true;
    int threads = 0;
    GaussianBasisConfig oracle;

    std::string out;      // empty: standard output
    std::string format;   // text | json for single runs, csv | json for sweeps
    std::string summary;  // sweep: optional JSON summary path
};

/// Parses "start:stop:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);

/// Parses argv (argv[0] is the program name). Throws Error(Usage) on bad input.
RunConfig parse_run_config(const std::vector<std::string>& args);

/// Executes a parsed configuration, writing results to `out` or to config.out.
void run(const RunConfig& config, std::ostream& out);

/// Full front end: 0 on success, 2 on usage errors, 1 on any other failure,
/// with a one-line diagnostic on `err`.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace etk
