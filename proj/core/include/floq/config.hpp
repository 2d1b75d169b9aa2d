#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floq/delay_cocycle.hpp"
#include "floq/floquet_bundle.hpp"

namespace floq {

struct FlowConfig {
    std::string type = "torus"; // "torus" | "telegraph"
    double gamma = 0.41421356237309515;
    double angle0 = 0.0;
    std::uint64_t seed = 1;
    double hold_rate = 1.0;
    int states = 2;
    int state0 = 0;
    bool operator==(const FlowConfig&) const = default;
};

struct CoeffConfig {
    bool tables = false;
    double a0 = 0.0, a1 = 0.0, b0 = 0.0, b1 = 0.0;
    std::vector<double> a_table, b_table;
    bool operator==(const CoeffConfig&) const = default;
};

struct GridConfig {
    int m = 64;
    double p = 2.0;
    bool operator==(const GridConfig&) const = default;
};

struct RunSection {
    int horizon = 200;
    double tol = 1e-10;
    int max_pullback = 200;
    int ensemble_nodes = 512;
    bool operator==(const RunSection&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    std::vector<std::string> formats = {"json", "csv"};
    bool operator==(const OutputConfig&) const = default;
};

struct InitialConfig {
    double head = 1.0;
    std::string tail_kind = "zero"; // "zero" | "const" | "values"
    double tail_value = 0.0;
    std::vector<double> tail_values;
    bool operator==(const InitialConfig&) const = default;
};

struct SweepConfig {
    std::string vary; // "grid_m" | "horizon" | "coefficient"; empty = no sweep
    std::string coefficient = "b0";
    std::vector<double> values;
    bool operator==(const SweepConfig&) const = default;
};

struct RunConfig {
    FlowConfig flow;
    CoeffConfig coeffs;
    GridConfig grid;
    RunSection run;
    OutputConfig output;
    InitialConfig initial;
    SweepConfig sweep;
    bool operator==(const RunConfig&) const = default;
};

/// Parse a JSON config; unknown keys are errors, missing keys take defaults.
/// Throws ConfigError with a message naming the violated invariant.
RunConfig parse_config_text(const std::string& json_text);
RunConfig load_config(const std::string& path);

void validate_config(const RunConfig& cfg);

/// deterministic resolved-config echo (17 significant digits)
std::string config_json(const RunConfig& cfg);

DelayCocycle make_cocycle(const RunConfig& cfg);
BasePoint anchor_point(const RunConfig& cfg);
StateVector initial_state(const RunConfig& cfg, const GridSpec& g);
RunParams run_params(const RunConfig& cfg);

} // namespace floq
