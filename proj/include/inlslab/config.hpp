#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inlslab/evolution.hpp"
#include "inlslab/ground_state.hpp"
#include "inlslab/grid.hpp"
#include "inlslab/params.hpp"

namespace inls {

struct OutputConfig {
    std::string dir = "out";
    std::vector<std::string> formats{"csv", "json"};
};

struct EvolveInit {
    std::string initial = "gaussian"; // gaussian | ground-state | profile
    double amplitude = 1.0;
    std::string profile_path;
};

struct SweepConfig {
    std::string axis; // "alpha" | "mu"
    std::vector<double> values;
    int max_runs = 64;
};

struct ClassifyConfig {
    bool query_kminus = false;
    double wp = std::numeric_limits<double>::quiet_NaN(); // precomputed, optional
};

/// Parsed run configuration (nested key-value text with [section] headers,
/// '#' comments). Parse errors carry <file>:<line> and the offending key.
struct RunConfig {
    PhysParams params;
    GridSpec grid;
    SolverOptions solver;
    EvolveConfig evolve;
    EvolveInit evolve_init;
    OutputConfig output;
    SweepConfig sweep;
    ClassifyConfig classify;

    /// grid spec with the weight exponent attached from params
    GridSpec grid_with_alpha() const {
        GridSpec g = grid;
        g.alpha = params.alpha;
        return g;
    }
};

RunConfig parse_config_text(const std::string& text, const std::string& name);
RunConfig parse_config_file(const std::string& path);

/// Environment overrides INLSLAB_<SECTION>_<KEY>, applied on top of the file.
void apply_env_overrides(RunConfig& cfg);

/// Canonical re-serialization (fixed section and key order, 17-digit floats).
std::string canonical_config(const RunConfig& cfg);

} // namespace inls
