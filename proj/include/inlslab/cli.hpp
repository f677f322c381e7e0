#pragma once

#include <optional>
#include <string>

#include "inlslab/config.hpp"

namespace inls::cli {

// exit codes shared by the CLI and the library entry points
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitDiverged = 4;
inline constexpr int kExitAllRowsFailed = 5;

int cmd_ground_state(const RunConfig& cfg);
int cmd_gn_constant(const RunConfig& cfg);
int cmd_evolve(const RunConfig& cfg);
int cmd_classify(const RunConfig& cfg, const std::string& state_path, const std::string& gs_path,
                 std::optional<double> wp_flag = std::nullopt);
int cmd_sweep(const RunConfig& cfg, int workers);

/// Full argv entry point (subcommands ground-state, evolve, classify, sweep,
/// gn-constant); returns the process exit code.
int run_main(int argc, char** argv);

} // namespace inls::cli
