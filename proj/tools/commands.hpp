#pragma once

// Subcommand implementations behind the `tactile` executable. Each returns
// the process exit status: 0 success, 1 configuration or validation error,
// 2 runtime error.

#include <iosfwd>
#include <string>

namespace tactile::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Environment variable that overrides the scenario's output directory.
inline constexpr const char* kOutDirEnv = "TACTILE_OUT_DIR";

/// Runs the scenario and writes trace_<backend>.csv plus summary.json.
int cmd_run(const std::string& scenario_path, std::ostream& out,
            std::ostream& err);

/// `targets` is a path to a JSON object {"FK": 47, ...} or the object
/// itself; empty means the reference targets. Report goes to `out`.
int cmd_latency(const std::string& targets, std::ostream& out,
                std::ostream& err);

/// Per-column MSE between two trace CSVs, as JSON on `out`.
int cmd_mse(const std::string& a_path, const std::string& b_path,
            std::ostream& out, std::ostream& err);

}  // namespace tactile::cli
