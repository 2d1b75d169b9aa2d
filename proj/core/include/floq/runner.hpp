#pragma once

#include <filesystem>
#include <string>

#include "floq/config.hpp"
#include "floq/oracles.hpp"

namespace floq {

/// writes via a temp file + rename so partial files never appear
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

/// Subcommand bodies shared by the CLI and the test suites. Each writes its
/// artifacts under cfg.output.dir and returns the process exit code:
/// 0 ok, 1 battery failure, 2 invalid config (thrown as ConfigError by the
/// loaders instead), 3 bundle invariant failure.
int run_simulate(const RunConfig& cfg);
int run_bundle(const RunConfig& cfg);
int run_verify(const RunConfig& cfg, bool inject_fault);
int run_sweep(const RunConfig& cfg, int threads);

/// report serialization with exactly the documented keys
std::string bundle_report_json(const BundleReport& report);
std::string battery_json(const std::vector<OracleResult>& results);

} // namespace floq
