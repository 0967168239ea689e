#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ncsoliton::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailed = 1,
    kUsageError = 2,
    kNumericalFailure = 3,
};

struct RunConfig {
    std::string subcommand;
    std::map<std::string, std::string> params;  // option name without dashes -> value
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path output_dir;           // relative outputs resolve against it
    std::uint64_t seed = 0;
};

/// Parses argv with CLI11 and merges a `--config` file (key = value lines;
/// flags win). Throws UsageError on unknown keys. Returns std::nullopt-like
/// empty subcommand when only help/version was requested.
RunConfig parse_command_line(int argc, const char* const* argv, std::ostream& out);

/// Checks physical parameters against module preconditions (UsageError /
/// DomainError naming the violated condition).
void validate(const RunConfig& config);

/// Runs one pipeline stage and returns its exit code. Library errors are
/// mapped to exit codes here.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line + validate + dispatch with error reporting.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncsoliton::cli
