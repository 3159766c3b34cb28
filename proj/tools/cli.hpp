#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qspec::cli {

inline constexpr const char* kVersion = "0.1.0";

// Process exit codes; frozen for scripting.
enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct Invocation {
    std::string command;  // spectrum | pseudo | numrange | verify | bench
    std::filesystem::path config_path;
    std::optional<std::filesystem::path> out_dir;
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> suite;
};

/// Canonical form of a config: object keys sorted, compact dump.
std::string canonical_config(const nlohmann::json& config);
/// Hash of the canonical form; independent of key order in the source file.
std::string config_digest(const nlohmann::json& config);

/// Worker count: the flag, then QSPEC_WORKERS, then hardware concurrency.
unsigned resolve_workers(std::optional<unsigned> flag);

/// Runs one command. The envelope goes to `out` as JSON, progress lines to `log`.
/// Payload files are written under inv.out_dir when given.
int run(const Invocation& inv, std::ostream& out, std::ostream& log);

/// Same, with the config already loaded; `base_dir` resolves relative paths in it.
int run(const Invocation& inv, const nlohmann::json& config, const std::filesystem::path& base_dir,
        std::ostream& out, std::ostream& log);

/// Parses argv with CLI11 and dispatches to run().
int main_entry(int argc, char** argv);

} // namespace qspec::cli
