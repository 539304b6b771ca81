#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace fc::util {

struct ProcessOptions {
    std::filesystem::path cwd;
    // Zero means no limit.
    std::chrono::milliseconds timeout{0};
    // Added to (or overriding) the parent environment.
    std::map<std::string, std::string> env;
};

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string output;  // stdout and stderr, interleaved
    double wall_time_s = 0.0;
};

// Runs `command` through /bin/sh -c in its own process group. On timeout the
// whole group is killed.
ProcessResult run_shell(const std::string& command, const ProcessOptions& options);

// Looks up an executable in PATH (or checks an explicit path).
std::optional<std::filesystem::path> find_executable(const std::string& name);

std::string shell_quote(const std::string& arg);

}  // namespace fc::util
