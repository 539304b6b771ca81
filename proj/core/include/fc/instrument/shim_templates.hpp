#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace fc::instrument {

inline constexpr std::string_view kRuntimePackage = "fc_runtime";
inline constexpr std::string_view kGuardMessage = "Checker is calling a state-changing method.";
// Prefix of every checker violation message; followed by the checker id.
inline constexpr std::string_view kViolationTag = "[fc-checker ";

std::string_view shim_init_source();
std::string_view shim_core_source();
std::string shim_config_source(std::string_view on_violation);

// sitecustomize.py recording executed lines of files under FC_COVERAGE_ROOT
// into FC_COVERAGE_OUT at interpreter exit.
std::string_view coverage_probe_source();

// Writes <root>/fc_runtime/{__init__,shim,config}.py and checkers/__init__.py.
void emit_shim(const std::filesystem::path& root, std::string_view on_violation);

}  // namespace fc::instrument
