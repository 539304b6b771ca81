#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fc/config.hpp"

namespace fc::report {

namespace fs = std::filesystem;

// Collects whatever the work directory holds (funnel, checkers, ledger,
// cross-validation, mutation and overhead results). Absent pieces are null,
// so a fresh directory yields an empty but well-formed report.
nlohmann::json build_report(const fs::path& work_dir, const Pricing& pricing);

// Fixed-width plain-text rendering of build_report().
std::string render_text(const nlohmann::json& report);

}  // namespace fc::report
