#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fc/pipeline/artifact.hpp"
#include "fc/runner/test_runner.hpp"
#include "fc/subject/project.hpp"

namespace fc::report {

namespace fs = std::filesystem;

struct OverheadRecord {
    int repeat = 0;
    std::vector<std::string> test_files;
    std::vector<double> baseline_s;
    std::vector<double> checked_s;
    double baseline_mean = 0.0;
    double checked_mean = 0.0;
    double relative = 0.0;     // checked_mean / baseline_mean - 1
    double noise_bound = 0.0;  // configured epsilon
    double baseline_spread = 0.0;  // (max - min) / mean of the baseline runs

    bool within_noise() const { return relative <= noise_bound; }
    nlohmann::json to_json() const;
    static OverheadRecord from_json(const nlohmann::json& j);
};

double mean(const std::vector<double>& xs);

OverheadRecord summarize_overhead(std::vector<double> baseline_s, std::vector<double> checked_s, double noise_bound);

// Runs the files holding the checkers' target tests `repeat` times each,
// alternating plain and instrumented trees. Throws DomainError when a
// baseline run fails.
OverheadRecord measure_overhead(const subject::SubjectProject& project,
                                const std::vector<pipeline::CheckerArtifact>& checkers,
                                const runner::TestRunner& runner, int repeat, double noise_bound,
                                const fs::path& workdir, const std::string& on_violation = "raise");

// Caveat printed with every overhead figure.
inline constexpr const char* kOverheadCaveat =
    "Measured on whole test-file runs, which call instrumented methods far more densely than "
    "production workloads; treat the relative overhead as an upper bound.";

}  // namespace fc::report
