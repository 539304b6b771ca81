#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fc/runner/test_runner.hpp"

namespace fc::mutation {

namespace fs = std::filesystem;

// Executed lines per file (relative, '/'-separated) during one test run.
class LineCoverage {
public:
    LineCoverage() = default;
    explicit LineCoverage(std::map<std::string, std::set<int>> hits) : hits_(std::move(hits)) {}

    bool executed(const std::string& file, int line) const;
    bool any_executed(const std::string& file, int first_line, int last_line) const;
    const std::map<std::string, std::set<int>>& hits() const { return hits_; }

    static LineCoverage parse(const std::string& json_text);

private:
    std::map<std::string, std::set<int>> hits_;
};

struct CoveredRun {
    runner::TestRunResult result;
    LineCoverage coverage;
};

// Runs `test_ids` on `tree` with the line-tracing probe installed through a
// sitecustomize module written under `probe_dir`.
CoveredRun run_with_coverage(const runner::TestRunner& runner, const fs::path& tree,
                             const std::vector<std::string>& test_ids, const fs::path& probe_dir,
                             std::chrono::milliseconds timeout);

}  // namespace fc::mutation
