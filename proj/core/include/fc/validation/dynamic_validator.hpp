#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fc/corpus/selector.hpp"
#include "fc/pipeline/artifact.hpp"
#include "fc/pipeline/refine.hpp"
#include "fc/runner/test_runner.hpp"
#include "fc/subject/project.hpp"

namespace fc::validation {

namespace fs = std::filesystem;

struct RunOutcome {
    std::string checker_id;
    std::size_t tests_run = 0;
    std::vector<std::pair<std::string, std::string>> failures;  // (test id, log excerpt)
    bool recursion_hit = false;
    double wall_time_s = 0.0;
    bool timed_out = false;
    bool infra_error = false;
    std::string log;  // normalized

    bool passed() const { return failures.empty() && !recursion_hit && !timed_out && !infra_error; }
    nlohmann::json to_json() const;
};

// RecursiveCall > Timeout > TestFailure; nullopt for a pass. Depends only on
// the outcome, so identical logs classify identically.
std::optional<pipeline::Feedback> classify(const RunOutcome& outcome, double cap_s);

// Builds the outcome of one finished run. `timed_out` also holds when the
// whole batch exceeded the cap.
RunOutcome make_outcome(std::string checker_id, std::size_t tests_run, const runner::TestRunResult& result,
                        const fs::path& tree, double cap_s);

struct DynamicResult {
    RunOutcome outcome;
    std::optional<pipeline::Feedback> feedback;
};

// Instruments a copy of the project under `workdir` with just `checker`,
// runs split.validation, writes `<workdir>/outcome.json` and on a pass
// advances the checker to validated.
DynamicResult dynamic_validate(pipeline::CheckerArtifact& checker, const corpus::CorpusSplit& split,
                               const subject::SubjectProject& project, const runner::TestRunner& runner,
                               double cap_s, const fs::path& workdir);

// Adapter for the refinement loop; each call gets a fresh workspace under
// `work_root`.
pipeline::DynamicCheck make_dynamic_check(const subject::SubjectProject& project, const runner::TestRunner& runner,
                                          double cap_s, fs::path work_root);

struct CrossValidationReport {
    std::map<std::string, bool> cross_validated;             // checker id -> flag
    std::map<std::string, std::vector<std::string>> violations;  // checker id -> messages
    RunOutcome outcome;

    nlohmann::json to_json() const;
};

// One instrumented tree with every checker in log mode; the full `suite` runs
// once and each violation is attributed by its embedded checker id. Flagged
// checkers advance to cross_validated. Throws InfraError (leaving statuses
// untouched) when the suite cannot run.
CrossValidationReport cross_validate(std::vector<pipeline::CheckerArtifact>& validated,
                                     const subject::SubjectProject& project, const runner::TestRunner& runner,
                                     const std::vector<std::string>& suite, double cap_s, const fs::path& workdir);

// Ids embedded as `[fc-checker <id>]` in `text`, in order of appearance.
std::vector<std::string> attributed_checker_ids(const std::string& text);

}  // namespace fc::validation
