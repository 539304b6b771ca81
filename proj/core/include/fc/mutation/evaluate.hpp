#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fc/mutation/mutants.hpp"
#include "fc/pipeline/artifact.hpp"
#include "fc/runner/test_runner.hpp"
#include "fc/subject/project.hpp"

namespace fc::mutation {

struct MutationCounts {
    std::size_t all = 0;
    std::size_t killed_by_target_tests = 0;
    std::size_t survived = 0;
    std::size_t killed_by_checkers = 0;
    std::size_t not_covered = 0;
    std::size_t infra_skipped = 0;  // not part of `all`

    nlohmann::json to_json() const;
};

MutationCounts count_statuses(const std::vector<MutantRecord>& mutants);

struct MutationReport {
    std::vector<MutantRecord> mutants;
    MutationCounts counts;
    std::string tree_hash;  // of the working copy before and after every mutant
    bool hash_stable = true;
};

struct EvaluateOptions {
    fs::path workdir;
    std::string on_violation = "raise";
    bool use_coverage = true;
};

// Evaluates each mutant on a private copy of the project: coverage check,
// plain run of `target_tests`, then a run with `checkers` instrumented.
// Every mutant is reverted and the copy's hash re-checked. Throws DomainError
// when the unmutated target tests fail.
MutationReport evaluate_mutants(const subject::SubjectProject& project, std::vector<MutantRecord> mutants,
                                const std::vector<std::string>& target_tests,
                                const std::vector<pipeline::CheckerArtifact>& checkers,
                                const runner::TestRunner& runner, const EvaluateOptions& options);

}  // namespace fc::mutation
