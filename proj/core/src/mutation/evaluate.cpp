#include "fc/mutation/evaluate.hpp"

#include <chrono>

#include "fc/error.hpp"
#include "fc/instrument/instrumenter.hpp"
#include "fc/instrument/shim_templates.hpp"
#include "fc/mutation/coverage.hpp"
#include "fc/util/fs.hpp"

namespace fc::mutation {

nlohmann::json MutationCounts::to_json() const {
    return {{"all", all},
            {"killed_by_target_tests", killed_by_target_tests},
            {"survived", survived},
            {"killed_by_checkers", killed_by_checkers},
            {"not_covered", not_covered},
            {"infra_skipped", infra_skipped}};
}

MutationCounts count_statuses(const std::vector<MutantRecord>& mutants) {
    MutationCounts c;
    for (const auto& m : mutants) {
        if (m.infra_skip || !m.status) {
            ++c.infra_skipped;
            continue;
        }
        ++c.all;
        switch (*m.status) {
            case MutantStatus::NotCovered: ++c.not_covered; break;
            case MutantStatus::KilledByTests: ++c.killed_by_target_tests; break;
            case MutantStatus::Survived: ++c.survived; break;
            case MutantStatus::KilledByChecker: ++c.killed_by_checkers; break;
        }
    }
    return c;
}

MutationReport evaluate_mutants(const subject::SubjectProject& project, std::vector<MutantRecord> mutants,
                                const std::vector<std::string>& target_tests,
                                const std::vector<pipeline::CheckerArtifact>& checkers,
                                const runner::TestRunner& runner, const EvaluateOptions& options) {
    const auto work = options.workdir / "work";
    const auto instr = options.workdir / "instrumented";
    const auto probe = options.workdir / "probe";
    util::reset_directory(options.workdir);
    auto excluded = util::default_excluded_dirs();
    excluded.insert(excluded.end(), project.config.exclude_dirs.begin(), project.config.exclude_dirs.end());
    util::copy_tree(project.root, work, excluded, {fs::absolute(options.workdir)});
    const std::chrono::milliseconds timeout(static_cast<long long>(project.config.timeout_seconds) * 1000);

    MutationReport report;
    report.tree_hash = util::tree_hash(work);

    LineCoverage coverage;
    if (options.use_coverage) {
        auto baseline = run_with_coverage(runner, work, target_tests, probe, timeout);
        if (!baseline.result.ok()) {
            throw DomainError("baseline run of the target tests does not pass:\n" +
                              runner::normalize_log(baseline.result.output, work));
        }
        coverage = std::move(baseline.coverage);
    } else {
        const auto baseline = runner.run(runner::RunRequest{work, target_tests, timeout, {}, {}});
        if (!baseline.ok()) {
            throw DomainError("baseline run of the target tests does not pass:\n" +
                              runner::normalize_log(baseline.output, work));
        }
    }

    std::vector<pipeline::CheckerArtifact> usable;
    for (const auto& c : checkers) {
        if (c.status != pipeline::CheckerStatus::Draft && c.status != pipeline::CheckerStatus::Rejected) {
            usable.push_back(c);
        }
    }

    for (auto& m : mutants) {
        m.status.reset();
        m.infra_skip = false;
        if (options.use_coverage && !coverage.any_executed(m.file, m.line, m.end_line)) {
            m.status = MutantStatus::NotCovered;
            continue;
        }
        std::string original;
        try {
            original = apply_mutant(work, m);
        } catch (const MutantApplyError& e) {
            m.infra_skip = true;
            m.note = e.what();
            continue;
        }
        try {
            const auto plain = runner.run(runner::RunRequest{work, target_tests, timeout, {}, {}});
            if (plain.infra_error && !plain.timed_out) {
                // A mutant that breaks collection still fails the tests.
                m.status = MutantStatus::KilledByTests;
                m.note = "test run aborted";
            } else if (!plain.ok()) {
                m.status = MutantStatus::KilledByTests;
            } else if (usable.empty()) {
                m.status = MutantStatus::Survived;
            } else {
                const auto mutated_project = subject::scan_project(work, project.config);
                auto plan = instrument::InstrumentationPlan::build(usable, mutated_project, instr, options.on_violation);
                instrument::instrument(mutated_project, plan);
                const auto checked = runner.run(runner::RunRequest{instr, target_tests, timeout, {}, {}});
                const bool tagged = checked.output.find(instrument::kViolationTag) != std::string::npos;
                if (!checked.ok() && tagged) {
                    m.status = MutantStatus::KilledByChecker;
                } else {
                    m.status = MutantStatus::Survived;
                    if (!checked.ok()) {
                        m.note = "instrumented run failed without a checker violation";
                    }
                }
            }
        } catch (...) {
            revert_mutant(work, m, original);
            throw;
        }
        revert_mutant(work, m, original);
        if (util::tree_hash(work) != report.tree_hash) {
            report.hash_stable = false;
            throw InfraError("working tree hash changed after reverting " + m.id);
        }
    }
    std::error_code ec;
    fs::remove_all(instr, ec);
    report.counts = count_statuses(mutants);
    report.mutants = std::move(mutants);
    return report;
}

}  // namespace fc::mutation
