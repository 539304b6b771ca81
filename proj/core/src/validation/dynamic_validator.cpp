#include "fc/validation/dynamic_validator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "fc/error.hpp"
#include "fc/instrument/instrumenter.hpp"
#include "fc/instrument/shim_templates.hpp"
#include "fc/util/fs.hpp"
#include "fc/util/text.hpp"

namespace fc::validation {

using pipeline::CheckerArtifact;
using pipeline::CheckerStatus;
using pipeline::Feedback;

namespace {

constexpr std::size_t kMaxLogChars = 6000;

std::string tail(const std::string& s, std::size_t n) {
    return s.size() <= n ? s : "...\n" + s.substr(s.size() - n);
}

std::string excerpt_for(const std::string& log, const std::string& test_id) {
    for (const auto& line : util::split_lines(log)) {
        if ((util::starts_with(line, "FAILED ") || util::starts_with(line, "ERROR ")) &&
            line.find(test_id) != std::string::npos) {
            return line;
        }
    }
    return {};
}

std::chrono::milliseconds cap_ms(double cap_s) {
    return std::chrono::milliseconds(static_cast<long long>(std::ceil(cap_s * 1000.0)));
}

}  // namespace

nlohmann::json RunOutcome::to_json() const {
    nlohmann::json f = nlohmann::json::array();
    for (const auto& [id, ex] : failures) {
        f.push_back({{"test", id}, {"excerpt", ex}});
    }
    return {{"checker_id", checker_id},   {"tests_run", tests_run},     {"failures", f},
            {"recursion_hit", recursion_hit}, {"wall_time_s", wall_time_s}, {"timed_out", timed_out},
            {"infra_error", infra_error}, {"passed", passed()}};
}

RunOutcome make_outcome(std::string checker_id, std::size_t tests_run, const runner::TestRunResult& result,
                        const fs::path& tree, double cap_s) {
    RunOutcome o;
    o.checker_id = std::move(checker_id);
    o.tests_run = tests_run;
    o.wall_time_s = result.wall_time_s;
    o.timed_out = result.timed_out || result.wall_time_s > cap_s;
    if (o.timed_out && o.wall_time_s < cap_s) {
        o.wall_time_s = cap_s;
    }
    o.infra_error = result.infra_error && !o.timed_out;
    o.log = runner::normalize_log(result.output, tree);
    o.recursion_hit = o.log.find(instrument::kGuardMessage) != std::string::npos;
    for (const auto& id : result.failed) {
        o.failures.emplace_back(id, excerpt_for(o.log, id));
    }
    if (o.failures.empty() && !o.timed_out && !o.infra_error && result.exit_code != 0) {
        o.failures.emplace_back("<suite>", tail(o.log, 400));
    }
    return o;
}

std::optional<Feedback> classify(const RunOutcome& outcome, double cap_s) {
    if (outcome.recursion_hit) {
        return pipeline::feedback::recursive_call();
    }
    if (outcome.timed_out) {
        return pipeline::feedback::timeout(cap_s);
    }
    if (!outcome.failures.empty() || outcome.infra_error) {
        return pipeline::feedback::test_failure(tail(outcome.log, kMaxLogChars));
    }
    return std::nullopt;
}

DynamicResult dynamic_validate(CheckerArtifact& checker, const corpus::CorpusSplit& split,
                               const subject::SubjectProject& project, const runner::TestRunner& runner,
                               double cap_s, const fs::path& workdir) {
    if (checker.status != CheckerStatus::StaticallyValid) {
        throw std::logic_error("dynamic validation needs a statically valid checker, got " +
                               std::string(pipeline::status_name(checker.status)));
    }
    const auto tree = workdir / "tree";
    auto plan = instrument::InstrumentationPlan::build({checker}, project, tree, "raise");
    instrument::instrument(project, plan);

    runner::RunRequest req;
    req.tree = tree;
    req.test_ids = split.validation;
    req.timeout = cap_ms(cap_s);
    const auto result = runner.run(req);

    DynamicResult out;
    out.outcome = make_outcome(checker.id, split.validation.size(), result, tree, cap_s);
    out.feedback = classify(out.outcome, cap_s);
    util::write_file(workdir / "outcome.json", out.outcome.to_json().dump(2) + "\n");
    if (!out.feedback) {
        checker.advance(CheckerStatus::Validated);
    }
    return out;
}

pipeline::DynamicCheck make_dynamic_check(const subject::SubjectProject& project, const runner::TestRunner& runner,
                                          double cap_s, fs::path work_root) {
    auto counter = std::make_shared<int>(0);
    return [&project, &runner, cap_s, work_root = std::move(work_root), counter](
               CheckerArtifact& checker, const corpus::CorpusSplit& split) -> std::optional<Feedback> {
        const auto dir = work_root / (checker.id + "_" + std::to_string((*counter)++));
        auto result = dynamic_validate(checker, split, project, runner, cap_s, dir);
        std::error_code ec;
        fs::remove_all(dir / "tree", ec);
        return result.feedback;
    };
}

std::vector<std::string> attributed_checker_ids(const std::string& text) {
    std::vector<std::string> ids;
    const std::string tag(instrument::kViolationTag);
    for (auto at = text.find(tag); at != std::string::npos; at = text.find(tag, at + 1)) {
        const auto begin = at + tag.size();
        const auto close = text.find(']', begin);
        if (close != std::string::npos) {
            ids.push_back(text.substr(begin, close - begin));
        }
    }
    return ids;
}

nlohmann::json CrossValidationReport::to_json() const {
    return {{"cross_validated", cross_validated}, {"violations", violations}, {"outcome", outcome.to_json()}};
}

CrossValidationReport cross_validate(std::vector<CheckerArtifact>& validated, const subject::SubjectProject& project,
                                     const runner::TestRunner& runner, const std::vector<std::string>& suite,
                                     double cap_s, const fs::path& workdir) {
    CrossValidationReport report;
    if (validated.empty()) {
        return report;
    }
    for (const auto& c : validated) {
        if (c.status != CheckerStatus::Validated && c.status != CheckerStatus::CrossValidated) {
            throw std::logic_error("cross-validation needs validated checkers; " + c.id + " is " +
                                   std::string(pipeline::status_name(c.status)));
        }
    }
    const auto tree = workdir / "tree";
    auto plan = instrument::InstrumentationPlan::build(validated, project, tree, "log");
    instrument::instrument(project, plan);
    const auto sink = workdir / "violations.log";
    std::error_code ec;
    fs::remove(sink, ec);

    runner::RunRequest req;
    req.tree = tree;
    req.test_ids = suite;
    req.timeout = cap_ms(cap_s);
    req.env["FC_VIOLATIONS_OUT"] = fs::absolute(sink).string();
    const auto result = runner.run(req);
    report.outcome = make_outcome("*", suite.size(), result, tree, cap_s);
    if (report.outcome.infra_error || report.outcome.timed_out) {
        throw InfraError("cross-validation suite did not complete: " + tail(report.outcome.log, 2000));
    }

    const auto violations_text = fs::exists(sink) ? util::read_file(sink) : std::string();
    for (const auto& line : util::split_lines(violations_text)) {
        for (const auto& id : attributed_checker_ids(line)) {
            report.violations[id].push_back(line);
        }
    }
    // In log mode a violation never fails a test; anything the suite still
    // reports failing is attributed through the tags in its log.
    for (const auto& id : attributed_checker_ids(report.outcome.log)) {
        if (report.violations.count(id) == 0) {
            report.violations[id].push_back("tagged failure in suite log");
        }
    }
    for (auto& c : validated) {
        const bool clean = report.violations.count(c.id) == 0;
        report.cross_validated[c.id] = clean;
        if (clean && c.status == CheckerStatus::Validated) {
            c.advance(CheckerStatus::CrossValidated);
        }
    }
    util::write_file(workdir / "cross_validation.json", report.to_json().dump(2) + "\n");
    return report;
}

}  // namespace fc::validation
