#include "fc/pipeline/artifact.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fc/error.hpp"
#include "fc/util/fs.hpp"
#include "fc/util/hash.hpp"
#include "fc/util/text.hpp"

namespace fc::pipeline {

using nlohmann::json;

namespace {

constexpr std::string_view kKindNames[] = {"SyntaxError", "NoAssertion",   "NonSutMethod", "UnqualifiedSignature",
                                           "TestFailure", "RecursiveCall", "Timeout"};
constexpr std::string_view kStatusNames[] = {"draft", "statically_valid", "validated", "cross_validated", "rejected"};

}  // namespace

std::string_view feedback_kind_name(FeedbackKind kind) { return kKindNames[static_cast<int>(kind)]; }

FeedbackKind feedback_kind_from_name(std::string_view name) {
    for (int i = 0; i < 7; ++i) {
        if (kKindNames[i] == name) {
            return static_cast<FeedbackKind>(i);
        }
    }
    throw std::invalid_argument("unknown feedback kind: " + std::string(name));
}

llm::Stage stage_for(FeedbackKind kind) {
    switch (kind) {
        case FeedbackKind::SyntaxError:
        case FeedbackKind::NoAssertion:
        case FeedbackKind::NonSutMethod:
        case FeedbackKind::UnqualifiedSignature:
            return llm::Stage::Compile;
        case FeedbackKind::RecursiveCall:
            return llm::Stage::Instrument;
        case FeedbackKind::TestFailure:
        case FeedbackKind::Timeout:
            return llm::Stage::Execute;
    }
    return llm::Stage::Compile;
}

std::string format_cap(double cap_s) {
    const auto whole = static_cast<long long>(std::llround(cap_s));
    if (whole >= 60 && whole % 60 == 0) {
        return std::to_string(whole / 60) + "min";
    }
    return std::to_string(whole) + "s";
}

namespace feedback {

Feedback syntax_error(std::string_view language) {
    return {FeedbackKind::SyntaxError,
            "Syntax error in " + std::string(language) +
                " code. Make sure that the checker method is indeed a single method, i.e. do not output helper "
                "methods or classes."};
}

Feedback no_assertion() {
    return {FeedbackKind::NoAssertion,
            "The checker does not contain a call to an assertion method. Make sure to include assertions outside "
            "comments."};
}

Feedback non_sut_method(const std::vector<std::string>& signatures) {
    return {FeedbackKind::NonSutMethod,
            "The system under test (SUT) does not contain the following methods: " + util::join(signatures, ", ") +
                ". Make sure that the checker handles methods from the system under analysis rather than built-in "
                "functions or methods from the test suite."};
}

Feedback unqualified_signature(const std::vector<std::string>& signatures) {
    return {FeedbackKind::UnqualifiedSignature,
            "The checker handles methods without fully qualified signature: " + util::join(signatures, ", ") +
                ". Use fully qualified names for the method and all argument types."};
}

Feedback test_failure(std::string_view logs) {
    return {FeedbackKind::TestFailure,
            "The following tests fail: " + std::string(logs) +
                ". The checker should be generic and robust enough to meaningfully satisfy all test cases."};
}

Feedback recursive_call() {
    return {FeedbackKind::RecursiveCall, "This checker is calling a state-changing method. This is not allowed."};
}

Feedback timeout(double cap_s) {
    return {FeedbackKind::Timeout, "The checker is making the tests run for more than " + format_cap(cap_s) + "."};
}

}  // namespace feedback

std::string_view status_name(CheckerStatus status) { return kStatusNames[static_cast<int>(status)]; }

CheckerStatus status_from_name(std::string_view name) {
    for (int i = 0; i < 5; ++i) {
        if (kStatusNames[i] == name) {
            return static_cast<CheckerStatus>(i);
        }
    }
    throw std::invalid_argument("unknown checker status: " + std::string(name));
}

void CheckerArtifact::advance(CheckerStatus next) {
    const bool forward_step = next != CheckerStatus::Rejected && status != CheckerStatus::Rejected &&
                              static_cast<int>(next) == static_cast<int>(status) + 1;
    const bool reject = next == CheckerStatus::Rejected && status != CheckerStatus::Rejected;
    if (!forward_step && !reject) {
        throw std::logic_error("illegal checker status transition " + std::string(status_name(status)) + " -> " +
                               std::string(status_name(next)));
    }
    if (status_history.empty()) {
        status_history.push_back(status);
    }
    status = next;
    status_history.push_back(next);
}

std::vector<std::string> CheckerArtifact::instrumented_signatures() const {
    std::set<std::string> all(handled_signatures.begin(), handled_signatures.end());
    all.insert(state_changing.begin(), state_changing.end());
    return {all.begin(), all.end()};
}

json CheckerArtifact::meta_json() const {
    json history = json::array();
    for (auto k : failure_history) {
        history.push_back(feedback_kind_name(k));
    }
    json statuses = json::array();
    for (auto s : status_history) {
        statuses.push_back(status_name(s));
    }
    return json{{"id", id},
                {"target", target},
                {"status", status_name(status)},
                {"attempts", attempts},
                {"handled_signatures", handled_signatures},
                {"state_changing", state_changing},
                {"imports", imports},
                {"failure_history", history},
                {"last_feedback", last_feedback},
                {"provider_error", provider_error},
                {"status_history", statuses},
                {"transcript", transcript_ref}};
}

CheckerArtifact CheckerArtifact::from_meta(const json& meta, std::string source) {
    CheckerArtifact a;
    a.id = meta.at("id").get<std::string>();
    a.target = meta.value("target", std::string());
    a.checker_source = std::move(source);
    a.status = status_from_name(meta.at("status").get<std::string>());
    a.attempts = meta.value("attempts", 0);
    a.handled_signatures = meta.value("handled_signatures", std::vector<std::string>{});
    a.state_changing = meta.value("state_changing", std::vector<std::string>{});
    a.imports = meta.value("imports", std::vector<std::string>{});
    for (const auto& k : meta.value("failure_history", std::vector<std::string>{})) {
        a.failure_history.push_back(feedback_kind_from_name(k));
    }
    for (const auto& s : meta.value("status_history", std::vector<std::string>{})) {
        a.status_history.push_back(status_from_name(s));
    }
    a.last_feedback = meta.value("last_feedback", std::string());
    a.provider_error = meta.value("provider_error", std::string());
    a.transcript_ref = meta.value("transcript", std::string());
    return a;
}

std::string checker_id_for(std::string_view test_id) { return "c_" + util::sha256_hex(test_id).substr(0, 8); }

void save_artifact(const fs::path& dir, const CheckerArtifact& artifact) {
    util::write_file(dir / "checker.src", artifact.checker_source);
    util::write_file(dir / "meta.json", artifact.meta_json().dump(2) + "\n");
}

CheckerArtifact load_artifact(const fs::path& dir) {
    std::error_code ec;
    if (!fs::exists(dir / "meta.json", ec)) {
        throw DomainError("no checker artifact at " + dir.string());
    }
    const auto meta = json::parse(util::read_file(dir / "meta.json"));
    std::string source;
    if (fs::exists(dir / "checker.src", ec)) {
        source = util::read_file(dir / "checker.src");
    }
    return CheckerArtifact::from_meta(meta, std::move(source));
}

std::vector<CheckerArtifact> load_artifacts(const fs::path& checkers_root) {
    std::vector<CheckerArtifact> out;
    std::error_code ec;
    if (!fs::is_directory(checkers_root, ec)) {
        return out;
    }
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(checkers_root)) {
        if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) {
            dirs.push_back(entry.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
        out.push_back(load_artifact(d));
    }
    return out;
}

CheckerArtifact noop_checker(std::vector<std::string> signatures) {
    CheckerArtifact a;
    a.id = "c_noop";
    a.target = "<none>";
    a.checker_source =
        "def noopChecker(op, shadowState):\n"
        "    # Accepts every operation without touching the shadow state\n"
        "    assertTrue(True)\n";
    std::sort(signatures.begin(), signatures.end());
    a.state_changing = std::move(signatures);
    a.status = CheckerStatus::Validated;
    a.status_history = {CheckerStatus::Draft, CheckerStatus::StaticallyValid, CheckerStatus::Validated};
    return a;
}

}  // namespace fc::pipeline
